#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "photonz/distribution.hpp"
#include "photonz/equivalence.hpp"
#include "photonz/estimation.hpp"
#include "photonz/measurement.hpp"
#include "photonz/spd.hpp"

namespace photonz {

// CSV schemas (all doubles written with 17 significant digits, so files
// round-trip losslessly and identical runs produce identical bytes):
//   quadratures: header "x3,p4" or "x3,p4,theta"
//   z values:    header "z"
//   SPD curve:   header "threshold,efficiency,dark_count,ratio"
//   histogram:   header "n,probability"

std::string format_double(double v);

void write_quadrature_csv(const std::filesystem::path& path, const QuadratureBatch& batch);
QuadratureBatch read_quadrature_csv(const std::filesystem::path& path);

void write_z_csv(const std::filesystem::path& path, const ZBatch& batch);
ZBatch read_z_csv(const std::filesystem::path& path);

void write_spd_csv(const std::filesystem::path& path,
                   const std::vector<ThresholdCurvePoint>& curve);
void write_histogram_csv(const std::filesystem::path& path, const PhotonDistribution& dist);

nlohmann::json to_json(const PhotonDistribution& dist);
PhotonDistribution distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EMResult& result);
EMResult em_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MomentSummary& summary);
nlohmann::json to_json(const EquivalenceReport& report);
nlohmann::json to_json(const std::vector<ThresholdCurvePoint>& curve);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace photonz
