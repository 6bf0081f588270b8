#include "photonz/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "photonz/errors.hpp"

namespace photonz {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_field(const std::string& field, const std::filesystem::path& path, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0' || errno == ERANGE)
        throw parse_error(path.string() + ": line " + std::to_string(line) +
                          ": cannot parse number '" + field + "'");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_quadrature_csv(const std::filesystem::path& path, const QuadratureBatch& batch) {
    auto out = open_out(path);
    const bool with_theta = batch.phases.has_value();
    out << (with_theta ? "x3,p4,theta\n" : "x3,p4\n");
    for (std::size_t i = 0; i < batch.samples.size(); ++i) {
        out << format_double(batch.samples[i].x3) << ',' << format_double(batch.samples[i].p4);
        if (with_theta) out << ',' << format_double((*batch.phases)[i]);
        out << '\n';
    }
}

QuadratureBatch read_quadrature_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw parse_error(path.string() + ": line 1: empty file, expected header");
    strip_cr(line);
    bool with_theta;
    if (line == "x3,p4")
        with_theta = false;
    else if (line == "x3,p4,theta")
        with_theta = true;
    else
        throw parse_error(path.string() +
                          ": line 1: expected header 'x3,p4' or 'x3,p4,theta', got '" + line + "'");

    QuadratureBatch batch;
    if (with_theta) batch.phases.emplace();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        const std::size_t expected = with_theta ? 3 : 2;
        if (fields.size() != expected)
            throw parse_error(path.string() + ": line " + std::to_string(lineno) + ": expected " +
                              std::to_string(expected) + " fields, got " +
                              std::to_string(fields.size()));
        QuadratureSample s;
        s.x3 = parse_field(fields[0], path, lineno);
        s.p4 = parse_field(fields[1], path, lineno);
        batch.samples.push_back(s);
        if (with_theta) batch.phases->push_back(parse_field(fields[2], path, lineno));
    }
    if (batch.samples.empty())
        throw parse_error(path.string() + ": no data rows");
    return batch;
}

void write_z_csv(const std::filesystem::path& path, const ZBatch& batch) {
    auto out = open_out(path);
    out << "z\n";
    for (double z : batch.values) out << format_double(z) << '\n';
}

ZBatch read_z_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw parse_error(path.string() + ": line 1: empty file, expected header");
    strip_cr(line);
    if (line != "z")
        throw parse_error(path.string() + ": line 1: expected header 'z', got '" + line + "'");

    ZBatch batch;
    batch.source_tag = path.filename().string();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const double z = parse_field(line, path, lineno);
        if (!(z >= 0.0))
            throw parse_error(path.string() + ": line " + std::to_string(lineno) +
                              ": z must be >= 0, got " + line);
        batch.values.push_back(z);
    }
    if (batch.values.empty()) throw parse_error(path.string() + ": no data rows");
    return batch;
}

void write_spd_csv(const std::filesystem::path& path,
                   const std::vector<ThresholdCurvePoint>& curve) {
    auto out = open_out(path);
    out << "threshold,efficiency,dark_count,ratio\n";
    for (const auto& pt : curve)
        out << format_double(pt.threshold) << ',' << format_double(pt.efficiency) << ','
            << format_double(pt.dark_count) << ',' << format_double(pt.ratio) << '\n';
}

void write_histogram_csv(const std::filesystem::path& path, const PhotonDistribution& dist) {
    auto out = open_out(path);
    out << "n,probability\n";
    for (int n = 0; n <= dist.n_max(); ++n)
        out << n << ',' << format_double(dist.probs[n]) << '\n';
}

nlohmann::json to_json(const PhotonDistribution& dist) {
    return nlohmann::json{{"n_max", dist.n_max()},
                          {"probs", dist.probs},
                          {"truncated_mass", dist.truncated_mass}};
}

PhotonDistribution distribution_from_json(const nlohmann::json& j) {
    try {
        auto probs = j.at("probs").get<std::vector<double>>();
        const double mass = j.at("truncated_mass").get<double>();
        const int n_max = j.at("n_max").get<int>();
        if (n_max + 1 != static_cast<int>(probs.size()))
            throw parse_error("distribution JSON: n_max does not match probs length");
        return distribution_from_probs(std::move(probs), mass);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("distribution JSON: ") + e.what());
    }
}

nlohmann::json to_json(const EMResult& result) {
    return nlohmann::json{{"distribution", to_json(result.distribution)},
                          {"loglik_trace", result.loglik_trace},
                          {"iterations", result.iterations},
                          {"converged", result.converged}};
}

EMResult em_result_from_json(const nlohmann::json& j) {
    try {
        EMResult r;
        r.distribution = distribution_from_json(j.at("distribution"));
        r.loglik_trace = j.at("loglik_trace").get<std::vector<double>>();
        r.iterations = j.at("iterations").get<int>();
        r.converged = j.at("converged").get<bool>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("EM result JSON: ") + e.what());
    }
}

nlohmann::json to_json(const MomentSummary& summary) {
    nlohmann::json j{{"mean_n", summary.mean_n},
                     {"var_n", summary.var_n},
                     {"mean_z", summary.mean_z},
                     {"mean_z2", summary.mean_z2},
                     {"sample_count", summary.sample_count},
                     {"g2_defined", summary.g2.has_value()}};
    j["g2"] = summary.g2 ? nlohmann::json(*summary.g2) : nlohmann::json();
    return j;
}

nlohmann::json to_json(const EquivalenceReport& report) {
    const auto model = [](const std::array<double, 2>& mean, const std::array<double, 3>& cov) {
        return nlohmann::json{{"mean_x3", mean[0]},
                              {"mean_p4", mean[1]},
                              {"var_x3", cov[0]},
                              {"var_p4", cov[1]},
                              {"cov_x3_p4", cov[2]}};
    };
    return nlohmann::json{{"model_a", model(report.mean_a, report.cov_a)},
                          {"model_b", model(report.mean_b, report.cov_b)},
                          {"analytic_max_discrepancy", report.analytic_max_discrepancy},
                          {"ks_x3", report.ks_x3},
                          {"ks_p4", report.ks_p4},
                          {"ks_critical_1pct", report.ks_critical_1pct},
                          {"count", report.count},
                          {"seed", report.seed}};
}

nlohmann::json to_json(const std::vector<ThresholdCurvePoint>& curve) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pt : curve)
        arr.push_back(nlohmann::json{{"threshold", pt.threshold},
                                     {"efficiency", pt.efficiency},
                                     {"dark_count", pt.dark_count},
                                     {"ratio", pt.ratio}});
    return arr;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path.string() + ": " + e.what());
    }
}

}  // namespace photonz
