#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "photonz/distribution.hpp"

namespace photonz {

struct QuadratureSample {
    double x3 = 0.0;
    double p4 = 0.0;
};

// Paired conjugate-homodyne outcomes in shot-noise units: the vacuum variance
// of each quadrature is 1/2. calibrated asserts that convention holds (set by
// the samplers and by the ingest calibration step).
struct QuadratureBatch {
    std::vector<QuadratureSample> samples;
    std::optional<std::vector<double>> phases;  // per-pulse phase, radians
    bool calibrated = false;
};

// Batch of z = x3^2 + p4^2 outcomes; every value is >= 0.
struct ZBatch {
    std::vector<double> values;
    std::string source_tag;
};

// Detector efficiency plus additive zero-mean Gaussian quadrature noise,
// applied after loss.
struct DetectorModel {
    double eta = 1.0;
    double sigma2_x = 0.0;
    double sigma2_p = 0.0;
};

enum class SourceKind { coherent, thermal };

// A Gaussian source for quadrature-level simulation. fixed_phase pins the
// signal-LO phase difference; when empty the phase is drawn uniformly per
// pulse (the phase of the outcome distribution of z is identical either way).
struct GaussianSourceSpec {
    SourceKind kind = SourceKind::coherent;
    double mean_photons = 0.0;
    std::optional<double> fixed_phase;
};

// Draws z outcomes from the Gamma mixture sum_n p(n) Gamma(n+1, 1): a latent
// photon number n is drawn from dist, then z as an Erlang(n+1) variate.
// Identical (dist, count, seed) reproduce identical batches.
ZBatch sample_z(const PhotonDistribution& dist, std::size_t count, std::uint64_t seed);

// Simulates conjugate-homodyne quadrature pairs for a coherent or thermal
// source. Efficiency acts as input-port loss (effective mean photon number
// eta * mean_photons); detector noise is added per quadrature afterwards.
//   coherent: x3 ~ N(sqrt(eta mu) cos d, 1/2 + sigma2_x),
//             p4 ~ N(sqrt(eta mu) sin d, 1/2 + sigma2_p)
//   thermal:  x3, p4 independent zero-mean with variance (eta nbar + 1)/2 + sigma2
QuadratureBatch sample_quadratures(const GaussianSourceSpec& spec, const DetectorModel& det,
                                   std::size_t count, std::uint64_t seed);

// z = x3^2 + p4^2, element-wise.
ZBatch to_z(const QuadratureBatch& batch, std::string source_tag = {});

// Outcome density P_Z(z) = e^{-z} sum_n p(n) z^n / n!, each term evaluated in
// log space. Throws std::invalid_argument for z < 0.
double pz_density(const PhotonDistribution& dist, double z);

// Radial outcome density P_R(r) = 2 e^{-r^2} sum_n p(n) r^{2n+1} / n!.
// Satisfies pr_density(d, r) == 2 r * pz_density(d, r^2).
double pr_density(const PhotonDistribution& dist, double r);

}  // namespace photonz
