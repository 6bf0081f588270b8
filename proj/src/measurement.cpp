#include "photonz/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "photonz/rng.hpp"

namespace photonz {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

void check_detector(const DetectorModel& det) {
    if (!(det.eta > 0.0) || !(det.eta <= 1.0))
        throw std::invalid_argument("detector eta must lie in (0, 1]");
    if (!(det.sigma2_x >= 0.0) || !std::isfinite(det.sigma2_x) || !(det.sigma2_p >= 0.0) ||
        !std::isfinite(det.sigma2_p))
        throw std::invalid_argument("detector noise variances must be finite and >= 0");
}

}  // namespace

ZBatch sample_z(const PhotonDistribution& dist, std::size_t count, std::uint64_t seed) {
    if (dist.probs.empty()) throw std::invalid_argument("sample_z: empty distribution");
    if (count == 0) throw std::invalid_argument("sample_z: count must be >= 1");

    std::vector<double> cumulative(dist.probs.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < dist.probs.size(); ++n) {
        acc += dist.probs[n];
        cumulative[n] = acc;
    }
    cumulative.back() = 1.0;

    SplitMix64 rng(seed);
    ZBatch batch;
    batch.values.reserve(count);
    batch.source_tag = "sample_z";
    for (std::size_t i = 0; i < count; ++i) {
        const double u = rng.uniform01();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t n = std::min<std::size_t>(it - cumulative.begin(), dist.probs.size() - 1);
        // z | n is Erlang(n+1, 1): a sum of n+1 unit exponentials.
        double z = 0.0;
        for (std::size_t j = 0; j <= n; ++j) z += rng.exponential();
        batch.values.push_back(z);
    }
    return batch;
}

QuadratureBatch sample_quadratures(const GaussianSourceSpec& spec, const DetectorModel& det,
                                   std::size_t count, std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("sample_quadratures: count must be >= 1");
    if (!(spec.mean_photons >= 0.0) || !std::isfinite(spec.mean_photons))
        throw std::invalid_argument("sample_quadratures: mean_photons must be finite and >= 0");
    check_detector(det);

    const double effective = det.eta * spec.mean_photons;
    SplitMix64 rng(seed);
    QuadratureBatch batch;
    batch.samples.reserve(count);
    batch.calibrated = true;

    if (spec.kind == SourceKind::coherent) {
        const double amplitude = std::sqrt(effective);
        const double sx = std::sqrt(0.5 + det.sigma2_x);
        const double sp = std::sqrt(0.5 + det.sigma2_p);
        std::vector<double> phases(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double delta =
                spec.fixed_phase ? *spec.fixed_phase : kTwoPi * rng.uniform01();
            phases[i] = delta;
            batch.samples.push_back({amplitude * std::cos(delta) + sx * rng.normal(),
                                     amplitude * std::sin(delta) + sp * rng.normal()});
        }
        batch.phases = std::move(phases);
    } else {
        const double sx = std::sqrt((effective + 1.0) / 2.0 + det.sigma2_x);
        const double sp = std::sqrt((effective + 1.0) / 2.0 + det.sigma2_p);
        for (std::size_t i = 0; i < count; ++i)
            batch.samples.push_back({sx * rng.normal(), sp * rng.normal()});
    }
    return batch;
}

ZBatch to_z(const QuadratureBatch& batch, std::string source_tag) {
    if (batch.samples.empty()) throw std::invalid_argument("to_z: empty quadrature batch");
    ZBatch out;
    out.values.reserve(batch.samples.size());
    out.source_tag = std::move(source_tag);
    for (const auto& s : batch.samples) out.values.push_back(s.x3 * s.x3 + s.p4 * s.p4);
    return out;
}

double pz_density(const PhotonDistribution& dist, double z) {
    if (dist.probs.empty()) throw std::invalid_argument("pz_density: empty distribution");
    if (!(z >= 0.0) || !std::isfinite(z))
        throw std::invalid_argument("pz_density: z must be finite and >= 0");
    if (z == 0.0) return dist.probs[0];

    const double lz = std::log(z);
    double lf = 0.0;  // log(n!)
    double acc = 0.0;
    for (int n = 0; n <= dist.n_max(); ++n) {
        if (n > 1) lf += std::log(static_cast<double>(n));
        if (dist.probs[n] <= 0.0) continue;
        acc += std::exp(std::log(dist.probs[n]) + n * lz - z - lf);
    }
    return acc;
}

double pr_density(const PhotonDistribution& dist, double r) {
    if (dist.probs.empty()) throw std::invalid_argument("pr_density: empty distribution");
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::invalid_argument("pr_density: r must be finite and >= 0");
    if (r == 0.0) return 0.0;

    const double lr = std::log(r);
    const double r2 = r * r;
    double lf = 0.0;
    double acc = 0.0;
    for (int n = 0; n <= dist.n_max(); ++n) {
        if (n > 1) lf += std::log(static_cast<double>(n));
        if (dist.probs[n] <= 0.0) continue;
        acc += std::exp(std::log(2.0) + std::log(dist.probs[n]) + (2 * n + 1) * lr - r2 - lf);
    }
    return acc;
}

}  // namespace photonz
