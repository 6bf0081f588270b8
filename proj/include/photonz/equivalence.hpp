#pragma once

#include <array>
#include <cstdint>

#include "photonz/measurement.hpp"

namespace photonz {

// Comparison of the two loss models for non-unity detector efficiency:
//   (a) a virtual beam splitter on each output port of the symmetric splitter,
//   (b) a single virtual beam splitter on the input port.
// Analytic means/covariances of (X3, P4) are computed from the linear mode
// expansions of both models; the Monte Carlo arm samples each model and
// compares the per-coordinate empirical distributions with a two-sample KS
// statistic.
struct EquivalenceReport {
    std::array<double, 2> mean_a{};  // (E[X3], E[P4]) for model (a)
    std::array<double, 2> mean_b{};
    std::array<double, 3> cov_a{};   // (Var X3, Var P4, Cov(X3,P4))
    std::array<double, 3> cov_b{};
    double analytic_max_discrepancy = 0.0;
    double ks_x3 = 0.0;
    double ks_p4 = 0.0;
    double ks_critical_1pct = 0.0;
    std::size_t count = 0;
    std::uint64_t seed = 0;
};

// count must be >= 10^4 (Monte Carlo arm); eta in (0, 1]. For coherent
// sources with random phase, the analytic moments are reported at phase 0
// (the discrepancy between models is phase-independent).
EquivalenceReport loss_equivalence_report(const GaussianSourceSpec& spec, double eta,
                                          std::size_t count, std::uint64_t seed);

}  // namespace photonz
