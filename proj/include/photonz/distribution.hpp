#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace photonz {

// Default bound on the analytic tail mass a constructor may truncate away.
inline constexpr double kDefaultTruncationTol = 1e-8;

// Truncated photon-number distribution p(n) for n = 0..n_max. probs is
// nonnegative and sums to 1 within 1e-9 after construction; truncated_mass
// records the analytic mass beyond n_max before renormalization (0 for
// empirical distributions). Immutable by convention after construction.
struct PhotonDistribution {
    std::vector<double> probs;
    double truncated_mass = 0.0;

    int n_max() const { return static_cast<int>(probs.size()) - 1; }
};

// Fock state |n><n|: a point mass at n. Throws std::invalid_argument if
// n > n_max or either argument is negative.
PhotonDistribution make_fock(int n, int n_max);

// Coherent state with mean photon number mu: Poisson weights
// e^{-mu} mu^n / n!, renormalized over 0..n_max. Throws truncation_error
// (naming the n_max that would suffice) if the Poisson tail beyond n_max
// exceeds truncation_tol.
PhotonDistribution make_coherent(double mean_photons, int n_max,
                                 double truncation_tol = kDefaultTruncationTol);

// Thermal (Bose-Einstein) state: nbar^n / (nbar+1)^{n+1}. Truncation handling
// as in make_coherent.
PhotonDistribution make_thermal(double mean_photons, int n_max,
                                double truncation_tol = kDefaultTruncationTol);

// Wraps raw nonnegative weights as a distribution, renormalizing when the sum
// strays from 1 by more than 1e-12. Rejects negative or non-finite entries.
PhotonDistribution distribution_from_probs(std::vector<double> probs,
                                           double truncated_mass = 0.0);

struct Moments {
    double mean_n = 0.0;
    double var_n = 0.0;
};

// First two moments of the photon number: mean = sum n p(n),
// var = sum n^2 p(n) - mean^2.
Moments moments(const PhotonDistribution& dist);

// Binomial thinning by detector efficiency eta in (0, 1]:
//   p'(n) = sum_{m>=n} C(m,n) eta^n (1-eta)^{m-n} p(m).
// Maps Poisson(mu) to Poisson(eta*mu) and thermal(nbar) to thermal(eta*nbar).
// Binomial coefficients are evaluated in log space (stable to n_max ~ 200).
PhotonDistribution bernoulli_transform(const PhotonDistribution& dist, double eta);

struct InverseBernoulliResult {
    PhotonDistribution distribution;
    // Most negative raw entry before clipping; 0 when the inversion was clean.
    double max_negative_excursion = 0.0;
};

// Inverse of bernoulli_transform: the same binomial map evaluated at 1/eta,
// an alternating-sign sum that is ill-conditioned for small eta. Negative
// entries are clipped to zero and the result renormalized; the raw excursion
// is reported. Throws ill_conditioned_error if any term overflows double
// precision or if a clipped entry's magnitude exceeds max_negativity (raise
// the bound to accept noisy inputs and rely on the report instead).
InverseBernoulliResult inverse_bernoulli(const PhotonDistribution& dist, double eta,
                                         double max_negativity = 1e-6);

// Sample statistics of a batch of Z measurements. mean_n and var_n are the
// photon-number estimates mean_z - 1 and var(z) - mean_n - 1; g2 is empty
// when |mean_z - 1| falls below the denominator guard (near-vacuum data).
struct MomentSummary {
    double mean_n = 0.0;
    double var_n = 0.0;
    std::optional<double> g2;
    double mean_z = 0.0;
    double mean_z2 = 0.0;
    std::size_t sample_count = 0;
};

}  // namespace photonz
