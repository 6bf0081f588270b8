#pragma once

#include <vector>

#include "photonz/distribution.hpp"
#include "photonz/measurement.hpp"

namespace photonz {

// Configuration of the EM mixture fit. The mixture has components
// Gamma(n+1, 1) for n = 0..n_max with mixing weights p(n); the prior is the
// starting point p^0(n) and must be strictly positive element-wise (a zero
// component can never be revived by EM).
struct EMConfig {
    int n_max = 0;
    int max_iterations = 200;
    // Stop once the per-sample mean log-likelihood gain of an update falls
    // below this. The default also acts as an early-stopping regularizer:
    // running the fit much further lets the mixture overfit sampling noise.
    double convergence_tol = 1e-5;
    PhotonDistribution prior;
};

// Uniform prior over 0..n_max with the default iteration budget.
EMConfig default_em_config(int n_max);

// Truncation heuristic covering the support of the observed Gamma mixture:
// ceil(max z + 5 sqrt(max z)), capped at 200.
int default_n_max(const ZBatch& batch);

struct EMResult {
    PhotonDistribution distribution;
    // Per-sample mean log-likelihood per iteration, starting with the prior;
    // nondecreasing up to rounding (1e-10 per step).
    std::vector<double> loglik_trace;
    int iterations = 0;  // number of E/M updates applied
    bool converged = false;
};

// Moment estimators: mean_n = mean(z) - 1, var_n = var(z) - mean_n - 1, and
//   g2 = (mean(z^2) - 4 mean(z) + 2) / (mean(z) - 1)^2.
// g2 is left empty when |mean(z) - 1| < max(1e-6, 4 SE(mean z)): the
// denominator is then indistinguishable from zero at this sample size.
// Requires at least 2 samples.
MomentSummary moment_estimates(const ZBatch& batch);

// Maximum-likelihood reconstruction of p(n) from z samples via EM:
//   E-step: responsibilities r_k(n) ∝ p(n) e^{-z_k} z_k^n / n!
//   M-step: p(n) <- (1/M) sum_k r_k(n)
// Responsibilities are computed in log space with max subtraction; the M-step
// reduction is sequential over samples, so results are reproducible for a
// given build. Throws std::invalid_argument for negative z or an invalid
// config, and numerical_error (naming the iteration) if the log-likelihood
// becomes non-finite.
EMResult em_reconstruct(const ZBatch& batch, const EMConfig& config);

// Posterior over the photon number after a single z measurement, assuming a
// uniform prior: a Poisson(z) distribution truncated at n_max. Its mean and
// variance both equal z up to truncation. Throws truncation_error when the
// tail beyond n_max exceeds 1e-6.
PhotonDistribution single_shot_posterior(double z, int n_max);

// Per-sample mean marginal log-likelihood of the batch under the Gamma
// mixture with weights dist, log-sum-exp stabilized. Returns -infinity if any
// sample has zero density under every component.
double loglikelihood(const ZBatch& batch, const PhotonDistribution& dist);

}  // namespace photonz
