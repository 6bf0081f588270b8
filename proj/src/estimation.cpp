#include "photonz/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "photonz/errors.hpp"
#include "photonz/stats.hpp"

namespace photonz {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_z_values(const ZBatch& batch, const char* who) {
    if (batch.values.empty()) throw std::invalid_argument(std::string(who) + ": empty batch");
    for (double z : batch.values)
        if (!(z >= 0.0) || !std::isfinite(z))
            throw std::invalid_argument(std::string(who) + ": z values must be finite and >= 0");
}

std::vector<double> log_factorials(int n) {
    std::vector<double> lf(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 2; k <= n; ++k) lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
    return lf;
}

// log of the component density log[e^{-z} z^n / n!], with the z = 0 case
// resolved to 0 for n = 0 and -inf otherwise.
inline double log_component(int n, double z, double logz, const std::vector<double>& lf) {
    if (z == 0.0) return n == 0 ? 0.0 : kNegInf;
    return n * logz - z - lf[n];
}

}  // namespace

EMConfig default_em_config(int n_max) {
    if (n_max < 0) throw std::invalid_argument("default_em_config: n_max must be >= 0");
    EMConfig config;
    config.n_max = n_max;
    config.prior = distribution_from_probs(
        std::vector<double>(static_cast<std::size_t>(n_max) + 1,
                            1.0 / (static_cast<double>(n_max) + 1.0)));
    return config;
}

int default_n_max(const ZBatch& batch) {
    check_z_values(batch, "default_n_max");
    const double zmax = *std::max_element(batch.values.begin(), batch.values.end());
    const double guess = std::ceil(zmax + 5.0 * std::sqrt(zmax));
    return static_cast<int>(std::min(guess, 200.0));
}

MomentSummary moment_estimates(const ZBatch& batch) {
    check_z_values(batch, "moment_estimates");
    if (batch.values.size() < 2)
        throw std::invalid_argument("moment_estimates: need at least 2 samples");

    const std::size_t m = batch.values.size();
    MomentSummary s;
    s.sample_count = m;
    s.mean_z = sample_mean(batch.values);
    double sq = 0.0;
    for (double z : batch.values) sq += z * z;
    s.mean_z2 = sq / static_cast<double>(m);

    const double var_z = sample_variance(batch.values);
    s.mean_n = s.mean_z - 1.0;
    s.var_n = var_z - s.mean_n - 1.0;

    // g2 = (<z^2> - 4<z> + 2) / (<z> - 1)^2. The denominator estimate is
    // meaningless once |<z> - 1| sinks below its own sampling error.
    const double guard =
        std::max(1e-6, 4.0 * std::sqrt(var_z / static_cast<double>(m)));
    if (std::fabs(s.mean_z - 1.0) >= guard)
        s.g2 = (s.mean_z2 - 4.0 * s.mean_z + 2.0) / ((s.mean_z - 1.0) * (s.mean_z - 1.0));
    return s;
}

EMResult em_reconstruct(const ZBatch& batch, const EMConfig& config) {
    check_z_values(batch, "em_reconstruct");
    if (config.n_max < 0) throw std::invalid_argument("em_reconstruct: n_max must be >= 0");
    if (config.max_iterations < 1)
        throw std::invalid_argument("em_reconstruct: max_iterations must be >= 1");
    if (!(config.convergence_tol > 0.0))
        throw std::invalid_argument("em_reconstruct: convergence_tol must be > 0");
    if (config.prior.n_max() != config.n_max)
        throw std::invalid_argument("em_reconstruct: prior n_max does not match config.n_max");
    for (double v : config.prior.probs)
        if (!(v > 0.0))
            throw std::invalid_argument(
                "em_reconstruct: prior must be strictly positive element-wise");

    const int N = config.n_max;
    const std::size_t M = batch.values.size();
    const auto lf = log_factorials(N);
    std::vector<double> logz(M);
    for (std::size_t k = 0; k < M; ++k)
        logz[k] = batch.values[k] > 0.0 ? std::log(batch.values[k]) : 0.0;

    std::vector<double> p = config.prior.probs;
    std::vector<double> lp(N + 1), row(N + 1), accum(N + 1);
    std::vector<double> trace;
    int updates = 0;
    bool converged = false;

    for (;;) {
        for (int n = 0; n <= N; ++n) lp[n] = p[n] > 0.0 ? std::log(p[n]) : kNegInf;
        std::fill(accum.begin(), accum.end(), 0.0);
        double ll_sum = 0.0;

        for (std::size_t k = 0; k < M; ++k) {
            const double zk = batch.values[k];
            double mx = kNegInf;
            for (int n = 0; n <= N; ++n) {
                const double t = lp[n] + log_component(n, zk, logz[k], lf);
                row[n] = t;
                if (t > mx) mx = t;
            }
            if (!std::isfinite(mx))
                throw numerical_error("em_reconstruct: sample " + std::to_string(k) +
                                      " has zero mixture density at iteration " +
                                      std::to_string(updates));
            double denom = 0.0;
            for (int n = 0; n <= N; ++n) {
                row[n] = std::exp(row[n] - mx);
                denom += row[n];
            }
            ll_sum += mx + std::log(denom);
            const double inv = 1.0 / denom;
            for (int n = 0; n <= N; ++n) accum[n] += row[n] * inv;
        }

        const double ll = ll_sum / static_cast<double>(M);
        if (!std::isfinite(ll))
            throw numerical_error("em_reconstruct: non-finite log-likelihood at iteration " +
                                  std::to_string(updates));
        trace.push_back(ll);
        if (trace.size() >= 2 && ll - trace[trace.size() - 2] < config.convergence_tol) {
            converged = true;
            break;
        }
        if (updates >= config.max_iterations) break;

        for (int n = 0; n <= N; ++n) p[n] = accum[n] / static_cast<double>(M);
        ++updates;
    }

    return EMResult{distribution_from_probs(std::move(p)), std::move(trace), updates, converged};
}

PhotonDistribution single_shot_posterior(double z, int n_max) {
    if (!(z >= 0.0) || !std::isfinite(z))
        throw std::invalid_argument("single_shot_posterior: z must be finite and >= 0");
    if (n_max < 0) throw std::invalid_argument("single_shot_posterior: n_max must be >= 0");

    if (z == 0.0) return make_fock(0, n_max);

    // Uniform prior over n makes the posterior a truncated Poisson(z).
    try {
        return make_coherent(z, n_max, 1e-6);
    } catch (const truncation_error& e) {
        throw truncation_error(std::string("single_shot_posterior: ") + e.what());
    }
}

double loglikelihood(const ZBatch& batch, const PhotonDistribution& dist) {
    check_z_values(batch, "loglikelihood");
    if (dist.probs.empty()) throw std::invalid_argument("loglikelihood: empty distribution");

    const int N = dist.n_max();
    const auto lf = log_factorials(N);
    std::vector<double> lp(N + 1);
    for (int n = 0; n <= N; ++n) lp[n] = dist.probs[n] > 0.0 ? std::log(dist.probs[n]) : kNegInf;

    double total = 0.0;
    for (double zk : batch.values) {
        const double lzk = zk > 0.0 ? std::log(zk) : 0.0;
        double mx = kNegInf;
        for (int n = 0; n <= N; ++n) mx = std::max(mx, lp[n] + log_component(n, zk, lzk, lf));
        if (!std::isfinite(mx)) return kNegInf;  // zero mixture density at this sample
        double s = 0.0;
        for (int n = 0; n <= N; ++n) s += std::exp(lp[n] + log_component(n, zk, lzk, lf) - mx);
        total += mx + std::log(s);
    }
    return total / static_cast<double>(batch.values.size());
}

}  // namespace photonz
