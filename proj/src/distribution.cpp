#include "photonz/distribution.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "photonz/errors.hpp"

namespace photonz {

namespace {

// log(n!) table for 0..n.
std::vector<double> log_factorials(int n) {
    std::vector<double> lf(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 2; k <= n; ++k) lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
    return lf;
}

double log_choose(const std::vector<double>& lf, int m, int k) {
    return lf[m] - lf[k] - lf[m - k];
}

void check_eta(double eta) {
    if (!(eta > 0.0) || !(eta <= 1.0))
        throw std::invalid_argument("eta must lie in (0, 1], got " + std::to_string(eta));
}

// Smallest n_max whose Poisson(mu) tail is within tol.
int poisson_required_n_max(double mu, double tol) {
    const double lmu = std::log(mu);
    double cum = 0.0, lf = 0.0;
    for (int n = 0; n < 100000; ++n) {
        if (n > 1) lf += std::log(static_cast<double>(n));
        cum += std::exp(-mu + n * lmu - lf);
        if (1.0 - cum <= tol) return n;
    }
    return 100000;
}

}  // namespace

PhotonDistribution make_fock(int n, int n_max) {
    if (n < 0 || n_max < 0)
        throw std::invalid_argument("make_fock: photon number and n_max must be nonnegative");
    if (n > n_max)
        throw std::invalid_argument("make_fock: n=" + std::to_string(n) +
                                    " exceeds n_max=" + std::to_string(n_max));
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    p[static_cast<std::size_t>(n)] = 1.0;
    return PhotonDistribution{std::move(p), 0.0};
}

PhotonDistribution make_coherent(double mean_photons, int n_max, double truncation_tol) {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
        throw std::invalid_argument("make_coherent: mean_photons must be finite and >= 0");
    if (n_max < 0) throw std::invalid_argument("make_coherent: n_max must be >= 0");
    if (!(truncation_tol > 0.0))
        throw std::invalid_argument("make_coherent: truncation tolerance must be > 0");

    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (mean_photons == 0.0) {
        p[0] = 1.0;
        return PhotonDistribution{std::move(p), 0.0};
    }

    const double lmu = std::log(mean_photons);
    const auto lf = log_factorials(n_max);
    double sum = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        p[n] = std::exp(-mean_photons + n * lmu - lf[n]);
        sum += p[n];
    }
    const double tail = std::max(0.0, 1.0 - sum);
    if (tail > truncation_tol) {
        throw truncation_error(
            "make_coherent: Poisson(" + std::to_string(mean_photons) + ") tail beyond n_max=" +
            std::to_string(n_max) + " is " + std::to_string(tail) + " (tolerance " +
            std::to_string(truncation_tol) + "); n_max >= " +
            std::to_string(poisson_required_n_max(mean_photons, truncation_tol)) + " required");
    }
    for (auto& v : p) v /= sum;
    return PhotonDistribution{std::move(p), tail};
}

PhotonDistribution make_thermal(double mean_photons, int n_max, double truncation_tol) {
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
        throw std::invalid_argument("make_thermal: mean_photons must be finite and >= 0");
    if (n_max < 0) throw std::invalid_argument("make_thermal: n_max must be >= 0");
    if (!(truncation_tol > 0.0))
        throw std::invalid_argument("make_thermal: truncation tolerance must be > 0");

    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (mean_photons == 0.0) {
        p[0] = 1.0;
        return PhotonDistribution{std::move(p), 0.0};
    }

    // Geometric with ratio q = nbar/(nbar+1); the tail beyond n_max is q^{n_max+1}.
    const double q = mean_photons / (mean_photons + 1.0);
    const double tail = std::exp((n_max + 1) * std::log(q));
    if (tail > truncation_tol) {
        const int required =
            static_cast<int>(std::ceil(std::log(truncation_tol) / std::log(q))) - 1;
        throw truncation_error(
            "make_thermal: Bose-Einstein(" + std::to_string(mean_photons) +
            ") tail beyond n_max=" + std::to_string(n_max) + " is " + std::to_string(tail) +
            " (tolerance " + std::to_string(truncation_tol) + "); n_max >= " +
            std::to_string(required) + " required");
    }
    p[0] = 1.0 / (mean_photons + 1.0);
    for (int n = 1; n <= n_max; ++n) p[n] = p[n - 1] * q;
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= sum;
    return PhotonDistribution{std::move(p), tail};
}

PhotonDistribution distribution_from_probs(std::vector<double> probs, double truncated_mass) {
    if (probs.empty()) throw std::invalid_argument("distribution_from_probs: empty vector");
    if (!(truncated_mass >= 0.0) || !std::isfinite(truncated_mass))
        throw std::invalid_argument("distribution_from_probs: truncated_mass must be >= 0");
    double sum = 0.0;
    for (double v : probs) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument(
                "distribution_from_probs: entries must be finite and nonnegative");
        sum += v;
    }
    if (!(sum > 0.0))
        throw std::invalid_argument("distribution_from_probs: total probability is zero");
    if (std::fabs(sum - 1.0) > 1e-12)
        for (auto& v : probs) v /= sum;
    return PhotonDistribution{std::move(probs), truncated_mass};
}

Moments moments(const PhotonDistribution& dist) {
    if (dist.probs.empty()) throw std::invalid_argument("moments: empty distribution");
    double m1 = 0.0, m2 = 0.0;
    for (int n = 0; n <= dist.n_max(); ++n) {
        m1 += n * dist.probs[n];
        m2 += static_cast<double>(n) * n * dist.probs[n];
    }
    return Moments{m1, m2 - m1 * m1};
}

PhotonDistribution bernoulli_transform(const PhotonDistribution& dist, double eta) {
    check_eta(eta);
    if (dist.probs.empty()) throw std::invalid_argument("bernoulli_transform: empty distribution");
    if (eta == 1.0) return dist;

    const int N = dist.n_max();
    const auto lf = log_factorials(N);
    const double le = std::log(eta);
    const double l1e = std::log1p(-eta);
    std::vector<double> out(static_cast<std::size_t>(N) + 1, 0.0);
    for (int k = 0; k <= N; ++k) {
        double acc = 0.0;
        for (int m = k; m <= N; ++m) {
            if (dist.probs[m] <= 0.0) continue;
            acc += std::exp(log_choose(lf, m, k) + k * le + (m - k) * l1e) * dist.probs[m];
        }
        out[k] = acc;
    }
    // A stochastic map: the column sums are 1, so the total is preserved up
    // to rounding; renormalize to keep the invariant exact.
    const double sum = std::accumulate(out.begin(), out.end(), 0.0);
    for (auto& v : out) v /= sum;
    return PhotonDistribution{std::move(out), dist.truncated_mass};
}

InverseBernoulliResult inverse_bernoulli(const PhotonDistribution& dist, double eta,
                                         double max_negativity) {
    check_eta(eta);
    if (dist.probs.empty()) throw std::invalid_argument("inverse_bernoulli: empty distribution");
    if (!(max_negativity >= 0.0))
        throw std::invalid_argument("inverse_bernoulli: max_negativity must be >= 0");
    if (eta == 1.0) return InverseBernoulliResult{dist, 0.0};

    const int N = dist.n_max();
    const auto lf = log_factorials(N);
    const double le = std::log(eta);
    const double l1e = std::log1p(-eta);
    const double overflow_log = std::log(std::numeric_limits<double>::max()) - 2.0;

    std::vector<double> raw(static_cast<std::size_t>(N) + 1, 0.0);
    double max_neg = 0.0;
    for (int k = 0; k <= N; ++k) {
        double acc = 0.0;
        for (int m = k; m <= N; ++m) {
            if (dist.probs[m] <= 0.0) continue;
            // C(m,k) eta^{-m} (eta-1)^{m-k} p(m): alternating signs.
            const double lt =
                log_choose(lf, m, k) - m * le + (m - k) * l1e + std::log(dist.probs[m]);
            if (lt > overflow_log)
                throw ill_conditioned_error(
                    "inverse_bernoulli: eta=" + std::to_string(eta) +
                    " is too small for n_max=" + std::to_string(N) +
                    ": terms overflow double precision");
            const double term = std::exp(lt);
            acc += ((m - k) % 2 == 0) ? term : -term;
        }
        raw[k] = acc;
        if (acc < max_neg) max_neg = acc;
    }
    if (-max_neg > max_negativity)
        throw ill_conditioned_error(
            "inverse_bernoulli: negative excursion " + std::to_string(-max_neg) +
            " exceeds the allowed " + std::to_string(max_negativity) +
            "; the inversion is not trustworthy at this eta/n_max");

    double sum = 0.0;
    for (auto& v : raw) {
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    if (!std::isfinite(sum))
        throw ill_conditioned_error("inverse_bernoulli: inversion overflowed double precision");
    if (!(sum > 0.0))
        throw ill_conditioned_error("inverse_bernoulli: inversion produced no positive mass");
    for (auto& v : raw) v /= sum;
    return InverseBernoulliResult{PhotonDistribution{std::move(raw), 0.0}, max_neg};
}

}  // namespace photonz
