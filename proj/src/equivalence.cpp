#include "photonz/equivalence.hpp"

#include <cmath>
#include <stdexcept>

#include "photonz/rng.hpp"
#include "photonz/stats.hpp"

namespace photonz {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Each output quadrature is a linear form over the signal quadrature and two
// independent vacuum ancillae:  out = c[0]*sig + c[1]*vac1 + c[2]*vac2.
struct LinearForm {
    double c[3];
};

// Model (a): loss beam splitters on both output ports of the symmetric
// splitter.  X3 = cg/sqrt2 X1 + cg/sqrt2 X2 + sg X5,
//            P4 = cg/sqrt2 P1 - cg/sqrt2 P2 + sg P6.
// Model (b): one loss beam splitter on the input port.
//            X3 = (cg X1 + X2' + sg X5')/sqrt2,
//            P4 = (cg P1 - P2' + sg P5')/sqrt2.
struct ModelForms {
    LinearForm x;
    LinearForm p;
};

ModelForms model_a(double cg, double sg) {
    const double s = 1.0 / std::sqrt(2.0);
    return {{{cg * s, cg * s, sg}}, {{cg * s, -cg * s, sg}}};
}

ModelForms model_b(double cg, double sg) {
    const double s = 1.0 / std::sqrt(2.0);
    return {{{cg * s, s, sg * s}}, {{cg * s, -s, sg * s}}};
}

struct SignalStats {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var = 0.5;  // identical for both quadratures of coherent/thermal states
};

SignalStats signal_stats(const GaussianSourceSpec& spec, double delta) {
    SignalStats st;
    if (spec.kind == SourceKind::coherent) {
        const double a = std::sqrt(2.0 * spec.mean_photons);
        st.mean_x = a * std::cos(delta);
        st.mean_p = a * std::sin(delta);
        st.var = 0.5;
    } else {
        st.var = spec.mean_photons + 0.5;
    }
    return st;
}

constexpr double kVacuumVar = 0.5;

double form_mean(const LinearForm& f, double signal_mean) { return f.c[0] * signal_mean; }

double form_var(const LinearForm& f, double signal_var) {
    return f.c[0] * f.c[0] * signal_var + (f.c[1] * f.c[1] + f.c[2] * f.c[2]) * kVacuumVar;
}

}  // namespace

EquivalenceReport loss_equivalence_report(const GaussianSourceSpec& spec, double eta,
                                          std::size_t count, std::uint64_t seed) {
    if (!(eta > 0.0) || !(eta <= 1.0))
        throw std::invalid_argument("loss_equivalence_report: eta must lie in (0, 1]");
    if (count < 10000)
        throw std::invalid_argument(
            "loss_equivalence_report: count must be >= 10^4 for the Monte Carlo arm");
    if (!(spec.mean_photons >= 0.0) || !std::isfinite(spec.mean_photons))
        throw std::invalid_argument("loss_equivalence_report: mean_photons must be >= 0");

    // Power transmittance eta corresponds to an amplitude factor cos(gamma).
    const double cg = std::sqrt(eta);
    const double sg = std::sqrt(1.0 - eta);
    const ModelForms ma = model_a(cg, sg);
    const ModelForms mb = model_b(cg, sg);

    EquivalenceReport report;
    report.count = count;
    report.seed = seed;

    // Analytic moments, conditioned on a representative phase. The X/P
    // forms of each model share no random variable with nonzero
    // cross-covariance (the signal X and P are uncorrelated for these
    // sources), so Cov(X3, P4) vanishes in both models.
    const double delta0 = spec.fixed_phase.value_or(0.0);
    const SignalStats st = signal_stats(spec, delta0);
    report.mean_a = {form_mean(ma.x, st.mean_x), form_mean(ma.p, st.mean_p)};
    report.mean_b = {form_mean(mb.x, st.mean_x), form_mean(mb.p, st.mean_p)};
    report.cov_a = {form_var(ma.x, st.var), form_var(ma.p, st.var), 0.0};
    report.cov_b = {form_var(mb.x, st.var), form_var(mb.p, st.var), 0.0};

    double disc = 0.0;
    for (int i = 0; i < 2; ++i) disc = std::max(disc, std::fabs(report.mean_a[i] - report.mean_b[i]));
    for (int i = 0; i < 3; ++i) disc = std::max(disc, std::fabs(report.cov_a[i] - report.cov_b[i]));
    report.analytic_max_discrepancy = disc;

    // Monte Carlo arm: sample each model from its own derived stream.
    // Per pulse each model draws the signal pair plus four vacuum ancillae.
    const auto sample_model = [&](const ModelForms& mf, SplitMix64 rng,
                                  std::vector<double>& xs, std::vector<double>& ps) {
        xs.reserve(count);
        ps.reserve(count);
        const double svac = std::sqrt(kVacuumVar);
        for (std::size_t i = 0; i < count; ++i) {
            double mean_x = 0.0, mean_p = 0.0, sd;
            if (spec.kind == SourceKind::coherent) {
                const double delta =
                    spec.fixed_phase ? *spec.fixed_phase : kTwoPi * rng.uniform01();
                const double a = std::sqrt(2.0 * spec.mean_photons);
                mean_x = a * std::cos(delta);
                mean_p = a * std::sin(delta);
                sd = std::sqrt(0.5);
            } else {
                sd = std::sqrt(spec.mean_photons + 0.5);
            }
            const double sig_x = mean_x + sd * rng.normal();
            const double sig_p = mean_p + sd * rng.normal();
            const double vx1 = svac * rng.normal();
            const double vx2 = svac * rng.normal();
            const double vp1 = svac * rng.normal();
            const double vp2 = svac * rng.normal();
            xs.push_back(mf.x.c[0] * sig_x + mf.x.c[1] * vx1 + mf.x.c[2] * vx2);
            ps.push_back(mf.p.c[0] * sig_p + mf.p.c[1] * vp1 + mf.p.c[2] * vp2);
        }
    };

    std::vector<double> xa, pa, xb, pb;
    sample_model(ma, SplitMix64::stream(seed, 1), xa, pa);
    sample_model(mb, SplitMix64::stream(seed, 2), xb, pb);

    report.ks_x3 = ks_two_sample(std::move(xa), std::move(xb));
    report.ks_p4 = ks_two_sample(std::move(pa), std::move(pb));
    report.ks_critical_1pct = ks_critical_1pct(count, count);
    return report;
}

}  // namespace photonz
