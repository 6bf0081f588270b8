// photonz: simulate conjugate-homodyne measurements of photon sources,
// calibrate and ingest quadrature captures, and reconstruct photon-number
// statistics (moment estimators and EM mixture fits) from z = x3^2 + p4^2.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "photonz/distribution.hpp"
#include "photonz/equivalence.hpp"
#include "photonz/errors.hpp"
#include "photonz/estimation.hpp"
#include "photonz/io.hpp"
#include "photonz/measurement.hpp"
#include "photonz/spd.hpp"
#include "photonz/stats.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Exit codes: 0 success, 2 argument error, 3 data/parse error, 4 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitArgument = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed) {
    if (flag_seed) return *flag_seed;
    if (const char* env = std::getenv("PHOTONZ_SEED")) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || errno == ERANGE)
            throw std::invalid_argument("PHOTONZ_SEED is not a valid unsigned integer: " +
                                        std::string(env));
        return static_cast<std::uint64_t>(v);
    }
    throw std::invalid_argument("a seed is required: pass --seed or set PHOTONZ_SEED");
}

photonz::ZBatch load_z_or_quadratures(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw photonz::parse_error("cannot open: " + path.string());
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    in.close();
    if (header == "z") return photonz::read_z_csv(path);
    auto batch = photonz::read_quadrature_csv(path);
    return photonz::to_z(batch, path.filename().string());
}

struct SimulateOptions {
    std::string source;
    double mean_photons = 0.0;
    int fock_n = -1;
    double eta = 1.0;
    double sigma2_x = 0.0;
    double sigma2_p = 0.0;
    std::size_t count = 0;
    std::optional<std::uint64_t> seed;
    std::optional<double> phase;
    std::string out;
};

int cmd_simulate(const SimulateOptions& opt) {
    const std::uint64_t seed = resolve_seed(opt.seed);
    json sidecar{{"command", "simulate"}, {"source", opt.source},
                 {"eta", opt.eta},        {"sigma2_x", opt.sigma2_x},
                 {"sigma2_p", opt.sigma2_p}, {"count", opt.count},
                 {"seed", seed}};
    json outputs = json::object();
    const fs::path quad_path = opt.out + ".quad.csv";
    const fs::path z_path = opt.out + ".z.csv";

    if (opt.source == "fock") {
        if (opt.fock_n < 0)
            throw std::invalid_argument("--source fock requires --fock-n");
        if (opt.sigma2_x != 0.0 || opt.sigma2_p != 0.0)
            throw std::invalid_argument(
                "detector noise applies at the quadrature level; it cannot be combined with "
                "--source fock (z-only simulation)");
        auto dist = photonz::make_fock(opt.fock_n, opt.fock_n);
        if (opt.eta < 1.0) dist = photonz::bernoulli_transform(dist, opt.eta);
        else if (!(opt.eta > 0.0) || !(opt.eta <= 1.0))
            throw std::invalid_argument("eta must lie in (0, 1]");
        const auto z = photonz::sample_z(dist, opt.count, seed);
        photonz::write_z_csv(z_path, z);
        sidecar["fock_n"] = opt.fock_n;
        sidecar["effective_mean_photons"] = opt.eta * opt.fock_n;
        outputs["z_csv"] = z_path.string();
    } else {
        photonz::GaussianSourceSpec spec;
        spec.kind = opt.source == "coherent" ? photonz::SourceKind::coherent
                                             : photonz::SourceKind::thermal;
        spec.mean_photons = opt.mean_photons;
        spec.fixed_phase = opt.phase;
        const photonz::DetectorModel det{opt.eta, opt.sigma2_x, opt.sigma2_p};
        const auto quads = photonz::sample_quadratures(spec, det, opt.count, seed);
        photonz::write_quadrature_csv(quad_path, quads);
        photonz::write_z_csv(z_path, photonz::to_z(quads, opt.out));
        sidecar["mean_photons"] = opt.mean_photons;
        sidecar["effective_mean_photons"] = opt.eta * opt.mean_photons;
        sidecar["phase"] = opt.phase ? json(*opt.phase) : json("random_uniform");
        outputs["quadrature_csv"] = quad_path.string();
        outputs["z_csv"] = z_path.string();
    }
    sidecar["outputs"] = outputs;
    photonz::write_json(opt.out + ".params.json", sidecar);
    return kExitOk;
}

struct IngestOptions {
    std::string in;
    std::string calib;
    std::string out;
};

// Vacuum calibration: shift each quadrature by the vacuum record's sample
// mean and rescale so the vacuum variance is exactly 1/2 (shot-noise units).
int cmd_ingest(const IngestOptions& opt) {
    const auto calib = photonz::read_quadrature_csv(opt.calib);
    if (calib.samples.size() < 1000)
        throw photonz::calibration_error("calibration record has " +
                                         std::to_string(calib.samples.size()) +
                                         " rows; need >= 1000");
    std::vector<double> cx, cp;
    cx.reserve(calib.samples.size());
    cp.reserve(calib.samples.size());
    for (const auto& s : calib.samples) {
        cx.push_back(s.x3);
        cp.push_back(s.p4);
    }
    const double mean_x = photonz::sample_mean(cx);
    const double mean_p = photonz::sample_mean(cp);
    const double var_x = photonz::sample_variance(cx);
    const double var_p = photonz::sample_variance(cp);
    if (!(var_x > 0.0) || !std::isfinite(var_x) || !(var_p > 0.0) || !std::isfinite(var_p))
        throw photonz::calibration_error("vacuum record variance must be positive and finite");
    const double scale_x = std::sqrt(0.5 / var_x);
    const double scale_p = std::sqrt(0.5 / var_p);

    auto data = photonz::read_quadrature_csv(opt.in);
    for (auto& s : data.samples) {
        s.x3 = (s.x3 - mean_x) * scale_x;
        s.p4 = (s.p4 - mean_p) * scale_p;
    }
    data.calibrated = true;

    const fs::path quad_path = opt.out + ".quad.csv";
    const fs::path z_path = opt.out + ".z.csv";
    photonz::write_quadrature_csv(quad_path, data);
    photonz::write_z_csv(z_path, photonz::to_z(data, opt.in));
    photonz::write_json(opt.out + ".calibration.json",
                        json{{"command", "ingest"},
                             {"calib", opt.calib},
                             {"in", opt.in},
                             {"offset_x3", mean_x},
                             {"offset_p4", mean_p},
                             {"scale_x3", scale_x},
                             {"scale_p4", scale_p},
                             {"calib_rows", calib.samples.size()}});
    return kExitOk;
}

struct ReconstructOptions {
    std::string in;
    std::optional<int> n_max;
    int max_iters = 200;
    double tol = 1e-5;
    std::optional<double> eta;
    std::string out;
};

int cmd_reconstruct(const ReconstructOptions& opt) {
    if (opt.eta && (!(*opt.eta > 0.0) || !(*opt.eta <= 1.0)))
        throw std::invalid_argument("eta must lie in (0, 1]");
    const auto batch = load_z_or_quadratures(opt.in);
    const int n_max = opt.n_max ? *opt.n_max : photonz::default_n_max(batch);

    auto config = photonz::default_em_config(n_max);
    config.max_iterations = opt.max_iters;
    config.convergence_tol = opt.tol;
    const auto result = photonz::em_reconstruct(batch, config);

    photonz::write_json(opt.out + ".dist.json", photonz::to_json(result));
    photonz::write_histogram_csv(opt.out + ".hist.csv", result.distribution);

    if (opt.eta) {
        // EM output carries sampling noise, so the inversion is run in
        // clip-and-report mode; the conditioning report carries the excursion.
        const auto corrected = photonz::inverse_bernoulli(
            result.distribution, *opt.eta, std::numeric_limits<double>::infinity());
        photonz::write_json(opt.out + ".corrected.json",
                            json{{"eta", *opt.eta},
                                 {"distribution", photonz::to_json(corrected.distribution)},
                                 {"max_negative_excursion", corrected.max_negative_excursion}});
        photonz::write_histogram_csv(opt.out + ".corrected_hist.csv", corrected.distribution);
    }
    return kExitOk;
}

struct MomentsOptions {
    std::string in;
    std::string out;
};

int cmd_moments(const MomentsOptions& opt) {
    const auto batch = load_z_or_quadratures(opt.in);
    const auto summary = photonz::moment_estimates(batch);
    const json j = photonz::to_json(summary);
    if (opt.out.empty())
        std::cout << j.dump(2) << '\n';
    else
        photonz::write_json(opt.out, j);
    return kExitOk;
}

struct SpdOptions {
    double t_min = 0.0;
    double t_max = 10.0;
    int points = 200;
    std::string out;
    std::string format = "csv";
};

int cmd_spd_curve(const SpdOptions& opt) {
    const auto curve = photonz::spd_curve(opt.t_min, opt.t_max, opt.points);
    if (opt.format == "json")
        photonz::write_json(opt.out, photonz::to_json(curve));
    else
        photonz::write_spd_csv(opt.out, curve);
    return kExitOk;
}

struct EquivalenceOptions {
    std::string source = "coherent";
    double mean_photons = 0.0;
    double eta = 1.0;
    std::size_t count = 100000;
    std::optional<std::uint64_t> seed;
    std::optional<double> phase;
    std::string out;
};

int cmd_equivalence(const EquivalenceOptions& opt) {
    photonz::GaussianSourceSpec spec;
    spec.kind = opt.source == "coherent" ? photonz::SourceKind::coherent
                                         : photonz::SourceKind::thermal;
    spec.mean_photons = opt.mean_photons;
    spec.fixed_phase = opt.phase;
    const auto report =
        photonz::loss_equivalence_report(spec, opt.eta, opt.count, resolve_seed(opt.seed));
    photonz::write_json(opt.out, photonz::to_json(report));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conjugate-homodyne photon number statistics toolkit"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "simulate a photon source");
    simulate->add_option("--source", sim.source, "source kind")
        ->required()
        ->check(CLI::IsMember({"fock", "coherent", "thermal"}));
    simulate->add_option("--mean-photons", sim.mean_photons, "mean photon number");
    simulate->add_option("--fock-n", sim.fock_n, "photon number for --source fock");
    simulate->add_option("--eta", sim.eta, "detector efficiency in (0,1]")->capture_default_str();
    simulate->add_option("--sigma2-x", sim.sigma2_x, "additive noise variance on X3")->capture_default_str();
    simulate->add_option("--sigma2-p", sim.sigma2_p, "additive noise variance on P4")->capture_default_str();
    simulate->add_option("--count", sim.count, "number of pulses")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed (or set PHOTONZ_SEED)");
    simulate->add_option("--phase", sim.phase,
                         "fixed signal-LO phase in radians (default: random per pulse)");
    simulate->add_option("--out", sim.out, "output stem")->required();

    IngestOptions ing;
    auto* ingest = app.add_subcommand("ingest", "calibrate a raw quadrature capture");
    ingest->add_option("--in", ing.in, "raw quadrature CSV")->required();
    ingest->add_option("--calib", ing.calib, "vacuum (signal-blocked) quadrature CSV")->required();
    ingest->add_option("--out", ing.out, "output stem")->required();

    ReconstructOptions rec;
    auto* reconstruct =
        app.add_subcommand("reconstruct", "EM reconstruction of the photon number distribution");
    reconstruct->add_option("--in", rec.in, "z CSV or quadrature CSV")->required();
    reconstruct->add_option("--nmax", rec.n_max, "mixture truncation (default: from data)");
    reconstruct->add_option("--max-iters", rec.max_iters, "EM iteration cap")->capture_default_str();
    reconstruct
        ->add_option("--tol", rec.tol, "per-sample mean log-likelihood gain threshold")
        ->capture_default_str();
    reconstruct->add_option("--eta", rec.eta,
                            "also emit the inverse-Bernoulli corrected distribution");
    reconstruct->add_option("--out", rec.out, "output stem")->required();

    MomentsOptions mom;
    auto* moments = app.add_subcommand("moments", "moment estimates and g2 from z data");
    moments->add_option("--in", mom.in, "z CSV or quadrature CSV")->required();
    moments->add_option("--out", mom.out, "output JSON (default: stdout)");

    SpdOptions spd;
    auto* spd_curve = app.add_subcommand("spd-curve", "threshold-detector curves");
    spd_curve->add_option("--threshold-min", spd.t_min, "lowest threshold")->capture_default_str();
    spd_curve->add_option("--threshold-max", spd.t_max, "highest threshold")->capture_default_str();
    spd_curve->add_option("--threshold-points,--points", spd.points, "grid size")
        ->capture_default_str();
    spd_curve->add_option("--out", spd.out, "output file")->required();
    spd_curve->add_option("--format", spd.format, "output format")->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));

    EquivalenceOptions eqv;
    auto* equivalence = app.add_subcommand("equivalence", "loss-model equivalence report");
    equivalence->add_option("--source", eqv.source, "source kind")->capture_default_str()
        ->check(CLI::IsMember({"coherent", "thermal"}));
    equivalence->add_option("--mean-photons", eqv.mean_photons, "mean photon number")->required();
    equivalence->add_option("--eta", eqv.eta, "detector efficiency in (0,1]")->required();
    equivalence->add_option("--count", eqv.count, "Monte Carlo sample count")->capture_default_str();
    equivalence->add_option("--seed", eqv.seed, "RNG seed (or set PHOTONZ_SEED)");
    equivalence->add_option("--phase", eqv.phase, "fixed signal-LO phase in radians");
    equivalence->add_option("--out", eqv.out, "output JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitArgument;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (ingest->parsed()) return cmd_ingest(ing);
        if (reconstruct->parsed()) return cmd_reconstruct(rec);
        if (moments->parsed()) return cmd_moments(mom);
        if (spd_curve->parsed()) return cmd_spd_curve(spd);
        if (equivalence->parsed()) return cmd_equivalence(eqv);
        std::cerr << "error: no subcommand selected\n";
        return kExitArgument;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitArgument;
    } catch (const photonz::truncation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitArgument;
    } catch (const photonz::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const photonz::calibration_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const photonz::ill_conditioned_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const photonz::numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
