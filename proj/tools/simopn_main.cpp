// Command line front end: Monte Carlo SER sweeps, analytic floor and bound
// tables, and a self-verification mode.  All tabular output is CSV with
// doubles printed at full precision (%.17g) so runs can be diffed byte for
// byte.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simopn/analysis.hpp"
#include "simopn/bessel.hpp"
#include "simopn/montecarlo.hpp"
#include "simopn/selfcheck.hpp"

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + token + "'");
    }
    if (used != token.size())
        throw std::invalid_argument("not a number: '" + token + "'");
    return v;
}

// Accepts comma-separated values and start:step:stop ranges (inclusive),
// possibly mixed: "0,10", "0:5:40", "0:5:20,30,40".
std::vector<double> parse_snr_spec(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty())
            throw std::invalid_argument("empty entry in --snr-db");
        const auto c1 = token.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_double(token));
            continue;
        }
        const auto c2 = token.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw std::invalid_argument(
                "ranges must look like start:step:stop, got '" + token + "'");
        const double start = parse_double(token.substr(0, c1));
        const double step = parse_double(token.substr(c1 + 1, c2 - c1 - 1));
        const double stop = parse_double(token.substr(c2 + 1));
        if (!(step > 0.0))
            throw std::invalid_argument("range step must be positive");
        if (stop < start)
            throw std::invalid_argument("range stop is before its start");
        for (double v = start; v <= stop + step * 1e-9; v += step)
            out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("--snr-db selects no points");
    return out;
}

std::vector<double> load_fourier_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<double> coeffs;
    double v;
    while (in >> v) coeffs.push_back(v);
    if (!in.eof())
        throw std::runtime_error("unparseable value in '" + path + "'");
    if (coeffs.empty())
        throw std::runtime_error("'" + path + "' holds no coefficients");
    return coeffs;
}

// Shared model selection: explicit concentration, coefficient file, or the
// uniform default.
struct ModelOptions {
    double kappa = 0.0;
    bool kappa_given = false;
    std::string fourier_path;

    simopn::PhaseNoiseModel build() const {
        if (!fourier_path.empty())
            return simopn::PhaseNoiseModel::from_fourier(
                load_fourier_file(fourier_path));
        return simopn::PhaseNoiseModel::von_mises(kappa);
    }
    // The kappa echoed into CSV output; NaN when the model came from a file.
    double echo() const {
        return fourier_path.empty() ? kappa
                                    : std::numeric_limits<double>::quiet_NaN();
    }
};

void add_model_options(CLI::App* cmd, ModelOptions& opts) {
    auto* k = cmd->add_option("--kappa", opts.kappa,
                              "Von Mises concentration of the oscillator "
                              "increments (0 = uniform)")
                  ->check(CLI::NonNegativeNumber);
    auto* f = cmd->add_option("--fourier-coeffs", opts.fourier_path,
                              "File of cosine-series coefficients defining "
                              "the increment density (first entry must be 1)")
                  ->check(CLI::ExistingFile);
    k->excludes(f);
    f->excludes(k);
}

// Stream selection for --output.
class OutputTarget {
  public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw std::runtime_error("cannot write to '" + path + "'");
        }
    }
    std::ostream& stream() {
        return file_.is_open() ? static_cast<std::ostream&>(file_)
                               : std::cout;
    }

  private:
    std::ofstream file_;
};

int run_simulate(const simopn::SimConfig& cfg, double kappa_echo,
                 const std::string& mode_name, const std::string& det_name,
                 const std::string& output_path) {
    OutputTarget out(output_path);
    std::ostream& os = out.stream();
    os << "mode,detector,M,kappa,N,snr_db,trials,errors,ser,ci_low,ci_high,"
          "seed\n";
    for (const simopn::SerEstimate& row : simopn::sweep(cfg)) {
        os << mode_name << ',' << det_name << ',' << cfg.antennas << ','
           << fmt(kappa_echo) << ',' << cfg.constellation_order << ','
           << fmt(row.snr_db) << ',' << row.trials << ',' << row.errors << ','
           << fmt(row.ser) << ',' << fmt(row.ci_low) << ','
           << fmt(row.ci_high) << ',' << cfg.master_seed << '\n';
    }
    return 0;
}

int run_floor(int order, const ModelOptions& model,
              const std::string& output_path) {
    const double floor = simopn::ser_floor_sync(order, model.build());
    OutputTarget out(output_path);
    out.stream() << "N,kappa,floor\n"
                 << order << ',' << fmt(model.echo()) << ',' << fmt(floor)
                 << '\n';
    return 0;
}

int run_bound(int order, double kappa, int antennas,
              const std::string& output_path) {
    const double total = simopn::union_bound_ser(order, kappa, antennas);
    OutputTarget out(output_path);
    std::ostream& os = out.stream();
    os << "N,kappa,M,n,pairwise_bound,union_bound\n";
    for (int n = 1; n < order; ++n) {
        const auto b =
            simopn::bernstein_pairwise_bound(order, n, kappa, antennas);
        os << order << ',' << fmt(kappa) << ',' << antennas << ',' << n << ','
           << fmt(b.bound) << ',' << fmt(total) << '\n';
    }
    return 0;
}

int run_verify(std::uint64_t seed, bool quick) {
    bool all_passed = true;
    for (const simopn::CheckResult& r : simopn::run_verification(seed, quick)) {
        std::cout << (r.passed ? "[ok]   " : "[FAIL] ") << r.name << ": "
                  << r.detail << '\n';
        all_passed = all_passed && r.passed;
    }
    std::cout << (all_passed ? "verification passed"
                             : "verification FAILED")
              << '\n';
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Symbol error rate simulator for a SIMO link whose receiver "
        "oscillators add phase noise"};
    app.set_version_flag("--version", "simopn 1.0.0");
    app.set_config("--config", "",
                   "Read options from an INI file (sections per subcommand)");
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand(
        "simulate", "Estimate symbol error rates over an SNR sweep");
    std::string mode_name = "sync";
    std::string det_name = "ml";
    std::string snr_spec;
    std::string sim_output;
    ModelOptions sim_model;
    simopn::SimConfig cfg;
    sim->add_option("--mode", mode_name,
                    "Oscillator configuration: one common oscillator (sync) "
                    "or one per antenna (nonsync)")
        ->check(CLI::IsMember({"sync", "nonsync"}));
    sim->add_option("--detector", det_name,
                    "Detector: exact likelihood maximization (ml) or the "
                    "high-SNR phase detector (high-snr)")
        ->check(CLI::IsMember({"ml", "high-snr"}));
    sim->add_option("--constellation", cfg.constellation_order,
                    "PSK constellation order")
        ->check(CLI::Range(2, 1 << 16));
    sim->add_option("--antennas", cfg.antennas, "Receive antenna count")
        ->check(CLI::PositiveNumber);
    add_model_options(sim, sim_model);
    sim->add_option("--snr-db", snr_spec,
                    "SNR grid in dB: comma list and/or start:step:stop")
        ->required();
    sim->add_option("--trials", cfg.trials, "Trial budget per SNR point");
    sim->add_option("--seed", cfg.master_seed, "Master seed");
    sim->add_option("--truncation", cfg.truncation,
                    "Series truncation order for the exact detector")
        ->check(CLI::Range(1, static_cast<int>(simopn::kMaxBesselOrder)));
    sim->add_option("--workers", cfg.workers,
                    "Worker threads (0: SIMOPN_WORKERS or all cores)");
    sim->add_flag("--early-stop", cfg.early_stop,
                  "Stop a point once enough errors accumulate");
    sim->add_option("--min-trials", cfg.min_trials,
                    "Earliest early-stop point (trials)");
    sim->add_option("--target-errors", cfg.target_errors,
                    "Error count that allows early stopping");
    sim->add_option("--output", sim_output, "Write CSV here (default stdout)");

    // floor
    auto* floor_cmd = app.add_subcommand(
        "floor",
        "Analytic high-SNR error floor of the synchronous ML detector");
    int floor_order = 2;
    std::string floor_output;
    ModelOptions floor_model;
    floor_cmd->add_option("--constellation", floor_order, "PSK order")
        ->check(CLI::Range(2, 1 << 16));
    add_model_options(floor_cmd, floor_model);
    floor_cmd->add_option("--output", floor_output,
                          "Write CSV here (default stdout)");

    // bound
    auto* bound_cmd = app.add_subcommand(
        "bound",
        "Pairwise and union bounds on the non-synchronous error floor");
    int bound_order = 2;
    int bound_antennas = 1;
    double bound_kappa = 0.0;
    std::string bound_output;
    bound_cmd->add_option("--constellation", bound_order, "PSK order")
        ->check(CLI::Range(2, 1 << 16));
    bound_cmd->add_option("--kappa", bound_kappa, "Von Mises concentration")
        ->check(CLI::NonNegativeNumber);
    bound_cmd->add_option("--antennas", bound_antennas, "Receive antennas")
        ->check(CLI::PositiveNumber);
    bound_cmd->add_option("--output", bound_output,
                          "Write CSV here (default stdout)");

    // verify
    auto* verify_cmd = app.add_subcommand(
        "verify", "Cross-check series, quadrature and sampling paths");
    std::uint64_t verify_seed = 1;
    bool verify_quick = false;
    verify_cmd->add_option("--seed", verify_seed, "Seed for sampled checks");
    verify_cmd->add_flag("--quick", verify_quick,
                         "Smaller sample sizes, same thresholds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*sim) {
            cfg.mode = mode_name == "sync" ? simopn::OperationMode::synchronous
                                           : simopn::OperationMode::non_synchronous;
            cfg.detector = det_name == "ml" ? simopn::DetectorKind::exact_ml
                                            : simopn::DetectorKind::high_snr;
            cfg.phase_model = sim_model.build();
            cfg.snr_db_points = parse_snr_spec(snr_spec);
            return run_simulate(cfg, sim_model.echo(), mode_name, det_name,
                                sim_output);
        }
        if (*floor_cmd) return run_floor(floor_order, floor_model, floor_output);
        if (*bound_cmd)
            return run_bound(bound_order, bound_kappa, bound_antennas,
                             bound_output);
        if (*verify_cmd) return run_verify(verify_seed, verify_quick);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
