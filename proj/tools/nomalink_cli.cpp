// Command-line front end: EXIT trajectories and decoder curves, convergence
// thresholds, degree-profile optimization, Monte-Carlo BER runs, capacity
// limits and the built-in preset inventory.
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible or diverged,
// 4 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nomalink/capacity.hpp"
#include "nomalink/code.hpp"
#include "nomalink/config.hpp"
#include "nomalink/exit_engine.hpp"
#include "nomalink/optimizer.hpp"
#include "nomalink/rng.hpp"
#include "nomalink/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes through a stream chosen by --out ("" or "-" = stdout).
void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw nomalink::ConfigError("cannot open output file: " + path);
    fn(os);
    if (!os) throw std::runtime_error("write failed: " + path);
}

nomalink::SystemDims resolve_dims(const nomalink::CodePreset& preset, std::optional<int> k_opt,
                                  std::optional<int> m_opt) {
    nomalink::SystemDims dims{preset.design_K, preset.design_M};
    if (k_opt) dims.K = *k_opt;
    if (m_opt) dims.M = *m_opt;
    if (dims.K <= 0 || dims.M <= 0)
        throw nomalink::ConfigError("preset \"" + preset.name +
                                    "\" has no design dimensions; pass -K and -M");
    return dims;
}

double resolve_sigma(const nomalink::CodePreset& preset, std::optional<double> ebn0,
                     std::optional<double> sigma) {
    if (ebn0 && sigma) throw nomalink::ConfigError("--ebn0 and --sigma are mutually exclusive");
    if (sigma) {
        if (!(*sigma > 0.0)) throw nomalink::ConfigError("--sigma must be positive");
        return *sigma;
    }
    if (ebn0) return nomalink::sigma_from_ebn0_db(*ebn0, preset.params.rate);
    if (preset.design_sigma_n > 0.0) return preset.design_sigma_n;
    throw nomalink::ConfigError("preset \"" + preset.name +
                                "\" has no design noise level; pass --ebn0 or --sigma");
}

// Decoder-curve grid covering the I_a band reachable at one operating point.
std::vector<double> point_grid(const nomalink::SystemDims& dims, double sigma_n, double step) {
    const double i_lo = nomalink::variance_to_mutual_info(
        nomalink::lmmse_variance_transfer_finite_k(1.0, dims, sigma_n));
    const double i_hi = nomalink::variance_to_mutual_info(sigma_n * sigma_n / dims.M);
    const double lo = std::max(0.0, i_lo - 0.03);
    const double hi = std::min(0.9999, i_hi + 0.03);
    const int n = std::clamp(static_cast<int>(std::ceil((hi - lo) / step)) + 1, 24, 1024);
    std::vector<double> grid(n);
    for (int j = 0; j < n; ++j) grid[j] = lo + (hi - lo) * j / (n - 1);
    return grid;
}

int cmd_presets() {
    std::printf("%-20s %2s %5s %10s %9s %9s %9s %12s\n", "name", "q", "alpha", "rate", "design_K",
                "design_M", "sigma_n", "design_dB");
    for (const nomalink::CodePreset& p : nomalink::code_presets()) {
        std::printf("%-20s %2d %5d %10.6f %9d %9d %9.2f ", p.name.c_str(), p.params.q,
                    p.params.alpha, p.params.rate, p.design_K, p.design_M, p.design_sigma_n);
        if (p.design_sigma_n > 0.0)
            std::printf("%12.3f\n", nomalink::ebn0_db_from_sigma(p.design_sigma_n, p.params.rate));
        else
            std::printf("%12s\n", "-");
    }
    return kExitOk;
}

struct CapacityArgs {
    std::string preset;
    std::optional<int> K, M;
    std::optional<double> rate;
    int draws = 100000;
    std::uint64_t seed = 1;
    double window_lo = -20.0, window_hi = 10.0;
};

int cmd_capacity(const CapacityArgs& a) {
    nomalink::SystemDims dims{0, 0};
    double rate = 0.0;
    if (!a.preset.empty()) {
        if (!nomalink::has_preset(a.preset))
            throw nomalink::ConfigError("unknown preset: " + a.preset);
        const nomalink::CodePreset& p = nomalink::find_preset(a.preset);
        dims = resolve_dims(p, a.K, a.M);
        rate = a.rate.value_or(p.params.rate);
    } else {
        if (!a.K || !a.M || !a.rate)
            throw nomalink::ConfigError("need --preset or all of -K, -M, --rate");
        dims = {*a.K, *a.M};
        rate = *a.rate;
    }
    const nomalink::CapacityLimitResult r =
        nomalink::capacity_limit(dims, rate, a.window_lo, a.window_hi, a.draws, a.seed);
    if (!r.found)
        throw InfeasibleError("capacity limit not bracketed in [" + std::to_string(a.window_lo) +
                              ", " + std::to_string(a.window_hi) + "] dB");
    std::printf("ebn0_db=%.10g capacity_bits=%.10g std_err_bits=%.10g K=%d M=%d rate=%.10g\n",
                r.ebn0_db, r.capacity_bits, r.std_err_bits, dims.K, dims.M, rate);
    return kExitOk;
}

struct ThresholdArgs {
    std::string preset;
    std::optional<int> K, M;
    std::optional<double> window_lo, window_hi;
    double tol_db = 0.01;
    bool mc_curve = false;
    std::string curve_out;
    std::uint64_t seed = 1;
};

int cmd_threshold(const ThresholdArgs& a) {
    if (!nomalink::has_preset(a.preset)) throw nomalink::ConfigError("unknown preset: " + a.preset);
    const nomalink::CodePreset& p = nomalink::find_preset(a.preset);
    const nomalink::SystemDims dims = resolve_dims(p, a.K, a.M);

    double lo, hi;
    if (a.window_lo && a.window_hi) {
        lo = *a.window_lo;
        hi = *a.window_hi;
    } else if (!a.window_lo && !a.window_hi) {
        if (p.design_sigma_n > 0.0) {
            const double design = nomalink::ebn0_db_from_sigma(p.design_sigma_n, p.params.rate);
            lo = design - 1.5;
            hi = design + 2.5;
        } else {
            lo = -15.0;
            hi = 10.0;
        }
    } else {
        throw nomalink::ConfigError("--window needs both endpoints");
    }

    nomalink::ThresholdConfig tc;
    tc.tol_db = a.tol_db;
    tc.analytic = !a.mc_curve;
    tc.curve.seed = nomalink::derive_seed(a.seed, nomalink::Stream::curve, 0);
    const nomalink::VarianceTable vtable(257, 200000,
                                         nomalink::derive_seed(a.seed, nomalink::Stream::llr_variance, 0));
    const nomalink::ThresholdResult r =
        nomalink::find_threshold(p.params, dims, lo, hi, vtable, tc);
    if (!a.curve_out.empty())
        with_output(a.curve_out, [&](std::ostream& os) { nomalink::write_curve_csv(os, r.curve); });
    if (!r.found)
        throw InfeasibleError(std::string("threshold not found in window: recursion ") +
                              (r.bracket_ok ? "bisection failed" : "does not bracket the boundary"));
    std::printf("threshold_db=%.10g window_lo_db=%.10g window_hi_db=%.10g tol_db=%.10g K=%d M=%d "
                "rate=%.10g\n",
                r.ebn0_db, lo, hi, a.tol_db, dims.K, dims.M, p.params.rate);
    return kExitOk;
}

struct ExitArgs {
    std::string preset;
    std::optional<int> K, M;
    std::optional<double> ebn0, sigma;
    bool mc_curve = false;
    std::string out, curve_out;
    std::uint64_t seed = 1;
};

int cmd_exit(const ExitArgs& a) {
    if (!nomalink::has_preset(a.preset)) throw nomalink::ConfigError("unknown preset: " + a.preset);
    const nomalink::CodePreset& p = nomalink::find_preset(a.preset);
    const nomalink::SystemDims dims = resolve_dims(p, a.K, a.M);
    const double sigma_n = resolve_sigma(p, a.ebn0, a.sigma);

    const std::vector<double> grid = point_grid(dims, sigma_n, a.mc_curve ? 0.0025 : 0.0005);
    nomalink::ExitCurve curve;
    if (a.mc_curve) {
        nomalink::CurveConfig cc;
        cc.seed = nomalink::derive_seed(a.seed, nomalink::Stream::curve, 0);
        curve = nomalink::decoder_exit_curve(p.params, grid, cc);
    } else {
        curve = nomalink::analytic_decoder_exit_curve(p.params, grid);
    }
    const nomalink::VarianceTable vtable(257, 200000,
                                         nomalink::derive_seed(a.seed, nomalink::Stream::llr_variance, 0));
    const nomalink::ExitTrajectory traj =
        nomalink::run_exit_recursion(dims, sigma_n, curve, vtable);

    with_output(a.out, [&](std::ostream& os) { nomalink::write_trajectory_csv(os, traj); });
    if (!a.curve_out.empty())
        with_output(a.curve_out, [&](std::ostream& os) { nomalink::write_curve_csv(os, curve); });
    std::fprintf(stderr, "converged=%d stalled=%d iterations=%zu min_gap=%.6g ebn0_db=%.6g\n",
                 traj.converged ? 1 : 0, traj.stalled ? 1 : 0, traj.states.size(), traj.min_gap,
                 nomalink::ebn0_db_from_sigma(sigma_n, p.params.rate));
    if (!traj.converged)
        throw InfeasibleError("recursion did not converge at this operating point");
    return kExitOk;
}

struct BerArgs {
    std::string preset, config_path, ebn0_spec, out;
    std::optional<int> K, M;
    int info_len = 4096;
    int tau_max = 250;
    long frames = 1000;
    long long max_errors = 100;
    std::uint64_t seed = 1;
};

int cmd_ber(const BerArgs& a) {
    nomalink::SimConfig cfg;
    if (!a.config_path.empty()) {
        cfg = nomalink::load_sim_config(a.config_path);
    } else {
        if (a.preset.empty()) throw nomalink::ConfigError("need --preset or --config");
        if (!nomalink::has_preset(a.preset))
            throw nomalink::ConfigError("unknown preset: " + a.preset);
        const nomalink::CodePreset& p = nomalink::find_preset(a.preset);
        cfg.dims = resolve_dims(p, a.K, a.M);
        cfg.code = p.params;
        cfg.code_name = p.name;
        if (a.ebn0_spec.empty()) throw nomalink::ConfigError("--ebn0 is required with --preset");
        cfg.ebn0_grid = nomalink::parse_ebn0_spec(a.ebn0_spec);
        cfg.info_len = a.info_len;
        cfg.tau_max = a.tau_max;
        cfg.max_frames = a.frames;
        cfg.max_bit_errors = a.max_errors;
        cfg.seed = a.seed;
        nomalink::validate_sim_config(cfg);
    }
    const nomalink::BerResult result = nomalink::run_ber_simulation(cfg);
    with_output(a.out, [&](std::ostream& os) { nomalink::write_ber_csv(os, result); });
    return kExitOk;
}

struct OptimizeArgs {
    std::string config_path, out, log_path, name = "optimized";
    std::optional<std::uint64_t> seed;
};

int cmd_optimize(const OptimizeArgs& a) {
    nomalink::OptimizerConfig cfg;
    if (!a.config_path.empty()) cfg = nomalink::load_optimizer_config(a.config_path);
    if (a.seed) cfg.seed = *a.seed;
    const nomalink::OptimizerResult r = nomalink::optimize_degree_distribution(cfg);
    if (!a.log_path.empty())
        with_output(a.log_path,
                    [&](std::ostream& os) { nomalink::write_optimizer_log_csv(os, r); });
    if (r.feasible)
        with_output(a.out, [&](std::ostream& os) {
            nomalink::write_code_json(os, a.name, r.best, cfg.dims, cfg.sigma_n);
        });
    std::fprintf(stderr,
                 "feasible=%d verified=%d q=%d alpha=%d rate=%.6g design_ebn0_db=%.6g "
                 "threshold_db=%.6g\n",
                 r.feasible ? 1 : 0, r.verified ? 1 : 0, r.best.q, r.best.alpha, r.best.rate,
                 r.design_ebn0_db, r.threshold_found ? r.verified_threshold_db : std::nan(""));
    if (!r.feasible) throw InfeasibleError("no feasible code found within the search budget");
    if (!r.verified)
        throw InfeasibleError("search winner failed full-fidelity re-verification");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uplink coded MIMO-NOMA link toolkit"};
    app.require_subcommand(1);

    CLI::App* sc_presets = app.add_subcommand("presets", "List built-in code presets");

    CapacityArgs cap;
    CLI::App* sc_cap = app.add_subcommand("capacity", "E_b/N_0 at which sum capacity meets K*R");
    sc_cap->add_option("--preset", cap.preset, "Code preset supplying dims and rate");
    sc_cap->add_option("-K", cap.K, "Users");
    sc_cap->add_option("-M", cap.M, "Receive antennas");
    sc_cap->add_option("--rate", cap.rate, "Per-user code rate");
    sc_cap->add_option("--draws", cap.draws, "Channel draws");
    sc_cap->add_option("--seed", cap.seed, "Master seed");
    sc_cap->add_option("--window-lo", cap.window_lo, "Search window bottom (dB)");
    sc_cap->add_option("--window-hi", cap.window_hi, "Search window top (dB)");

    ThresholdArgs th;
    CLI::App* sc_th = app.add_subcommand("threshold", "Bisect the iterative convergence threshold");
    sc_th->add_option("--preset", th.preset, "Code preset")->required();
    sc_th->add_option("-K", th.K, "Users (default: preset design)");
    sc_th->add_option("-M", th.M, "Receive antennas (default: preset design)");
    sc_th->add_option("--window-lo", th.window_lo, "Window bottom (dB)");
    sc_th->add_option("--window-hi", th.window_hi, "Window top (dB)");
    sc_th->add_option("--tol-db", th.tol_db, "Bisection tolerance (dB)");
    sc_th->add_flag("--mc-curve", th.mc_curve,
                    "Measure the decoder curve by Monte-Carlo decoding instead of density evolution");
    sc_th->add_option("--curve-out", th.curve_out, "Write the decoder curve CSV here");
    sc_th->add_option("--seed", th.seed, "Master seed");

    ExitArgs ex;
    CLI::App* sc_exit = app.add_subcommand("exit", "Dump the detector/decoder EXIT trajectory");
    sc_exit->add_option("--preset", ex.preset, "Code preset")->required();
    sc_exit->add_option("-K", ex.K, "Users (default: preset design)");
    sc_exit->add_option("-M", ex.M, "Receive antennas (default: preset design)");
    sc_exit->add_option("--ebn0", ex.ebn0, "Operating E_b/N_0 (dB; default: preset design point)");
    sc_exit->add_option("--sigma", ex.sigma, "Operating noise std (alternative to --ebn0)");
    sc_exit->add_flag("--mc-curve", ex.mc_curve, "Monte-Carlo decoder curve instead of density evolution");
    sc_exit->add_option("--out", ex.out, "Trajectory CSV path (default stdout)");
    sc_exit->add_option("--curve-out", ex.curve_out, "Write the decoder curve CSV here");
    sc_exit->add_option("--seed", ex.seed, "Master seed");

    BerArgs ber;
    CLI::App* sc_ber = app.add_subcommand("ber", "Monte-Carlo BER of the full iterative receiver");
    sc_ber->add_option("--preset", ber.preset, "Code preset");
    sc_ber->add_option("--config", ber.config_path, "Full simulation config (JSON)")
        ->check(CLI::ExistingFile);
    sc_ber->add_option("--ebn0", ber.ebn0_spec, "dB grid: \"start:stop:step\" or a single value");
    sc_ber->add_option("-K", ber.K, "Users (default: preset design)");
    sc_ber->add_option("-M", ber.M, "Receive antennas (default: preset design)");
    sc_ber->add_option("--info-len", ber.info_len, "Info bits per user per frame");
    sc_ber->add_option("--tau-max", ber.tau_max, "Max detector/decoder iterations");
    sc_ber->add_option("--frames", ber.frames, "Max frames per grid point");
    sc_ber->add_option("--max-errors", ber.max_errors, "Stop a point after this many bit errors");
    sc_ber->add_option("--seed", ber.seed, "Master seed");
    sc_ber->add_option("--out", ber.out, "BER CSV path (default stdout)");

    OptimizeArgs opt;
    CLI::App* sc_opt = app.add_subcommand("optimize", "Search a max-rate degree profile");
    sc_opt->add_option("--config", opt.config_path, "Optimizer config (JSON)")
        ->check(CLI::ExistingFile);
    sc_opt->add_option("--out", opt.out, "Winning code JSON path (default stdout)");
    sc_opt->add_option("--log", opt.log_path, "Search log CSV path");
    sc_opt->add_option("--name", opt.name, "Name embedded in the code JSON");
    sc_opt->add_option("--seed", opt.seed, "Master seed (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sc_presets->parsed()) return cmd_presets();
        if (sc_cap->parsed()) return cmd_capacity(cap);
        if (sc_th->parsed()) return cmd_threshold(th);
        if (sc_exit->parsed()) return cmd_exit(ex);
        if (sc_ber->parsed()) return cmd_ber(ber);
        if (sc_opt->parsed()) return cmd_optimize(opt);
    } catch (const nomalink::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const InfeasibleError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitConfig;
}
