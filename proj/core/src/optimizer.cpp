#include "nomalink/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nomalink/rng.hpp"

namespace nomalink {

namespace {

double rate_ceiling(int q, int alpha, int d_min) {
    const double s_max = 1.0 / d_min;
    return alpha * s_max / (alpha * q * s_max + 1.0);
}

double s_for_rate(double rate, int q, int alpha) {
    if (!(rate > 0.0) || !(q * rate < 1.0)) throw std::invalid_argument("unrepresentable rate");
    return rate / (alpha * (1.0 - q * rate));
}

// Exponentially tilted projection of a raw genome onto {lambda : sum l_i/d_i = S}:
// l_i(theta) proportional to w_i exp(theta/d_i), theta bisected to hit S.
// Returns an empty distribution when S is unreachable on the genome's support.
DegreeDistribution lambda_from_genome(std::vector<double> w, const std::vector<int>& degrees,
                                      double s_target) {
    const double kDrop = 1e-4;
    // Dropping sub-kDrop mass moves S by up to kDrop * (1/d_min - 1/d_max), so
    // accept within that slack; otherwise boundary targets (a pair's rate
    // ceiling collapses to the single lowest degree) are never representable.
    const double s_tol =
        1e-8 + kDrop * (1.0 / degrees.front() - 1.0 / degrees.back());
    for (;;) {
        std::vector<int> live;
        for (std::size_t i = 0; i < degrees.size(); ++i)
            if (w[i] > 0.0) live.push_back(static_cast<int>(i));
        if (live.empty()) return {};

        auto s_of = [&](double theta, std::vector<double>* out) {
            double mx = -1e300;
            for (int i : live) mx = std::max(mx, std::log(w[i]) + theta / degrees[i]);
            double norm = 0.0, moment = 0.0;
            std::vector<double> lam(degrees.size(), 0.0);
            for (int i : live) {
                const double e = std::exp(std::log(w[i]) + theta / degrees[i] - mx);
                lam[i] = e;
                norm += e;
                moment += e / degrees[i];
            }
            if (out) {
                for (double& x : lam) x /= norm;
                *out = std::move(lam);
            }
            return moment / norm;
        };

        double lo = -3000.0, hi = 3000.0;
        if (s_of(lo, nullptr) > s_target + s_tol || s_of(hi, nullptr) < s_target - s_tol) return {};
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (s_of(mid, nullptr) < s_target ? lo : hi) = mid;
        }
        std::vector<double> lam;
        const double achieved = s_of(0.5 * (lo + hi), &lam);
        if (std::abs(achieved - s_target) > s_tol) return {};

        bool dropped = false;
        for (std::size_t i = 0; i < lam.size(); ++i) {
            if (lam[i] > 0.0 && lam[i] < kDrop) {
                w[i] = 0.0;
                dropped = true;
            }
        }
        if (dropped) continue;

        std::vector<DegreeTerm> terms;
        double total = 0.0;
        for (std::size_t i = 0; i < lam.size(); ++i)
            if (lam[i] > 0.0) total += lam[i];
        for (std::size_t i = 0; i < lam.size(); ++i)
            if (lam[i] > 0.0) terms.push_back({degrees[i], lam[i] / total});
        try {
            return DegreeDistribution(terms);
        } catch (const std::exception&) {
            return {};
        }
    }
}

struct Evaluator {
    const OptimizerConfig* cfg = nullptr;
    const VarianceTable* vtable = nullptr;
    long evals = 0;
    // best-infeasible fallback across the whole search
    double best_any_gap = -1e30;
    CodeParams best_any;

    // Tunnel margin of (q, alpha, lambda) at the design point, scored with
    // the density-evolution curve; -inf-ish on unbuildable candidates.
    double gap(int q, int alpha, const DegreeDistribution& lambda) {
        ++evals;
        CodeParams params;
        try {
            params = make_code_params(q, alpha, lambda, cfg->q_max);
        } catch (const std::exception&) {
            return -1e30;
        }
        const double s = cfg->sigma_n * cfg->sigma_n / cfg->dims.M;
        const double i_lo =
            variance_to_mutual_info(lmmse_variance_transfer_finite_k(1.0, cfg->dims, cfg->sigma_n));
        const double i_hi = variance_to_mutual_info(s);
        const double lo = std::max(0.0, i_lo - 0.02);
        const double hi = std::min(0.9999, i_hi + 0.02);
        const int n = 48;
        std::vector<double> grid(n);
        for (int j = 0; j < n; ++j) grid[j] = lo + (hi - lo) * j / (n - 1);
        double g;
        try {
            const ExitCurve curve = analytic_decoder_exit_curve(params, grid, cfg->search_curve);
            g = tunnel_min_gap(curve, cfg->dims, cfg->sigma_n, *vtable);
        } catch (const std::exception&) {
            return -1e30;
        }
        if (g > best_any_gap) {
            best_any_gap = g;
            best_any = params;
        }
        return g;
    }
};

struct DeOutcome {
    bool feasible = false;
    double best_gap = -1e30;
    DegreeDistribution best_lambda;
};

// Differential evolution over genomes for a fixed (q, alpha, rate); exits as
// soon as any candidate clears the feasibility margin (existence search).
DeOutcome de_search(Evaluator& ev, int q, int alpha, double rate, int pop, int gens,
                    std::uint64_t seed) {
    const OptimizerConfig& cfg = *ev.cfg;
    const std::vector<int>& degrees = cfg.degree_set;
    const std::size_t D = degrees.size();
    double s_target;
    DeOutcome out;
    try {
        s_target = s_for_rate(rate, q, alpha);
    } catch (const std::exception&) {
        return out;
    }

    auto eng = make_engine(seed, Stream::optimizer, 0);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> pick_dim(0, static_cast<int>(D) - 1);

    std::vector<std::vector<double>> pool;
    pool.reserve(pop);
    pool.push_back(std::vector<double>(D, 1.0));  // uniform weights
    if (pop > 1) {  // mass at the support ends
        std::vector<double> g(D, 0.05);
        g.front() = 1.0;
        g.back() = 1.0;
        pool.push_back(g);
    }
    if (pop > 2) {  // low-degree-heavy ramp
        std::vector<double> g(D);
        for (std::size_t i = 0; i < D; ++i) g[i] = 1.0 - 0.7 * i / std::max<std::size_t>(1, D - 1);
        pool.push_back(g);
    }
    while (static_cast<int>(pool.size()) < pop) {
        std::vector<double> g(D);
        for (double& x : g) x = unif(eng);
        pool.push_back(g);
    }

    std::vector<double> fit(pop, -1e30);
    auto assess = [&](const std::vector<double>& genome, double& slot) -> bool {
        const DegreeDistribution lam = lambda_from_genome(genome, degrees, s_target);
        double g = -1e30;
        if (!lam.empty()) g = ev.gap(q, alpha, lam);
        slot = g;
        if (g > out.best_gap) {
            out.best_gap = g;
            out.best_lambda = lam;
        }
        if (g >= cfg.feasible_gap) {
            out.feasible = true;
            return true;
        }
        return false;
    };

    for (int i = 0; i < pop; ++i)
        if (assess(pool[i], fit[i])) return out;

    std::uniform_int_distribution<int> pick(0, pop - 1);
    for (int gen = 0; gen < gens; ++gen) {
        for (int i = 0; i < pop; ++i) {
            int a = pick(eng), b = pick(eng), c = pick(eng);
            while (a == i) a = pick(eng);
            while (b == i || b == a) b = pick(eng);
            while (c == i || c == a || c == b) c = pick(eng);
            std::vector<double> trial = pool[i];
            const int forced = pick_dim(eng);
            for (std::size_t d = 0; d < D; ++d) {
                if (static_cast<int>(d) == forced || u01(eng) < 0.9)
                    trial[d] = std::clamp(pool[a][d] + 0.7 * (pool[b][d] - pool[c][d]), 1e-6, 1.0);
            }
            double f = -1e30;
            const bool done = assess(trial, f);
            if (f > fit[i]) {
                fit[i] = f;
                pool[i] = std::move(trial);
            }
            if (done) return out;
        }
    }
    return out;
}

}  // namespace

OptimizerResult optimize_degree_distribution(const OptimizerConfig& config) {
    validate_dims(config.dims);
    if (!(config.sigma_n > 0.0)) throw std::invalid_argument("sigma_n must be positive");
    if (config.degree_set.empty()) throw std::invalid_argument("degree_set must be non-empty");
    for (int d : config.degree_set)
        if (d < 2) throw std::invalid_argument("degrees must be >= 2");
    if (config.q_max < 1 || config.alpha_min < 1 || config.alpha_max < config.alpha_min)
        throw std::invalid_argument("bad (q, alpha) ranges");
    if (config.population < 4 || config.generations < 1)
        throw std::invalid_argument("population >= 4 and generations >= 1 required");

    OptimizerConfig cfg = config;
    std::sort(cfg.degree_set.begin(), cfg.degree_set.end());
    cfg.degree_set.erase(std::unique(cfg.degree_set.begin(), cfg.degree_set.end()),
                         cfg.degree_set.end());

    const VarianceTable vtable(129, 100000, derive_seed(cfg.seed, Stream::llr_variance, 0));
    Evaluator ev;
    ev.cfg = &cfg;
    ev.vtable = &vtable;

    struct Pair {
        int q, alpha;
        double ceiling;
    };
    std::vector<Pair> pairs;
    for (int q = 1; q <= cfg.q_max; ++q)
        for (int alpha = cfg.alpha_min; alpha <= cfg.alpha_max; ++alpha)
            pairs.push_back({q, alpha, rate_ceiling(q, alpha, cfg.degree_set.front())});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
        if (x.ceiling != y.ceiling) return x.ceiling > y.ceiling;
        return x.q != y.q ? x.q < y.q : x.alpha < y.alpha;
    });

    OptimizerResult result;
    double best_rate = 0.0;
    DegreeDistribution best_lambda;
    int best_q = 0, best_alpha = 0;
    double best_gap = -1e30;

    int probe_counter = 0;
    auto probe = [&](int q, int alpha, double rate, bool reduced) {
        const int pop = reduced ? std::max(4, cfg.population / 2) : cfg.population;
        const int gens = reduced ? std::max(2, cfg.generations / 2) : cfg.generations;
        return de_search(ev, q, alpha, rate, pop, gens,
                         derive_seed(cfg.seed, Stream::optimizer, ++probe_counter));
    };

    for (const Pair& pr : pairs) {
        PairLog log;
        log.q = pr.q;
        log.alpha = pr.alpha;
        const long evals_before = ev.evals;
        if (pr.ceiling <= best_rate + 1e-6) {
            log.pruned = true;
            result.log.push_back(log);
            continue;
        }

        // Top of the pair's rate range first: for degenerate (single-degree)
        // profiles it is the only representable rate.
        const double top = pr.ceiling - 1e-9;
        double lo_rate = -1.0;
        DeOutcome lo_out;
        DeOutcome top_out = probe(pr.q, pr.alpha, top, false);
        if (top_out.feasible) {
            lo_rate = top;
            lo_out = top_out;
        } else {
            // Entry probe just above the incumbent: a pair that cannot beat it
            // is abandoned after a reduced-budget look.
            const double entry = std::max(cfg.min_rate, best_rate > 0.0 ? best_rate + 0.002 : cfg.min_rate);
            if (entry < top) {
                DeOutcome entry_out = probe(pr.q, pr.alpha, entry, best_rate > 0.0);
                if (entry_out.feasible) {
                    lo_rate = entry;
                    lo_out = entry_out;
                    double lo = entry, hi = top;
                    for (int step = 0; step < cfg.rate_bisect_steps; ++step) {
                        const double mid = 0.5 * (lo + hi);
                        DeOutcome mid_out = probe(pr.q, pr.alpha, mid, false);
                        if (mid_out.feasible) {
                            lo = mid;
                            lo_rate = mid;
                            lo_out = std::move(mid_out);
                        } else {
                            hi = mid;
                        }
                    }
                }
            }
        }

        if (lo_rate > 0.0) {
            log.best_rate = lo_rate;
            log.best_gap = lo_out.best_gap;
            if (lo_rate > best_rate) {
                best_rate = lo_rate;
                best_lambda = lo_out.best_lambda;
                best_q = pr.q;
                best_alpha = pr.alpha;
                best_gap = lo_out.best_gap;
            }
        }
        log.evaluations = static_cast<int>(ev.evals - evals_before);
        result.log.push_back(log);
    }

    if (best_rate <= 0.0) {
        result.feasible = false;
        result.best = ev.best_any_gap > -1e29 ? ev.best_any : CodeParams{};
        result.best_gap = ev.best_any_gap;
        if (!result.best.lambda.empty())
            result.design_ebn0_db = ebn0_db_from_sigma(cfg.sigma_n, result.best.rate);
        return result;
    }

    // Full-fidelity re-verification of the winner; on failure step the rate
    // down and refit the profile before giving up.
    const double derate[] = {1.0, 0.985, 0.97};
    for (double factor : derate) {
        const double rate = best_rate * factor;
        DegreeDistribution lambda = best_lambda;
        if (factor < 1.0) {
            DeOutcome refit = probe(best_q, best_alpha, rate, false);
            if (!refit.feasible) continue;
            lambda = refit.best_lambda;
        }
        CodeParams params = make_code_params(best_q, best_alpha, lambda, cfg.q_max);
        const double design_db = ebn0_db_from_sigma(cfg.sigma_n, params.rate);
        ThresholdResult th = find_threshold(params, cfg.dims, design_db - 1.2, design_db + 0.05,
                                            vtable, cfg.verify);
        const bool top_ok =
            run_exit_recursion(cfg.dims, sigma_from_ebn0_db(design_db + 0.05, params.rate),
                               th.curve, vtable, cfg.verify.recursion)
                .converged;
        result.best = params;
        result.best_gap = best_gap;
        result.design_ebn0_db = design_db;
        result.feasible = true;
        result.verified = top_ok;
        result.threshold_found = th.found;
        if (th.found)
            result.verified_threshold_db = th.ebn0_db;
        else if (top_ok)
            result.verified_threshold_db = design_db - 1.2;  // at or below the window
        if (result.verified) return result;
    }
    return result;  // feasible in search but not verified; reported honestly
}

}  // namespace nomalink
