#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nomalink/code.hpp"
#include "nomalink/decoder.hpp"
#include "nomalink/encoder.hpp"
#include "nomalink/exit_engine.hpp"
#include "nomalink/jfunction.hpp"
#include "nomalink/lmmse.hpp"
#include "nomalink/rng.hpp"

namespace {

using namespace nomalink;

void bm_j_function(benchmark::State& state) {
    double sigma = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(j_function(sigma));
        sigma += 1e-6;
        if (sigma > 8.0) sigma = 0.1;
    }
}
BENCHMARK(bm_j_function);

void bm_j_inverse(benchmark::State& state) {
    double mi = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(j_inverse(mi));
        mi += 1e-7;
        if (mi > 0.99) mi = 0.01;
    }
}
BENCHMARK(bm_j_inverse);

void bm_variance_transfer(benchmark::State& state) {
    const SystemDims dims{16, 8};
    double v = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lmmse_variance_transfer_finite_k(v, dims, 5.27));
        v *= 0.999999;
        if (v < 1e-6) v = 1.0;
    }
}
BENCHMARK(bm_variance_transfer);

// One LMMSE posterior solve, K-side vs M-side elimination.
void bm_lmmse_posterior(benchmark::State& state) {
    const int K = static_cast<int>(state.range(0));
    const int M = static_cast<int>(state.range(1));
    const bool m_side = state.range(2) != 0;
    std::mt19937_64 eng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd H(M, K);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < K; ++j) H(i, j) = g(eng);
    Eigen::VectorXd y(M);
    for (int i = 0; i < M; ++i) y(i) = g(eng);
    GaussianMessageVector prior;
    prior.mean = Eigen::VectorXd::Zero(K);
    prior.var = Eigen::VectorXd::Constant(K, 0.5);
    for (auto _ : state) {
        GaussianMessageVector post = m_side ? lmmse_posterior_m_side(H, y, prior, 1.0)
                                            : lmmse_posterior_k_side(H, y, prior, 1.0);
        benchmark::DoNotOptimize(post.mean.data());
    }
}
BENCHMARK(bm_lmmse_posterior)
    ->Args({8, 8, 0})
    ->Args({8, 8, 1})
    ->Args({32, 8, 0})
    ->Args({32, 8, 1})
    ->Args({64, 8, 0})
    ->Args({64, 8, 1});

// One full decoder activation at the preset profile.
void bm_decoder_activation(benchmark::State& state) {
    const CodePreset& preset = find_preset("table1-full");
    const int info_len = static_cast<int>(state.range(0));
    const CodeInstance code = build_code(preset.params, info_len, 11);
    DecoderState dec;
    std::mt19937_64 eng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> llr(static_cast<std::size_t>(code.codeword_len));
    for (double& x : llr) x = 2.0 + 1.5 * g(eng);  // all-zero word priors
    for (auto _ : state) {
        init_decoder(dec, code);
        const std::vector<double>& ext = decode_activation(dec, llr);
        benchmark::DoNotOptimize(ext.data());
    }
    state.SetItemsProcessed(state.iterations() * code.codeword_len);
}
BENCHMARK(bm_decoder_activation)->Arg(1024)->Arg(4096);

// Full analytic decoder curve of the kind the threshold search builds.
void bm_analytic_curve(benchmark::State& state) {
    const CodePreset& preset = find_preset("table1-full");
    std::vector<double> grid(64);
    for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = 0.05 + 0.4 * j / (grid.size() - 1);
    for (auto _ : state) {
        ExitCurve curve = analytic_decoder_exit_curve(preset.params, grid);
        benchmark::DoNotOptimize(curve.ie.data());
    }
}
BENCHMARK(bm_analytic_curve);

}  // namespace

BENCHMARK_MAIN();
