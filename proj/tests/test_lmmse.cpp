#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "nomalink/lmmse.hpp"

using namespace nomalink;

namespace {

struct Instance {
    Eigen::MatrixXd H;
    Eigen::VectorXd y;
    GaussianMessageVector prior;
    double sigma_n = 1.0;
};

Instance random_instance(int K, int M, std::mt19937_64& eng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> uv(0.2, 1.5);
    Instance inst;
    inst.H.resize(M, K);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < K; ++j) inst.H(i, j) = g(eng);
    inst.y.resize(M);
    for (int i = 0; i < M; ++i) inst.y(i) = g(eng);
    inst.prior.mean.resize(K);
    inst.prior.var.resize(K);
    for (int k = 0; k < K; ++k) {
        inst.prior.mean(k) = 0.5 * g(eng);
        inst.prior.var(k) = uv(eng);
    }
    inst.sigma_n = uv(eng);
    return inst;
}

}  // namespace

TEST_SUITE("lmmse") {

TEST_CASE("K-side and M-side posteriors agree to 1e-9") {
    std::mt19937_64 eng(123);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const int K = dim(eng), M = dim(eng);
        const Instance inst = random_instance(K, M, eng);
        const auto a = lmmse_posterior_k_side(inst.H, inst.y, inst.prior, inst.sigma_n);
        const auto b = lmmse_posterior_m_side(inst.H, inst.y, inst.prior, inst.sigma_n);
        for (int k = 0; k < K; ++k) {
            CHECK(std::abs(a.mean(k) - b.mean(k)) < 1e-9);
            CHECK(std::abs(a.var(k) - b.var(k)) < 1e-9);
        }
    }
}

TEST_CASE("dispatcher picks a side consistent with both") {
    std::mt19937_64 eng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const Instance inst = random_instance(5, 3, eng);
        const auto p = lmmse_posterior(inst.H, inst.y, inst.prior, inst.sigma_n);
        const auto k = lmmse_posterior_k_side(inst.H, inst.y, inst.prior, inst.sigma_n);
        for (int i = 0; i < 5; ++i) {
            CHECK(std::abs(p.mean(i) - k.mean(i)) < 1e-9);
            CHECK(std::abs(p.var(i) - k.var(i)) < 1e-9);
        }
    }
}

TEST_CASE("Gaussian message algebra closes: prior * extrinsic == posterior") {
    std::mt19937_64 eng(321);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const int K = dim(eng), M = dim(eng);
        const Instance inst = random_instance(K, M, eng);
        const auto post = lmmse_posterior(inst.H, inst.y, inst.prior, inst.sigma_n);
        const auto ext = extrinsic_extract(post, inst.prior);
        for (int k = 0; k < K; ++k) {
            if (ext.var(k) >= kExtrinsicVarCap) continue;  // capped: no closure claim
            const double prec = 1.0 / inst.prior.var(k) + 1.0 / ext.var(k);
            const double mean =
                (inst.prior.mean(k) / inst.prior.var(k) + ext.mean(k) / ext.var(k)) / prec;
            CHECK(std::abs(1.0 / prec - post.var(k)) < 1e-9);
            CHECK(std::abs(mean - post.mean(k)) < 1e-9);
        }
    }
}

TEST_CASE("posterior sharpens the prior on generic instances") {
    std::mt19937_64 eng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Instance inst = random_instance(4, 4, eng);
        const auto post = lmmse_posterior(inst.H, inst.y, inst.prior, inst.sigma_n);
        for (int k = 0; k < 4; ++k) {
            CHECK(post.var(k) > 0.0);
            CHECK(post.var(k) <= inst.prior.var(k) + 1e-12);
        }
    }
}

TEST_CASE("noiseless single-user detection is exact") {
    Eigen::MatrixXd H(1, 1);
    H(0, 0) = 2.0;
    Eigen::VectorXd y(1);
    y(0) = -2.0;  // x = -1 exactly
    GaussianMessageVector prior;
    prior.mean = Eigen::VectorXd::Zero(1);
    prior.var = Eigen::VectorXd::Ones(1);
    const auto post = lmmse_posterior(H, y, prior, 1e-6);
    CHECK(post.mean(0) == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(post.var(0) < 1e-9);
}

TEST_CASE("llr mapping and clipping") {
    GaussianMessageVector ext;
    ext.mean.resize(3);
    ext.var.resize(3);
    ext.mean << 0.5, -40.0, 0.0;
    ext.var << 0.25, 0.1, 1.0;
    const Eigen::VectorXd llr = llr_from_extrinsic(ext);
    CHECK(llr(0) == doctest::Approx(2.0 * 0.5 / 0.25));
    CHECK(llr(1) == doctest::Approx(-kDetectorLlrClip));  // clipped
    CHECK(llr(2) == 0.0);
}

TEST_CASE("decoder-side soft symbols") {
    Eigen::VectorXd llr(3);
    llr << 0.0, 4.0, -100.0;
    const auto prior = prior_from_decoder(llr);
    CHECK(prior.mean(0) == 0.0);
    CHECK(prior.var(0) == doctest::Approx(1.0));
    CHECK(prior.mean(1) == doctest::Approx(std::tanh(2.0)));
    CHECK(prior.var(1) == doctest::Approx(1.0 - std::tanh(2.0) * std::tanh(2.0)));
    CHECK(prior.mean(2) == doctest::Approx(-1.0));
    CHECK(prior.var(2) >= kPriorVarFloor);  // floored, never exactly zero
}

}  // TEST_SUITE
