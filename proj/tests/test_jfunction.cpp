#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "nomalink/jfunction.hpp"

using namespace nomalink;

namespace {

// Independent Monte-Carlo oracle: I = 1 - E[log2(1 + e^-L)], L ~ N(s^2/2, s^2)
// for a consistent Gaussian LLR of a BPSK bit.
double j_mc(double sigma, int n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    const double m = 0.5 * sigma * sigma;
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double L = m + sigma * g(eng);
        loss += L > 40.0 ? std::exp(-L) : std::log1p(std::exp(-L));
    }
    return 1.0 - loss / n * 1.4426950408889634;
}

}  // namespace

TEST_SUITE("jfunction") {

TEST_CASE("matches a Monte-Carlo oracle") {
    for (double sigma : {0.3, 0.8, 1.5, 2.5, 4.0, 6.0}) {
        const double mc = j_mc(sigma, 2000000, 42);
        CHECK(std::abs(j_function(sigma) - mc) < 2e-3);
    }
}

TEST_CASE("endpoints and monotonicity") {
    CHECK(j_function(0.0) == 0.0);
    CHECK(j_function(100.0) > 1.0 - 1e-6);
    CHECK(j_function(1e9) <= 1.0);
    double prev = -1.0;
    for (double sigma = 0.0; sigma <= 12.0; sigma += 0.05) {
        const double v = j_function(sigma);
        CHECK(v >= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK_THROWS_AS(j_function(-0.1), std::invalid_argument);
}

TEST_CASE("inverse round trip") {
    for (double mi = 0.0005; mi < 0.9995; mi += 0.0123) {
        const double sigma = j_inverse(mi);
        CHECK(std::abs(j_function(sigma) - mi) <= 1e-6);
    }
    CHECK(j_inverse(0.0) == 0.0);
    CHECK_THROWS_AS(j_inverse(1.0), std::invalid_argument);
    CHECK_THROWS_AS(j_inverse(-0.01), std::invalid_argument);
}

TEST_CASE("low- and high-end asymptotics") {
    // small sigma: I ~ sigma^2 / (8 ln 2)
    const double s = 0.01;
    CHECK(j_function(s) == doctest::Approx(s * s / (8.0 * std::log(2.0))).epsilon(0.02));
    // large sigma: loss vanishes
    CHECK(1.0 - j_function(30.0) < 1e-10);
}

}  // TEST_SUITE
