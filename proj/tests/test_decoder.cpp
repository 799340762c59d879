#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "nomalink/code.hpp"
#include "nomalink/decoder.hpp"
#include "nomalink/encoder.hpp"

using namespace nomalink;

namespace {

// Cycle-free instances: every info bit carries exactly one IRA edge, so the
// factor graph is a parity chain with leaf attachments and belief propagation
// is exact.
CodeInstance tree_instance(int info_len, int q, int alpha, const std::vector<int>& edge_perm,
                           const std::vector<int>& user_perm) {
    CodeInstance code;
    code.params.q = q;
    code.params.alpha = alpha;
    code.params.rep_pattern.resize(q);
    for (int c = 0; c < q; ++c) code.params.rep_pattern[c] = (c % 2 == 0) ? +1 : -1;
    code.info_len = info_len;
    code.bit_degree.assign(info_len, 1);
    code.edge_perm = edge_perm;
    code.user_perm = user_perm;
    finalize_code_instance(code);
    return code;
}

std::vector<int> iota_perm(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

// Exhaustive bit-posterior computation from per-slot symbol-domain LLRs.
std::vector<double> map_posterior_p1(const CodeInstance& code, const std::vector<double>& llrs) {
    const int n = code.info_len;
    std::vector<double> num(n, 0.0);
    double den = 0.0;
    for (int word = 0; word < (1 << n); ++word) {
        std::vector<std::uint8_t> info(n);
        for (int i = 0; i < n; ++i) info[i] = static_cast<std::uint8_t>((word >> i) & 1);
        const std::vector<double> x = modulate(code, encode(code, info));
        double loglik = 0.0;
        for (int t = 0; t < code.codeword_len; ++t) loglik += 0.5 * x[t] * llrs[t];
        const double w = std::exp(loglik);
        den += w;
        for (int i = 0; i < n; ++i)
            if (info[i]) num[i] += w;
    }
    std::vector<double> p1(n);
    for (int i = 0; i < n; ++i) p1[i] = num[i] / den;
    return p1;
}

void check_map_equivalence(const CodeInstance& code, int n_inputs, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    DecoderState state;
    for (int trial = 0; trial < n_inputs; ++trial) {
        std::vector<double> llrs(static_cast<std::size_t>(code.codeword_len));
        for (double& x : llrs) x = u(eng);
        init_decoder(state, code);
        for (int it = 0; it < 30; ++it) decode_activation(state, llrs);
        const std::vector<double> p1 = map_posterior_p1(code, llrs);
        for (int i = 0; i < code.info_len; ++i) {
            const double p1_bp = 1.0 / (1.0 + std::exp(state.app_info[i]));
            CHECK(std::abs(p1_bp - p1[i]) < 1e-6);
        }
    }
}

}  // namespace

TEST_SUITE("decoder") {

TEST_CASE("boxplus identities") {
    CHECK(boxplus(1.3, 0.0) == 0.0);
    CHECK(boxplus(0.0, -2.0) == 0.0);
    CHECK(boxplus(2.0, 3.0) == doctest::Approx(boxplus(3.0, 2.0)));
    // against the tanh-product definition
    for (double a : {-3.0, -0.7, 0.4, 2.2}) {
        for (double b : {-1.1, 0.9, 4.0}) {
            const double want = 2.0 * std::atanh(std::tanh(0.5 * a) * std::tanh(0.5 * b));
            CHECK(boxplus(a, b) == doctest::Approx(want).epsilon(1e-12));
        }
    }
    // saturated inputs stay finite and keep the sign product
    const double big = boxplus(kLlrClip, kLlrClip);
    CHECK(std::isfinite(big));
    CHECK(big > 20.0);
    CHECK(boxplus(kLlrClip, -kLlrClip) < -20.0);
}

TEST_CASE("tree code, alpha = 2: message passing equals exhaustive bit posteriors") {
    // checks: {b1, b3} then {b0, b2}; codeword = 2 copies of 4 bits + 2 parities
    const CodeInstance code =
        tree_instance(4, 2, 2, {2, 0, 3, 1}, iota_perm(10));
    check_map_equivalence(code, 500, 2024);
}

TEST_CASE("tree code, alpha = 1, q = 1: chain with leaves") {
    const CodeInstance code = tree_instance(3, 1, 1, {1, 2, 0}, iota_perm(6));
    check_map_equivalence(code, 500, 77);
}

TEST_CASE("tree code with scrambled transmit order") {
    const CodeInstance code =
        tree_instance(4, 2, 2, {0, 1, 2, 3}, {7, 2, 9, 0, 4, 6, 1, 8, 3, 5});
    check_map_equivalence(code, 300, 5);
}

TEST_CASE("posterior sign recovers a lightly corrupted codeword") {
    const CodeInstance code = build_code(find_preset("table1-full").params, 512, 31);
    std::mt19937_64 eng(9);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<std::uint8_t> info(512);
    for (auto& b : info) b = static_cast<std::uint8_t>(u01(eng) < 0.5);
    const std::vector<double> x = modulate(code, encode(code, info));
    std::vector<double> llrs(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        const bool flip = u01(eng) < 0.02;
        llrs[t] = (flip ? -6.0 : 6.0) * x[t];
    }
    DecoderState state;
    init_decoder(state, code);
    for (int it = 0; it < 40; ++it) decode_activation(state, llrs);
    CHECK(hard_decision(state) == info);
}

TEST_CASE("extrinsic output excludes the direct observation") {
    // On a tree with a single strong observation on one repetition copy, the
    // extrinsic at that slot must stay driven by the other copies, not by the
    // slot's own input.
    const CodeInstance code = tree_instance(3, 1, 1, {0, 1, 2}, iota_perm(6));
    std::vector<double> llrs(6, 0.0);
    llrs[0] = 5.0;  // only evidence: info bit 0's systematic copy
    DecoderState state;
    init_decoder(state, code);
    const std::vector<double>& ext = decode_activation(state, llrs);
    CHECK(std::abs(ext[0]) < 1e-12);  // nothing extrinsic flows back to the only source
}

TEST_CASE("activations persist state and refine") {
    const CodeInstance code = build_code(find_preset("table1-over").params, 256, 3);
    std::mt19937_64 eng(41);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> llrs(static_cast<std::size_t>(code.codeword_len));
    for (double& v : llrs) v = 1.2 + 0.9 * g(eng);  // all-zero word, noisy priors
    DecoderState state;
    init_decoder(state, code);
    decode_activation(state, llrs);
    const double first = std::accumulate(state.app_info.begin(), state.app_info.end(), 0.0);
    for (int it = 0; it < 10; ++it) decode_activation(state, llrs);
    const double later = std::accumulate(state.app_info.begin(), state.app_info.end(), 0.0);
    CHECK(state.activations == 11);
    CHECK(later > first);  // posteriors harden toward the (all-zero) truth
}

TEST_CASE("hard_bits slices signs") {
    CHECK(hard_bits({1.5, -0.2, 0.0, -7.0}) == std::vector<std::uint8_t>{0, 1, 0, 1});
}

}  // TEST_SUITE
