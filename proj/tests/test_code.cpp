#include <doctest.h>

#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "nomalink/code.hpp"
#include "nomalink/encoder.hpp"

using namespace nomalink;

namespace {

// info_len 3, q = 2, alpha = 2, hand-built interleavers.  Check 0 combines
// slots {0,1} = sockets {1,3} (bits 0, 2); check 1 combines slots {2,3} =
// sockets {0,2} (bits 0, 1).
CodeInstance toy_instance() {
    CodeInstance code;
    code.params.q = 2;
    code.params.alpha = 2;
    code.params.rep_pattern = {+1, -1};
    code.info_len = 3;
    code.bit_degree = {2, 1, 1};
    code.edge_perm = {2, 0, 3, 1};
    code.user_perm.resize(8);
    std::iota(code.user_perm.begin(), code.user_perm.end(), 0);
    finalize_code_instance(code);
    return code;
}

}  // namespace

TEST_SUITE("code") {

TEST_CASE("rate formula") {
    DegreeDistribution lam(std::map<int, double>{{3, 1.0}});
    // S = 1/3: alpha*S / (alpha*q*S + 1)
    CHECK(code_rate(1, 1, lam) == doctest::Approx((1.0 / 3.0) / (1.0 / 3.0 + 1.0)).epsilon(1e-12));
    CHECK(code_rate(2, 4, lam) ==
          doctest::Approx((4.0 / 3.0) / (8.0 / 3.0 + 1.0)).epsilon(1e-12));
}

TEST_CASE("make_code_params validates and fills the sign pattern") {
    DegreeDistribution lam(std::map<int, double>{{3, 1.0}});
    const CodeParams p = make_code_params(3, 2, lam);
    REQUIRE(p.rep_pattern.size() == 3);
    CHECK(p.rep_pattern[0] == +1);
    CHECK(p.rep_pattern[1] == -1);
    CHECK(p.rep_pattern[2] == +1);
    CHECK(p.rate == doctest::Approx(code_rate(3, 2, lam)));
    CHECK_THROWS_AS(make_code_params(0, 1, lam), std::invalid_argument);
    CHECK_THROWS_AS(make_code_params(6, 1, lam), std::invalid_argument);
    CHECK_THROWS_AS(make_code_params(1, 0, lam), std::invalid_argument);
    CHECK_THROWS_AS(make_code_params(1, 1, DegreeDistribution{}), std::invalid_argument);
}

TEST_CASE("toy instance structure") {
    const CodeInstance code = toy_instance();
    CHECK(code.n_edges == 4);
    CHECK(code.parity_len == 2);
    CHECK(code.rep_len == 6);
    CHECK(code.codeword_len == 8);
    CHECK(code.socket_owner == std::vector<int>{0, 0, 1, 2});
    CHECK(code.socket_of_slot == std::vector<int>{1, 3, 0, 2});
    const std::vector<std::int8_t> want_sign{+1, +1, +1, -1, -1, -1, +1, +1};
    CHECK(code.mod_sign == want_sign);
}

TEST_CASE("encode: frozen toy codeword") {
    const CodeInstance code = toy_instance();
    // u0 = b0^b2 = 0, u1 = b0^b1 = 1; accumulator p = {0, 1}
    CHECK(encode(code, {1, 0, 1}) == std::vector<std::uint8_t>{1, 0, 1, 1, 0, 1, 0, 1});
    CHECK(encode(code, {0, 0, 0}) == std::vector<std::uint8_t>(8, 0));
    // u0 = 1, u1 = 1; p = {1, 0}
    CHECK(encode(code, {0, 1, 1}) == std::vector<std::uint8_t>{0, 1, 1, 0, 1, 1, 1, 0});
    CHECK_THROWS_AS(encode(code, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(encode(code, {1, 0, 2}), std::invalid_argument);
}

TEST_CASE("modulate: signs and interleaver placement") {
    const CodeInstance code = toy_instance();
    const auto x = modulate(code, encode(code, {1, 0, 1}));
    const std::vector<double> want{-1, +1, -1, +1, -1, +1, +1, -1};
    REQUIRE(x.size() == want.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == want[i]);
}

TEST_CASE("encode linearity: sum of codewords is codeword of the sum") {
    const CodeInstance code = build_code(find_preset("table1-full").params, 64, 5);
    std::vector<std::uint8_t> a(64), b(64), s(64);
    for (int i = 0; i < 64; ++i) {
        a[i] = static_cast<std::uint8_t>((i * 7 + 1) % 3 == 0);
        b[i] = static_cast<std::uint8_t>((i * 5 + 2) % 4 == 0);
        s[i] = a[i] ^ b[i];
    }
    const auto ca = encode(code, a), cb = encode(code, b), cs = encode(code, s);
    for (int t = 0; t < code.codeword_len; ++t) CHECK(cs[t] == (ca[t] ^ cb[t]));
}

TEST_CASE("build_code quantization keeps every degree and hits the edge multiple") {
    const CodeParams p = find_preset("table1-over").params;
    for (int info_len : {160, 1024, 4096}) {
        const CodeInstance code = build_code(p, info_len, 17);
        REQUIRE(static_cast<int>(code.bit_degree.size()) == info_len);
        CHECK(code.n_edges % p.alpha == 0);
        std::map<int, int> got;
        for (int d : code.bit_degree) got[d] += 1;
        // every profile degree is represented (allowing for the +deficit repair
        // possibly creating one off-profile degree on the last bit)
        for (const DegreeTerm& t : p.lambda.terms()) CHECK(got.count(t.degree) == 1);
        if (info_len >= 1024) {
            // node fractions approach (lambda_d/d)/S
            const double S = p.lambda.inverse_moment();
            for (const DegreeTerm& t : p.lambda.terms()) {
                const double want = (t.fraction / t.degree) / S;
                CHECK(static_cast<double>(got[t.degree]) / info_len ==
                      doctest::Approx(want).epsilon(0.1));
            }
        }
    }
}

TEST_CASE("build_code rejects profiles that quantize to zero bits") {
    DegreeDistribution lam(std::map<int, double>{{3, 0.999}, {100, 0.001}});
    const CodeParams p = make_code_params(1, 2, lam);
    CHECK_THROWS_AS(build_code(p, 16, 1), std::invalid_argument);
}

TEST_CASE("instance rate approaches the design rate") {
    for (const CodePreset& preset : code_presets()) {
        const CodeInstance code = build_code(preset.params, 4096, 99);
        CHECK(std::abs(instance_rate(code) - preset.params.rate) <= 0.01);
    }
}

TEST_CASE("preset inventory") {
    CHECK(code_presets().size() >= 11);
    CHECK(has_preset("table1-full"));
    CHECK(!has_preset("bogus"));
    CHECK_THROWS_AS(find_preset("bogus"), std::out_of_range);
    for (const CodePreset& p : code_presets()) {
        CHECK(p.params.rate == doctest::Approx(code_rate(p.params.q, p.params.alpha, p.params.lambda))
                                   .epsilon(1e-12));
        CHECK(p.params.q >= 1);
        CHECK(p.params.alpha >= 1);
        CHECK(!p.params.lambda.empty());
    }
}

TEST_CASE("finalize rejects malformed instances") {
    CodeInstance code = toy_instance();
    code.edge_perm = {0, 0, 1, 2};  // not a permutation
    CHECK_THROWS_AS(finalize_code_instance(code), std::invalid_argument);

    code = toy_instance();
    code.bit_degree = {1, 1, 1};  // alpha does not divide 3
    CHECK_THROWS_AS(finalize_code_instance(code), std::invalid_argument);

    code = toy_instance();
    code.user_perm[0] = 7;  // duplicate target
    CHECK_THROWS_AS(finalize_code_instance(code), std::invalid_argument);
}

}  // TEST_SUITE
