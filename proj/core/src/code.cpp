#include "nomalink/code.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nomalink/rng.hpp"

namespace nomalink {

double code_rate(int q, int alpha, const DegreeDistribution& lambda) {
    const double s = lambda.inverse_moment();
    return (alpha * s) / (alpha * q * s + 1.0);
}

CodeParams make_code_params(int q, int alpha, DegreeDistribution lambda, int q_max) {
    if (q < 1 || q > q_max)
        throw std::invalid_argument("code params: q=" + std::to_string(q) + " outside [1, " +
                                    std::to_string(q_max) + "]");
    if (alpha < 1) throw std::invalid_argument("code params: alpha must be >= 1");
    if (lambda.empty()) throw std::invalid_argument("code params: empty degree profile");
    CodeParams p;
    p.q = q;
    p.alpha = alpha;
    p.lambda = std::move(lambda);
    p.rep_pattern.resize(q);
    for (int c = 0; c < q; ++c) p.rep_pattern[c] = (c % 2 == 0) ? +1 : -1;
    p.rate = code_rate(q, alpha, p.lambda);
    return p;
}

namespace {

// node-perspective bit counts per degree via largest-remainder rounding
std::vector<std::pair<int, int>> quantize_degrees(const DegreeDistribution& lambda, int info_len) {
    const double s = lambda.inverse_moment();
    std::vector<std::pair<int, int>> counts;  // (degree, n_bits)
    std::vector<std::pair<double, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t k = 0; k < lambda.terms().size(); ++k) {
        const auto& t = lambda.terms()[k];
        const double exact = info_len * (t.fraction / t.degree) / s;
        const int n = static_cast<int>(std::floor(exact));
        counts.push_back({t.degree, n});
        remainders.push_back({exact - n, k});
        assigned += n;
    }
    std::sort(remainders.begin(), remainders.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; assigned < info_len; ++r, ++assigned)
        counts[remainders[r % remainders.size()].second].second += 1;
    for (const auto& [d, n] : counts)
        if (n == 0)
            throw std::invalid_argument("code build: degree-" + std::to_string(d) +
                                        " fraction quantizes to zero bits at info_len " +
                                        std::to_string(info_len));
    return counts;
}

std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

}  // namespace

CodeInstance build_code(const CodeParams& params, int info_len, std::uint64_t seed) {
    if (info_len < 1) throw std::invalid_argument("code build: info_len must be >= 1");
    CodeInstance code;
    code.params = params;
    code.info_len = info_len;

    const auto counts = quantize_degrees(params.lambda, info_len);
    code.bit_degree.reserve(info_len);
    for (const auto& [d, n] : counts)
        for (int i = 0; i < n; ++i) code.bit_degree.push_back(d);

    // repair so the combiner fan-in divides the socket count; bump the last
    // (highest-degree) bit by the deficit, a perturbation of at most alpha-1 edges
    long edges = std::accumulate(code.bit_degree.begin(), code.bit_degree.end(), 0L);
    const int deficit = static_cast<int>((params.alpha - edges % params.alpha) % params.alpha);
    code.bit_degree.back() += deficit;
    edges += deficit;

    auto rng_edge = make_engine(derive_seed(seed, Stream::interleaver, 0));
    auto rng_user = make_engine(derive_seed(seed, Stream::interleaver, 1));
    code.edge_perm = random_permutation(static_cast<int>(edges), rng_edge);
    const int cw_len = params.q * info_len + static_cast<int>(edges) / params.alpha;
    code.user_perm = random_permutation(cw_len, rng_user);

    finalize_code_instance(code);
    return code;
}

void finalize_code_instance(CodeInstance& code) {
    const auto& p = code.params;
    if (p.q < 1 || p.alpha < 1) throw std::invalid_argument("code instance: bad params");
    if (static_cast<int>(code.bit_degree.size()) != code.info_len)
        throw std::invalid_argument("code instance: bit_degree size != info_len");

    long edges = 0;
    for (int d : code.bit_degree) {
        if (d < 1) throw std::invalid_argument("code instance: bit degree must be >= 1");
        edges += d;
    }
    if (edges % p.alpha != 0)
        throw std::invalid_argument("code instance: alpha does not divide edge count");

    code.n_edges = static_cast<int>(edges);
    code.parity_len = code.n_edges / p.alpha;
    code.rep_len = p.q * code.info_len;
    code.codeword_len = code.rep_len + code.parity_len;

    if (static_cast<int>(code.edge_perm.size()) != code.n_edges)
        throw std::invalid_argument("code instance: edge_perm size != edge count");
    if (static_cast<int>(code.user_perm.size()) != code.codeword_len)
        throw std::invalid_argument("code instance: user_perm size != codeword length");

    code.socket_owner.resize(code.n_edges);
    int s = 0;
    for (int i = 0; i < code.info_len; ++i)
        for (int d = 0; d < code.bit_degree[i]; ++d) code.socket_owner[s++] = i;

    code.socket_of_slot.assign(code.n_edges, -1);
    for (int e = 0; e < code.n_edges; ++e) {
        const int slot = code.edge_perm[e];
        if (slot < 0 || slot >= code.n_edges || code.socket_of_slot[slot] != -1)
            throw std::invalid_argument("code instance: edge_perm is not a permutation");
        code.socket_of_slot[slot] = e;
    }
    {
        std::vector<char> seen(code.codeword_len, 0);
        for (int t = 0; t < code.codeword_len; ++t) {
            const int pos = code.user_perm[t];
            if (pos < 0 || pos >= code.codeword_len || seen[pos])
                throw std::invalid_argument("code instance: user_perm is not a permutation");
            seen[pos] = 1;
        }
    }

    if (static_cast<int>(p.rep_pattern.size()) != p.q)
        throw std::invalid_argument("code instance: rep_pattern size != q");
    code.mod_sign.assign(code.codeword_len, +1);
    for (int c = 0; c < p.q; ++c) {
        if (p.rep_pattern[c] != 1 && p.rep_pattern[c] != -1)
            throw std::invalid_argument("code instance: rep_pattern entries must be +/-1");
        for (int i = 0; i < code.info_len; ++i)
            code.mod_sign[c * code.info_len + i] = static_cast<std::int8_t>(p.rep_pattern[c]);
    }
}

double instance_rate(const CodeInstance& code) {
    return static_cast<double>(code.info_len) / static_cast<double>(code.codeword_len);
}

}  // namespace nomalink
