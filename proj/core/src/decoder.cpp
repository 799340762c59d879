#include "nomalink/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nomalink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double clip(double x) { return std::clamp(x, -kLlrClip, kLlrClip); }

// log1p(exp(-t)) for t >= 0, skipping the exp once it underflows the result
inline double softcorr(double t) { return t > 40.0 ? 0.0 : std::log1p(std::exp(-t)); }

}  // namespace

double boxplus(double a, double b) {
    // +inf acts as the identity (a known zero bit); -inf as a known one
    if (std::isinf(a)) return a > 0 ? b : -b;
    if (std::isinf(b)) return b > 0 ? a : -a;
    const double mag = std::min(std::fabs(a), std::fabs(b));
    const double sgn = ((a < 0.0) != (b < 0.0)) ? -1.0 : 1.0;
    return sgn * mag + softcorr(std::fabs(a + b)) - softcorr(std::fabs(a - b));
}

void init_decoder(DecoderState& s, const CodeInstance& code) {
    s.code = &code;
    s.c2e.assign(code.n_edges, 0.0);
    s.to_rep.assign(code.info_len, 0.0);
    s.to_ira.assign(code.info_len, 0.0);
    s.app_info.assign(code.info_len, 0.0);
    s.app_cw.assign(code.codeword_len, 0.0);
    s.ext_cw.assign(code.codeword_len, 0.0);
    s.ext_tx.assign(code.codeword_len, 0.0);
    s.chan_cw.assign(code.codeword_len, 0.0);
    s.rep_sum.assign(code.info_len, 0.0);
    s.v2c.assign(code.n_edges, 0.0);
    s.bit_total.assign(code.info_len, 0.0);
    s.bwd.assign(code.parity_len + 1, 0.0);
    s.fwd_f.assign(code.parity_len, 0.0);
    s.activations = 0;
}

namespace {

// One full sweep of the IRA sub-graph: variable-to-check messages from the
// current combiner input and previous check-to-edge messages, then a single
// backward/forward pass over the accumulator chain of combiner checks.
// Updates state.c2e, state.bit_total (sum of new c2e per info bit), state.fwd_f
// and state.bwd; parity extrinsic for check j is fwd_f[j] + bwd[j+1].
void ira_sweep(DecoderState& s) {
    const CodeInstance& code = *s.code;
    const int alpha = code.params.alpha;
    const int P = code.parity_len;
    const double* Lp = s.chan_cw.data() + code.rep_len;

    // variable -> check, leave-one-out over each bit's sockets
    for (int i = 0; i < code.info_len; ++i) s.bit_total[i] = 0.0;
    for (int e = 0; e < code.n_edges; ++e) s.bit_total[code.socket_owner[e]] += s.c2e[e];
    for (int e = 0; e < code.n_edges; ++e) {
        const int i = code.socket_owner[e];
        s.v2c[e] = clip(s.to_ira[i] + s.bit_total[i] - s.c2e[e]);
    }

    // backward chain pass: bwd[j] = message from check j to parity bit j-1
    s.bwd[P] = 0.0;  // no check after the last parity bit
    for (int j = P - 1; j >= 1; --j) {
        double m = Lp[j] + s.bwd[j + 1];  // parity j -> check j
        for (int a = 0; a < alpha; ++a) m = boxplus(m, s.v2c[code.socket_of_slot[j * alpha + a]]);
        s.bwd[j] = clip(m);
    }
    if (P > 0) s.bwd[0] = 0.0;  // unused (check 0 is anchored on the known zero state)

    // forward pass; emits new check -> edge messages along the way
    double fprev = kInf;  // accumulator starts from a known zero
    double pref[16];      // alpha <= q_max-ish, tiny fan-in
    for (int j = 0; j < P; ++j) {
        const int base = j * alpha;
        const double bmsg = Lp[j] + s.bwd[j + 1];  // parity j -> check j
        // prefix box-plus over this check's edges
        double acc = kInf;
        for (int a = 0; a < alpha; ++a) {
            pref[a] = acc;
            acc = boxplus(acc, s.v2c[code.socket_of_slot[base + a]]);
        }
        s.fwd_f[j] = clip(boxplus(fprev, acc));
        // suffix sweep backwards to finish the leave-one-out products
        const double fb = boxplus(fprev, bmsg);
        double suff = kInf;
        for (int a = alpha - 1; a >= 0; --a) {
            const int e = code.socket_of_slot[base + a];
            s.c2e[e] = clip(boxplus(fb, boxplus(pref[a], suff)));
            suff = boxplus(suff, s.v2c[e]);
        }
        fprev = Lp[j] + s.fwd_f[j];
    }

    for (int i = 0; i < code.info_len; ++i) s.bit_total[i] = 0.0;
    for (int e = 0; e < code.n_edges; ++e) s.bit_total[code.socket_owner[e]] += s.c2e[e];
}

}  // namespace

const std::vector<double>& decode_activation(DecoderState& s,
                                             const std::vector<double>& channel_llrs) {
    const CodeInstance& code = *s.code;
    if (static_cast<int>(channel_llrs.size()) != code.codeword_len)
        throw std::invalid_argument("decode: channel LLR length mismatch");
    if (code.params.alpha > 15) throw std::invalid_argument("decode: alpha too large");

    const int N = code.info_len;
    const int q = code.params.q;

    // symbol domain, transmit order -> bit domain, codeword order
    for (int t = 0; t < code.codeword_len; ++t) {
        const int pos = code.user_perm[t];
        s.chan_cw[pos] = clip(static_cast<double>(code.mod_sign[pos]) * channel_llrs[t]);
    }

    // pass 1: repetition combining and an IRA sweep, independently
    for (int i = 0; i < N; ++i) {
        double sum = 0.0;
        for (int c = 0; c < q; ++c) sum += s.chan_cw[c * N + i];
        s.rep_sum[i] = sum;
    }
    ira_sweep(s);

    // information combiner: each branch receives the other branch's extrinsic
    for (int i = 0; i < N; ++i) {
        s.to_rep[i] = clip(s.bit_total[i]);
        s.to_ira[i] = clip(s.rep_sum[i]);
    }

    // pass 2: repetition extrinsics with the combiner feedback, second IRA sweep
    for (int c = 0; c < q; ++c)
        for (int i = 0; i < N; ++i) {
            const int pos = c * N + i;
            s.ext_cw[pos] = clip(s.rep_sum[i] - s.chan_cw[pos] + s.to_rep[i]);
        }
    ira_sweep(s);
    for (int j = 0; j < code.parity_len; ++j)
        s.ext_cw[code.rep_len + j] = clip(s.fwd_f[j] + s.bwd[j + 1]);

    // posteriors and re-interleaved symbol-domain output
    for (int i = 0; i < N; ++i) s.app_info[i] = s.rep_sum[i] + s.bit_total[i];
    for (int pos = 0; pos < code.codeword_len; ++pos) s.app_cw[pos] = s.chan_cw[pos] + s.ext_cw[pos];
    for (int t = 0; t < code.codeword_len; ++t) {
        const int pos = code.user_perm[t];
        s.ext_tx[t] = static_cast<double>(code.mod_sign[pos]) * s.ext_cw[pos];
    }
    ++s.activations;
    return s.ext_tx;
}

std::vector<std::uint8_t> hard_bits(const std::vector<double>& llrs) {
    std::vector<std::uint8_t> bits(llrs.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = llrs[i] < 0.0 ? 1 : 0;
    return bits;
}

std::vector<std::uint8_t> hard_decision(const DecoderState& s) { return hard_bits(s.app_info); }

}  // namespace nomalink
