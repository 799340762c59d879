#pragma once

#include <cstdint>
#include <vector>

#include "nomalink/code.hpp"

namespace nomalink {

// hard cap on every LLR handled by the decoder
inline constexpr double kLlrClip = 50.0;

// Exact pairwise check-node combination (box-plus), stable for clipped LLRs.
double boxplus(double a, double b);

// Message-passing state for one user's decoder.  Messages persist across
// activations: each global receiver iteration calls decode_activation once and
// the IRA edge messages keep refining from iteration to iteration.
struct DecoderState {
    const CodeInstance* code = nullptr;

    std::vector<double> c2e;       // check -> edge messages, socket order
    std::vector<double> to_rep;    // combiner -> repetition branch, per info bit
    std::vector<double> to_ira;    // combiner -> IRA branch, per info bit
    std::vector<double> app_info;  // per info bit: total posterior LLR
    std::vector<double> app_cw;    // per codeword position: channel + extrinsic (bit domain)
    std::vector<double> ext_cw;    // per codeword position: extrinsic only (bit domain)
    std::vector<double> ext_tx;    // per transmit slot: extrinsic, symbol domain
    long activations = 0;

    // scratch buffers
    std::vector<double> chan_cw;   // channel LLRs, codeword order, bit domain
    std::vector<double> rep_sum;   // per info bit: sum of repetition-copy channel LLRs
    std::vector<double> v2c;       // variable -> check messages, socket order
    std::vector<double> bit_total; // per info bit: sum of its c2e messages
    std::vector<double> bwd;       // chain backward messages g[j] (check j -> parity j-1)
    std::vector<double> fwd_f;     // chain forward messages f[j] (check j -> parity j)
};

// (Re)binds the state to a code and zeroes all messages; buffers are reused
// when the state is recycled across frames or measurement points.
void init_decoder(DecoderState& state, const CodeInstance& code);

// One activation of the decoding schedule:
//   1. repetition combining and one IRA sweep, in parallel, from the current state
//   2. information-combiner exchange between the two branches
//   3. second repetition/IRA pass producing per-transmitted-bit extrinsics
// channel_llrs are per transmit slot in the symbol domain (as produced by the
// detector); the returned extrinsics use the same convention.  Both are mapped
// through the user interleaver and the repetition sign pattern internally.
const std::vector<double>& decode_activation(DecoderState& state,
                                             const std::vector<double>& channel_llrs);

// sign slicer: negative LLR -> bit 1; ties decode to 0
std::vector<std::uint8_t> hard_bits(const std::vector<double>& llrs);

// sign of the info-bit posterior
std::vector<std::uint8_t> hard_decision(const DecoderState& state);

}  // namespace nomalink
