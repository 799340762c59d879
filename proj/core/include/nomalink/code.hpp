#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nomalink/degree_dist.hpp"

namespace nomalink {

// Multi-user IRA code: a rate-1/q repetition branch in parallel with a
// nonsystematic IRA branch (irregular repetition -> edge interleaver ->
// degree-alpha combiner -> accumulator), followed by a per-user interleaver
// over the whole codeword.  The repetition branch is modulated with an
// alternating +/- sign pattern; parity bits carry no sign flip.
struct CodeParams {
    int q = 1;                      // repetition factor of the repetition branch
    int alpha = 1;                  // combiner fan-in
    DegreeDistribution lambda;      // edge-perspective degree profile of the IRA branch
    std::vector<int> rep_pattern;   // q modulation signs, alternating +1,-1,...
    double rate = 0.0;              // derived: alpha*S / (alpha*q*S + 1), S = sum lambda_i/i
};

// rate formula shared by params construction and the optimizer
double code_rate(int q, int alpha, const DegreeDistribution& lambda);

// validates q in [1, q_max], alpha >= 1, fills rep_pattern and rate
CodeParams make_code_params(int q, int alpha, DegreeDistribution lambda, int q_max = 5);

// One user's realized code at a given info length: quantized per-bit degrees,
// edge interleaver and codeword interleaver.  Kept as an open aggregate so
// degenerate graphs (e.g. cycle-free toys with degree-1 info nodes) can be
// assembled directly in tests via finalize_code_instance().
struct CodeInstance {
    CodeParams params;
    int info_len = 0;

    std::vector<int> bit_degree;    // IRA repetition degree per info bit (size info_len)
    std::vector<int> edge_perm;     // socket s -> combiner slot; slot/alpha = check index
    std::vector<int> user_perm;     // transmit slot t -> codeword position

    // derived by finalize_code_instance()
    int n_edges = 0;                // total sockets == sum bit_degree
    int parity_len = 0;             // n_edges / alpha
    int rep_len = 0;                // q * info_len
    int codeword_len = 0;           // rep_len + parity_len
    std::vector<int> socket_owner;  // socket -> info bit
    std::vector<int> socket_of_slot;  // combiner slot -> socket (inverse of edge_perm)
    std::vector<std::int8_t> mod_sign;  // codeword position -> modulation sign
};

// Quantizes lambda to per-bit degree counts (largest-remainder rounding, then a
// minimal repair so alpha divides the edge count), draws the two interleavers
// from `seed`, and finalizes.  Throws if some lambda term quantizes to zero
// bits at this info_len.
CodeInstance build_code(const CodeParams& params, int info_len, std::uint64_t seed);

// fills the derived members and validates consistency of a hand-built instance
void finalize_code_instance(CodeInstance& code);

// |info_len / codeword_len| for a realized instance
double instance_rate(const CodeInstance& code);

// Built-in design presets.
struct CodePreset {
    std::string name;
    CodeParams params;
    int design_K = 0;        // user count the profile was designed for (0 = point-to-point)
    int design_M = 0;        // antenna count
    double design_sigma_n = 0.0;  // design noise std (0 = not tied to a MIMO design point)
};

const std::vector<CodePreset>& code_presets();
const CodePreset& find_preset(const std::string& name);  // throws std::out_of_range
bool has_preset(const std::string& name);

}  // namespace nomalink
