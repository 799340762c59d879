#pragma once

#include <cstdint>
#include <vector>

#include "nomalink/code.hpp"

namespace nomalink {

// Codeword in natural (pre-interleave) order: q repetition copies of the info
// word followed by the accumulator parity bits.
std::vector<std::uint8_t> encode(const CodeInstance& code, const std::vector<std::uint8_t>& info);

// BPSK symbols in transmit order: bit b -> (1 - 2b) times the per-position
// modulation sign, placed through the user interleaver (transmit slot t
// carries codeword position user_perm[t]).
std::vector<double> modulate(const CodeInstance& code, const std::vector<std::uint8_t>& codeword);

}  // namespace nomalink
