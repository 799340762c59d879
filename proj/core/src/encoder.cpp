#include "nomalink/encoder.hpp"

#include <stdexcept>

namespace nomalink {

std::vector<std::uint8_t> encode(const CodeInstance& code, const std::vector<std::uint8_t>& info) {
    if (static_cast<int>(info.size()) != code.info_len)
        throw std::invalid_argument("encode: info length mismatch");
    for (auto b : info)
        if (b > 1) throw std::invalid_argument("encode: info bits must be 0/1");

    std::vector<std::uint8_t> cw(code.codeword_len, 0);

    // repetition branch: q concatenated copies
    for (int c = 0; c < code.params.q; ++c)
        for (int i = 0; i < code.info_len; ++i) cw[c * code.info_len + i] = info[i];

    // IRA branch: socket copies -> edge interleaver -> alpha-way XOR -> accumulator
    std::uint8_t acc = 0;
    for (int j = 0; j < code.parity_len; ++j) {
        std::uint8_t cj = 0;
        for (int a = 0; a < code.params.alpha; ++a) {
            const int socket = code.socket_of_slot[j * code.params.alpha + a];
            cj ^= info[code.socket_owner[socket]];
        }
        acc ^= cj;
        cw[code.rep_len + j] = acc;
    }
    return cw;
}

std::vector<double> modulate(const CodeInstance& code, const std::vector<std::uint8_t>& codeword) {
    if (static_cast<int>(codeword.size()) != code.codeword_len)
        throw std::invalid_argument("modulate: codeword length mismatch");
    std::vector<double> x(code.codeword_len);
    for (int t = 0; t < code.codeword_len; ++t) {
        const int pos = code.user_perm[t];
        x[t] = static_cast<double>(code.mod_sign[pos]) * (1.0 - 2.0 * codeword[pos]);
    }
    return x;
}

}  // namespace nomalink
