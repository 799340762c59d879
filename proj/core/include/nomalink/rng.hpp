#pragma once

#include <cstdint>
#include <random>

namespace nomalink {

// All randomness in the library flows from one master seed.  Sub-streams are
// derived with splitmix64 so that channel draws, noise, data bits, interleaver
// construction etc. stay decoupled: changing how many values one consumer
// draws never shifts another consumer's stream.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Fixed stream ids; part of the reproducibility contract (a CSV produced with
// seed s must be byte-identical across runs).
enum class Stream : std::uint64_t {
    channel = 1,
    noise = 2,
    csi = 3,
    data = 4,
    interleaver = 5,
    exit_prior = 6,
    llr_variance = 7,
    capacity = 8,
    optimizer = 9,
    curve = 10,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
    std::uint64_t h = splitmix64(master ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL));
    return splitmix64(h ^ (index * 0x8cb92ba72f3d8dd7ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::mt19937_64 make_engine(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
    return std::mt19937_64(derive_seed(master, stream, index));
}

}  // namespace nomalink
