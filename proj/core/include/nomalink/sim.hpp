#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nomalink/channel.hpp"
#include "nomalink/code.hpp"

namespace nomalink {

struct SimConfig {
    SystemDims dims;
    CodeParams code;
    std::string code_name;  // preset name when loaded from one (metadata echo)
    int info_len = 4096;
    int tau_max = 250;                // global detector/decoder iterations
    std::vector<double> ebn0_grid;    // dB points
    int coherence_len = 1;            // 1 = fast fading, L = block fading
    CsiModel csi;
    long max_frames = 1000;           // per grid point
    long long max_bit_errors = 100;   // early point stop once collected
    std::uint64_t seed = 1;
};

void validate_sim_config(const SimConfig& config);

struct PointResult {
    double ebn0_db = 0.0;
    long long bits = 0;
    long long errors = 0;
    double ber = 0.0;
    double ci_low = 0.0;   // 95% Wilson interval on the bit-error probability
    double ci_high = 0.0;
    long frames = 0;
    double mean_iterations = 0.0;
    long declared_frames = 0;    // frames the syndrome early-stop declared decoded
    long undetected_frames = 0;  // declared frames that still carried info errors
    std::vector<long long> user_errors;  // per-user tallies (symmetry diagnostics)
};

struct BerResult {
    SimConfig config;
    std::vector<PointResult> points;
};

// Frames of K independently interleaved users through the fading channel and
// the iterative LMMSE-detector / message-passing-decoder receiver; aggregates
// info-bit errors per E_b/N_0 point.
BerResult run_ber_simulation(const SimConfig& config);

// 95% Wilson score interval for errors out of bits.
std::pair<double, double> wilson_interval(long long errors, long long bits);

}  // namespace nomalink
