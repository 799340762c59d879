#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace nomalink {

struct SystemDims {
    int K = 0;  // single-antenna uplink users
    int M = 0;  // receive antennas
    double beta() const { return static_cast<double>(K) / M; }
};

void validate_dims(const SystemDims& dims);

// Real-valued block-fading channel: one i.i.d. N(0,1) M-by-K matrix per
// coherence block, held constant for coherence_len symbols (1 = fast fading).
struct ChannelRealization {
    SystemDims dims;
    double sigma_n = 0.0;             // noise std per real dimension (0 = noiseless test path)
    int coherence_len = 1;
    int n_symbols = 0;
    std::vector<Eigen::MatrixXd> blocks;

    int n_blocks() const { return static_cast<int>(blocks.size()); }
    int block_of(int t) const { return t / coherence_len; }
    const Eigen::MatrixXd& H_at(int t) const { return blocks[block_of(t)]; }
};

ChannelRealization sample_channel(const SystemDims& dims, double sigma_n, int n_symbols,
                                  int coherence_len, std::uint64_t seed);

// Y = H X + Z with Z i.i.d. N(0, sigma_n^2); X is K x T in symbol order.
Eigen::MatrixXd transmit(const ChannelRealization& ch, const Eigen::MatrixXd& X,
                         std::uint64_t noise_seed);

// Receiver-side CSI: H_est = H + E with E i.i.d. N(0, error_variance), drawn
// independently per coherence block.  error_variance = 0 returns exact copies.
struct CsiModel {
    double error_variance = 0.0;
};

std::vector<Eigen::MatrixXd> corrupt_csi(const ChannelRealization& ch, const CsiModel& csi,
                                         std::uint64_t seed);

}  // namespace nomalink
