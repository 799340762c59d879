#include "nomalink/channel.hpp"

#include <stdexcept>

#include "nomalink/rng.hpp"

namespace nomalink {

void validate_dims(const SystemDims& dims) {
    if (dims.K < 1 || dims.M < 1)
        throw std::invalid_argument("system dims: K and M must be positive");
}

ChannelRealization sample_channel(const SystemDims& dims, double sigma_n, int n_symbols,
                                  int coherence_len, std::uint64_t seed) {
    validate_dims(dims);
    if (sigma_n < 0.0) throw std::invalid_argument("channel: sigma_n must be >= 0");
    if (n_symbols < 1) throw std::invalid_argument("channel: n_symbols must be >= 1");
    if (coherence_len < 1) throw std::invalid_argument("channel: coherence_len must be >= 1");

    ChannelRealization ch;
    ch.dims = dims;
    ch.sigma_n = sigma_n;
    ch.coherence_len = coherence_len;
    ch.n_symbols = n_symbols;

    const int n_blocks = (n_symbols + coherence_len - 1) / coherence_len;
    auto rng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ch.blocks.reserve(n_blocks);
    for (int b = 0; b < n_blocks; ++b) {
        Eigen::MatrixXd H(dims.M, dims.K);
        for (int m = 0; m < dims.M; ++m)
            for (int k = 0; k < dims.K; ++k) H(m, k) = gauss(rng);
        ch.blocks.push_back(std::move(H));
    }
    return ch;
}

Eigen::MatrixXd transmit(const ChannelRealization& ch, const Eigen::MatrixXd& X,
                         std::uint64_t noise_seed) {
    if (X.rows() != ch.dims.K || X.cols() != ch.n_symbols)
        throw std::invalid_argument("transmit: X must be K x n_symbols");
    Eigen::MatrixXd Y(ch.dims.M, ch.n_symbols);
    for (int t = 0; t < ch.n_symbols; ++t) Y.col(t) = ch.H_at(t) * X.col(t);
    if (ch.sigma_n > 0.0) {
        auto rng = make_engine(noise_seed);
        std::normal_distribution<double> gauss(0.0, ch.sigma_n);
        for (int t = 0; t < ch.n_symbols; ++t)
            for (int m = 0; m < ch.dims.M; ++m) Y(m, t) += gauss(rng);
    }
    return Y;
}

std::vector<Eigen::MatrixXd> corrupt_csi(const ChannelRealization& ch, const CsiModel& csi,
                                         std::uint64_t seed) {
    if (csi.error_variance < 0.0) throw std::invalid_argument("csi: error_variance must be >= 0");
    std::vector<Eigen::MatrixXd> est = ch.blocks;
    if (csi.error_variance > 0.0) {
        auto rng = make_engine(seed);
        std::normal_distribution<double> gauss(0.0, std::sqrt(csi.error_variance));
        for (auto& H : est)
            for (int m = 0; m < H.rows(); ++m)
                for (int k = 0; k < H.cols(); ++k) H(m, k) += gauss(rng);
    }
    return est;
}

}  // namespace nomalink
