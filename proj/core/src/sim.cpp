#include "nomalink/sim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "nomalink/decoder.hpp"
#include "nomalink/encoder.hpp"
#include "nomalink/exit_engine.hpp"
#include "nomalink/lmmse.hpp"
#include "nomalink/rng.hpp"

namespace nomalink {

namespace {

std::uint64_t frame_tag(std::size_t point, long frame) {
    return (static_cast<std::uint64_t>(point) << 40) | static_cast<std::uint64_t>(frame);
}

}  // namespace

void validate_sim_config(const SimConfig& config) {
    validate_dims(config.dims);
    if (config.info_len < 8) throw std::invalid_argument("info_len too small");
    if (config.tau_max < 1) throw std::invalid_argument("tau_max must be >= 1");
    if (config.ebn0_grid.empty()) throw std::invalid_argument("ebn0_grid must be non-empty");
    if (config.coherence_len < 1) throw std::invalid_argument("coherence_len must be >= 1");
    if (config.csi.error_variance < 0.0) throw std::invalid_argument("csi error variance < 0");
    if (config.max_frames < 1) throw std::invalid_argument("max_frames must be >= 1");
    if (config.max_bit_errors < 1) throw std::invalid_argument("max_bit_errors must be >= 1");
}

std::pair<double, double> wilson_interval(long long errors, long long bits) {
    if (bits <= 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(bits);
    const double p = static_cast<double>(errors) / n;
    const double z2n = z * z / n;
    const double denom = 1.0 + z2n;
    const double center = (p + 0.5 * z2n) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

BerResult run_ber_simulation(const SimConfig& config) {
    validate_sim_config(config);
    const int K = config.dims.K;

    std::vector<CodeInstance> codes;
    codes.reserve(K);
    for (int k = 0; k < K; ++k)
        codes.push_back(
            build_code(config.code, config.info_len, derive_seed(config.seed, Stream::interleaver, k)));
    const int n = codes[0].codeword_len;

    BerResult result;
    result.config = config;
    result.points.reserve(config.ebn0_grid.size());

    std::vector<DecoderState> dec(K);
    std::vector<std::vector<std::uint8_t>> info(K), cw(K);
    Eigen::MatrixXd X(K, n), prior_mean(K, n), prior_var(K, n), det_llr(K, n);
    std::vector<double> chan(n);
    GaussianMessageVector prior;
    prior.mean.resize(K);
    prior.var.resize(K);

    for (std::size_t p = 0; p < config.ebn0_grid.size(); ++p) {
        const double ebn0_db = config.ebn0_grid[p];
        const double sigma_n = sigma_from_ebn0_db(ebn0_db, config.code.rate);

        PointResult pt;
        pt.ebn0_db = ebn0_db;
        pt.user_errors.assign(K, 0);
        long long iter_sum = 0;

        for (long f = 0; f < config.max_frames && pt.errors < config.max_bit_errors; ++f) {
            const std::uint64_t tag = frame_tag(p, f);
            auto data_eng = make_engine(config.seed, Stream::data, tag);
            std::bernoulli_distribution coin(0.5);
            for (int k = 0; k < K; ++k) {
                info[k].resize(config.info_len);
                for (auto& b : info[k]) b = coin(data_eng) ? 1 : 0;
                cw[k] = encode(codes[k], info[k]);
                const std::vector<double> x = modulate(codes[k], cw[k]);
                for (int t = 0; t < n; ++t) X(k, t) = x[t];
            }

            const ChannelRealization ch = sample_channel(
                config.dims, sigma_n, n, config.coherence_len, derive_seed(config.seed, Stream::channel, tag));
            const Eigen::MatrixXd Y = transmit(ch, X, derive_seed(config.seed, Stream::noise, tag));
            const std::vector<Eigen::MatrixXd> H_rx =
                corrupt_csi(ch, config.csi, derive_seed(config.seed, Stream::csi, tag));

            for (int k = 0; k < K; ++k) init_decoder(dec[k], codes[k]);
            prior_mean.setZero();
            prior_var.setOnes();

            int iters_used = config.tau_max;
            bool declared = false;
            for (int tau = 0; tau < config.tau_max; ++tau) {
                for (int t = 0; t < n; ++t) {
                    prior.mean = prior_mean.col(t);
                    prior.var = prior_var.col(t);
                    const GaussianMessageVector post =
                        lmmse_posterior(H_rx[ch.block_of(t)], Y.col(t), prior, sigma_n);
                    const GaussianMessageVector ext = extrinsic_extract(post, prior);
                    det_llr.col(t) = llr_from_extrinsic(ext);
                }
                if (!det_llr.allFinite())
                    throw std::runtime_error("non-finite detector LLRs; frame aborted");

                for (int k = 0; k < K; ++k) {
                    for (int t = 0; t < n; ++t) chan[t] = det_llr(k, t);
                    decode_activation(dec[k], chan);
                    const GaussianMessageVector fb =
                        prior_from_decoder(Eigen::Map<const Eigen::VectorXd>(dec[k].ext_tx.data(), n));
                    prior_mean.row(k) = fb.mean;
                    prior_var.row(k) = fb.var;
                }

                bool all_consistent = true;
                for (int k = 0; k < K && all_consistent; ++k) {
                    const std::vector<std::uint8_t> hard_info = hard_bits(dec[k].app_info);
                    const std::vector<std::uint8_t> hard_cw = hard_bits(dec[k].app_cw);
                    if (encode(codes[k], hard_info) != hard_cw) all_consistent = false;
                }
                if (all_consistent) {
                    iters_used = tau + 1;
                    declared = true;
                    break;
                }
            }

            long long frame_err = 0;
            for (int k = 0; k < K; ++k) {
                const std::vector<std::uint8_t> hard_info = hard_bits(dec[k].app_info);
                long long user_err = 0;
                for (int i = 0; i < config.info_len; ++i) user_err += hard_info[i] != info[k][i];
                pt.user_errors[k] += user_err;
                frame_err += user_err;
            }
            pt.errors += frame_err;
            pt.bits += static_cast<long long>(K) * config.info_len;
            pt.frames += 1;
            iter_sum += iters_used;
            if (declared) {
                pt.declared_frames += 1;
                if (frame_err > 0) pt.undetected_frames += 1;
            }
        }

        pt.ber = pt.bits > 0 ? static_cast<double>(pt.errors) / pt.bits : 0.0;
        const auto ci = wilson_interval(pt.errors, pt.bits);
        pt.ci_low = ci.first;
        pt.ci_high = ci.second;
        pt.mean_iterations = pt.frames > 0 ? static_cast<double>(iter_sum) / pt.frames : 0.0;
        result.points.push_back(std::move(pt));
    }
    return result;
}

}  // namespace nomalink
