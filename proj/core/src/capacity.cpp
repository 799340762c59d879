#include "nomalink/capacity.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nomalink/exit_engine.hpp"
#include "nomalink/rng.hpp"

namespace nomalink {

CapacityEstimator::CapacityEstimator(const SystemDims& dims, int n_draws, std::uint64_t seed)
    : dims_(dims), n_draws_(n_draws) {
    validate_dims(dims);
    if (n_draws < 100) throw std::invalid_argument("need at least 100 channel draws");
    eig_.resize(static_cast<std::size_t>(n_draws) * dims.M);
    auto eng = make_engine(seed, Stream::capacity, 0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd H(dims.M, dims.K);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    for (int d = 0; d < n_draws; ++d) {
        for (int j = 0; j < dims.K; ++j)
            for (int i = 0; i < dims.M; ++i) H(i, j) = normal(eng);
        es.compute(H * H.transpose(), Eigen::EigenvaluesOnly);
        for (int i = 0; i < dims.M; ++i)
            eig_[static_cast<std::size_t>(d) * dims.M + i] = std::max(0.0, es.eigenvalues()(i));
    }
}

CapacityEstimate CapacityEstimator::capacity(double sigma_n) const {
    if (!(sigma_n > 0.0)) throw std::invalid_argument("sigma_n must be positive");
    const double inv_sn2 = 1.0 / (sigma_n * sigma_n);
    double sum = 0.0, sum_sq = 0.0;
    for (int d = 0; d < n_draws_; ++d) {
        double c = 0.0;
        const double* lam = &eig_[static_cast<std::size_t>(d) * dims_.M];
        for (int i = 0; i < dims_.M; ++i) c += std::log2(1.0 + lam[i] * inv_sn2);
        c *= 0.5;
        sum += c;
        sum_sq += c * c;
    }
    const double mean = sum / n_draws_;
    const double var = std::max(0.0, sum_sq / n_draws_ - mean * mean);
    return {mean, std::sqrt(var / n_draws_)};
}

CapacityLimitResult capacity_limit(const SystemDims& dims, double rate, double window_lo_db,
                                   double window_hi_db, int n_draws, std::uint64_t seed,
                                   double tol_db) {
    if (!(rate > 0.0 && rate < 1.0)) throw std::invalid_argument("rate must lie in (0, 1)");
    if (!(window_hi_db > window_lo_db)) throw std::invalid_argument("empty search window");
    CapacityEstimator est(dims, n_draws, seed);
    const double target = static_cast<double>(dims.K) * rate;
    auto cap_at = [&](double db) { return est.capacity(sigma_from_ebn0_db(db, rate)); };

    CapacityLimitResult result;
    const CapacityEstimate lo_est = cap_at(window_lo_db);
    const CapacityEstimate hi_est = cap_at(window_hi_db);
    result.bracket_ok = lo_est.bits < target && hi_est.bits > target;
    if (!result.bracket_ok) return result;

    double lo = window_lo_db, hi = window_hi_db;
    while (hi - lo > tol_db) {
        const double mid = 0.5 * (lo + hi);
        (cap_at(mid).bits > target ? hi : lo) = mid;
    }
    result.found = true;
    result.ebn0_db = 0.5 * (lo + hi);
    const CapacityEstimate at = cap_at(result.ebn0_db);
    result.capacity_bits = at.bits;
    result.std_err_bits = at.std_err;
    return result;
}

}  // namespace nomalink
