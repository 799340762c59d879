#pragma once

#include <cstdint>
#include <vector>

#include "nomalink/channel.hpp"

namespace nomalink {

struct CapacityEstimate {
    double bits = 0.0;     // sum capacity per real channel use
    double std_err = 0.0;  // Monte Carlo standard error of the mean
};

// Ergodic sum capacity of the real Gaussian multiple-access channel,
//   C(sigma_n) = (1/2) E_H[log2 det(I_M + sigma_n^-2 H H^T)],
// estimated over a fixed set of channel draws so that capacity() is a smooth
// deterministic function of sigma_n (common random numbers across probes).
class CapacityEstimator {
  public:
    CapacityEstimator(const SystemDims& dims, int n_draws = 100000, std::uint64_t seed = 1);
    CapacityEstimate capacity(double sigma_n) const;
    const SystemDims& dims() const { return dims_; }

  private:
    SystemDims dims_;
    std::vector<double> eig_;  // n_draws x M Gram eigenvalues, flattened
    int n_draws_;
};

struct CapacityLimitResult {
    bool found = false;
    bool bracket_ok = false;  // C < K R at window bottom and C > K R at window top
    double ebn0_db = 0.0;     // E_b/N_0 at which sum capacity equals K R
    double capacity_bits = 0.0;
    double std_err_bits = 0.0;
};

// E_b/N_0 at which the sum capacity supports K users at rate R, bisected to
// tol_db over [window_lo_db, window_hi_db].
CapacityLimitResult capacity_limit(const SystemDims& dims, double rate, double window_lo_db = -20.0,
                                   double window_hi_db = 10.0, int n_draws = 100000,
                                   std::uint64_t seed = 1, double tol_db = 0.01);

}  // namespace nomalink
