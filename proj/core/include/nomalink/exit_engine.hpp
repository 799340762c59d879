#pragma once

#include <cstdint>
#include <vector>

#include "nomalink/channel.hpp"
#include "nomalink/code.hpp"

namespace nomalink {

// ---- detector-side variance transfer (random-matrix limit) ----------------

// Extrinsic variance of the LMMSE detector given a common prior variance v,
// i.i.d. N(0,1) channel entries:
//   ve = (s + c v + sqrt((s + c v)^2 + 4 s v)) / 2,   s = sigma_n^2 / M,
//   c = (K - M) / M.
// Algebraically identical to 1/(1/vhat - 1/v) with vhat from
// lmmse_posterior_variance; anchored empirically by the detector tests.
double lmmse_variance_transfer(double v, const SystemDims& dims, double sigma_n);

// Finite-K refinement of the same fixed point: the symbol under detection sees
// K - 1 interferers rather than K.  Exact at K = 1 (ve = sigma_n^2 / M, the
// matched-filter bound), indistinguishable from the plain form as K grows;
// the joint recursion and threshold search use it by default because the
// interferer count is what the detector actually inverts around.
double lmmse_variance_transfer_finite_k(double v, const SystemDims& dims, double sigma_n);

// Posterior variance via the spectral F-function:
//   vhat = v (1 - F(K/M, sigma_n^2/(K v)) / 4),
//   F(a,b) = (sqrt((1+1/sqrt(a))^2 + b) - sqrt((1-1/sqrt(a))^2 + b))^2.
double lmmse_posterior_variance(double v, const SystemDims& dims, double sigma_n);

// Large-dimension limits per loading branch:
//   beta < 1:  sigma_n^2 / (M - K)
//   beta > 1:  v (K - M) / M
//   beta = 1:  v / (sqrt(v K / sigma_n^2) - 1), valid for v > sigma_n^2 / K
// (throws std::domain_error outside the beta = 1 validity region).
double lmmse_variance_transfer_asymptotic(double v, const SystemDims& dims, double sigma_n);

// ---- variance <-> mutual information conversions ---------------------------

// I = J(sqrt(4 / ve)): the prior MI a consistent Gaussian LLR with variance
// 2*(2/ve) carries about the BPSK bit.
double variance_to_mutual_info(double v_e);

struct McEstimate {
    double value = 0.0;
    double std_err = 0.0;
};

// Soft-symbol variance fed back by a decoder whose extrinsic LLRs are modeled
// as consistent Gaussians at mutual information I:
//   v = E[1 - tanh^2(L/2)],  L ~ N(m, 2m),  m = j_inverse(I)^2 / 2,
// estimated by seeded Monte Carlo.
McEstimate mutual_info_to_variance(double mutual_info, int samples = 100000,
                                   std::uint64_t seed = 1);

// Precomputed monotone lookup of mutual_info_to_variance over an I grid with
// clustering toward I = 1; shared by recursions, thresholds and the optimizer.
class VarianceTable {
  public:
    explicit VarianceTable(int grid_points = 257, int samples = 200000, std::uint64_t seed = 1);
    double variance_at(double mutual_info) const;  // clamped linear interpolation

  private:
    std::vector<double> grid_, v_;
};

// ---- decoder transfer curve ------------------------------------------------

struct CurveConfig {
    int info_len = 30000;
    int frames = 1;
    int max_activations = 300;  // steady-state cap per grid point
    double tol = 1e-4;          // stop once successive window-averaged I_e settle
    std::uint64_t seed = 1;
};

struct ExitCurve {
    std::vector<double> ia, ie;  // sampled steady-state transfer, isotonic in ia
    CurveConfig config;
    int isotonic_violations = 0;  // grid points adjusted by the monotone cleanup

    double interpolate(double ia_query) const;
};

// Steady-state response of the message-passing decoder to consistent Gaussian
// priors N(m_a, 2m_a) on every transmitted bit of an all-zero codeword: the
// activation schedule repeats on a fixed prior realization until the output
// mutual information stabilizes; results are averaged over `frames`
// independent interleaver/prior draws.
ExitCurve decoder_exit_curve(const CodeParams& params, const std::vector<double>& grid,
                             const CurveConfig& config);

struct AnalyticCurveConfig {
    int max_iters = 20000;  // inner fixed-point cap per grid point
    double tol = 1e-13;     // mean-domain convergence tolerance
};

// Infinite-length transfer of the same decoder: density evolution under the
// consistent-Gaussian message model.  Variable-side messages add in the LLR
// mean domain; combiner/accumulator checks use the dual-J approximation
// I_out = 1 - J(sqrt(sum (Jinv(1 - I_in))^2)).  Per prior point the
// repetition/IRA fixed point is iterated to convergence, then the emitted
// extrinsic MI is averaged over the transmitted-bit classes (q repetition
// copies per info bit, accumulator parity bits) in their codeword
// proportions.  Free of interleaver, cycle and finite-length effects, so it
// upper-bounds the measured curve and defines the design-point thresholds.
ExitCurve analytic_decoder_exit_curve(const CodeParams& params, const std::vector<double>& grid,
                                      const AnalyticCurveConfig& config = {});

// ---- joint detector/decoder recursion --------------------------------------

struct ExitState {
    int iteration = 0;
    double v = 0.0;    // decoder-side prior variance entering this iteration
    double v_e = 0.0;  // detector extrinsic variance
    double I_a = 0.0;  // prior MI handed to the decoder
    double I_e = 0.0;  // decoder steady-state output MI
    double m_a = 0.0;  // 2 / v_e
    double m_e = 0.0;  // j_inverse(I_e)^2 / 2
};

struct ExitTrajectory {
    std::vector<ExitState> states;
    bool converged = false;
    bool stalled = false;   // progress below stall_tol for stall_window iterations
    double min_gap = 0.0;   // tunnel_min_gap of the curve at this operating point
};

struct RecursionConfig {
    int max_iters = 200;
    double eps_conv = 1e-4;
    double stall_tol = 1e-6;
    int stall_window = 5;
    bool finite_k = true;  // K-1 interferer detector transfer (false: plain form)
};

// Variance recursion of the iterative receiver: detector transfer, variance ->
// MI, decoder curve lookup, MI -> variance, repeated from v = 1.  Convergence
// is declared when the detector extrinsic variance vanishes, the decoder
// output MI saturates at 1, or the fed-back variance vanishes (the three ways
// the iteration can finish, within eps_conv).
ExitTrajectory run_exit_recursion(const SystemDims& dims, double sigma_n, const ExitCurve& curve,
                                  const VarianceTable& vtable, const RecursionConfig& rc = {});

// Vertical decoder-above-detector margin in the (I_a, I_e) plane, minimized
// over the detector's reachable range; > 0 means the tunnel is open.
double tunnel_min_gap(const ExitCurve& curve, const SystemDims& dims, double sigma_n,
                      const VarianceTable& vtable, bool finite_k = true);

// ---- threshold search ------------------------------------------------------

// E_b/N_0 = 1 / (2 R sigma_n^2) at unit symbol power.
double sigma_from_ebn0_db(double ebn0_db, double rate);
double ebn0_db_from_sigma(double sigma_n, double rate);

struct ThresholdConfig {
    double tol_db = 0.01;
    bool analytic = true;  // density-evolution curve (default) vs Monte-Carlo measurement
    AnalyticCurveConfig analytic_curve;
    CurveConfig curve;  // Monte-Carlo fidelity when analytic = false
    RecursionConfig recursion;
};

struct ThresholdResult {
    bool found = false;
    bool bracket_ok = false;  // recursion converges at window top and fails at window bottom
    double ebn0_db = 0.0;
    ExitCurve curve;  // decoder curve reused across all probes of the search
};

// Bisects the convergence boundary of the EXIT recursion over an E_b/N_0
// window.  One decoder curve is measured on a grid covering the I_a band the
// window can visit and reused for every probe.
ThresholdResult find_threshold(const CodeParams& params, const SystemDims& dims,
                               double window_lo_db, double window_hi_db,
                               const VarianceTable& vtable, const ThresholdConfig& tc = {});

}  // namespace nomalink
