#pragma once

#include <vector>

#include <Eigen/Dense>

namespace nomalink {

// Per-user Gaussian messages exchanged between detector and decoders.
struct GaussianMessageVector {
    Eigen::VectorXd mean;
    Eigen::VectorXd var;
};

inline constexpr double kPriorVarFloor = 1e-10;  // decoder prior variance floor
inline constexpr double kExtrinsicVarCap = 1e6;  // cap when posterior >= prior precision
inline constexpr double kDetectorLlrClip = 50.0;

// Joint Gaussian posterior of X given Y = H X + z for one symbol slot.
// Solves either the K-sided normal-equation form
//   V = (H'H/sn^2 + diag(1/v))^-1,  m = V (xbar/v + H'y/sn^2)
// or the equivalent M-sided form
//   m = xbar + diag(v) H' (sn^2 I + H diag(v) H')^-1 (y - H xbar)
// picking whichever costs fewer flops (M K^2 + K^3 vs K M^2 + M^3).
GaussianMessageVector lmmse_posterior(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                                      const GaussianMessageVector& prior, double sigma_n);

// Force one side, used to cross-check that both forms coincide.
GaussianMessageVector lmmse_posterior_k_side(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                                             const GaussianMessageVector& prior, double sigma_n);
GaussianMessageVector lmmse_posterior_m_side(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                                             const GaussianMessageVector& prior, double sigma_n);

// Gaussian division: removes the prior from the posterior per user,
//   1/ve = 1/vhat - 1/v,  me = ve (mhat/vhat - mbar/v),
// with ve capped at kExtrinsicVarCap when the posterior is not sharper.
GaussianMessageVector extrinsic_extract(const GaussianMessageVector& posterior,
                                        const GaussianMessageVector& prior);

// BPSK LLR of the extrinsic observation: 2 me / ve, clipped.
Eigen::VectorXd llr_from_extrinsic(const GaussianMessageVector& extrinsic);

// Decoder-side soft symbols: mean tanh(L/2), var 1 - mean^2 floored.
GaussianMessageVector prior_from_decoder(const Eigen::VectorXd& llrs);

}  // namespace nomalink
