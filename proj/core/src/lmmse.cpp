#include "nomalink/lmmse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nomalink {

namespace {

void check_inputs(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                  const GaussianMessageVector& prior, double sigma_n) {
    if (!(sigma_n > 0.0)) throw std::invalid_argument("lmmse: sigma_n must be > 0");
    if (H.rows() != y.size()) throw std::invalid_argument("lmmse: H rows != y size");
    if (H.cols() != prior.mean.size() || H.cols() != prior.var.size())
        throw std::invalid_argument("lmmse: prior size != K");
    for (int k = 0; k < prior.var.size(); ++k)
        if (!(prior.var(k) > 0.0)) throw std::invalid_argument("lmmse: prior variances must be > 0");
}

}  // namespace

GaussianMessageVector lmmse_posterior_k_side(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                                             const GaussianMessageVector& prior, double sigma_n) {
    check_inputs(H, y, prior, sigma_n);
    const int K = static_cast<int>(H.cols());
    const double inv_n = 1.0 / (sigma_n * sigma_n);

    Eigen::MatrixXd A = inv_n * (H.transpose() * H);
    for (int k = 0; k < K; ++k) A(k, k) += 1.0 / prior.var(k);
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw std::runtime_error("lmmse: precision matrix not SPD");

    const Eigen::VectorXd b =
        prior.mean.cwiseQuotient(prior.var) + inv_n * (H.transpose() * y);
    const Eigen::MatrixXd V = llt.solve(Eigen::MatrixXd::Identity(K, K));

    GaussianMessageVector post;
    post.mean = V * b;
    post.var = V.diagonal();
    return post;
}

GaussianMessageVector lmmse_posterior_m_side(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                                             const GaussianMessageVector& prior, double sigma_n) {
    check_inputs(H, y, prior, sigma_n);
    const int K = static_cast<int>(H.cols());
    const int M = static_cast<int>(H.rows());

    Eigen::MatrixXd B = (sigma_n * sigma_n) * Eigen::MatrixXd::Identity(M, M);
    B.noalias() += H * prior.var.asDiagonal() * H.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() != Eigen::Success) throw std::runtime_error("lmmse: covariance matrix not SPD");

    const Eigen::VectorXd r = llt.solve(y - H * prior.mean);
    const Eigen::MatrixXd W = llt.solve(H);  // B^-1 H, M x K

    GaussianMessageVector post;
    post.mean = prior.mean + prior.var.asDiagonal() * (H.transpose() * r);
    post.var.resize(K);
    for (int k = 0; k < K; ++k) {
        const double q = H.col(k).dot(W.col(k));
        post.var(k) = prior.var(k) - prior.var(k) * prior.var(k) * q;
    }
    return post;
}

GaussianMessageVector lmmse_posterior(const Eigen::MatrixXd& H, const Eigen::VectorXd& y,
                                      const GaussianMessageVector& prior, double sigma_n) {
    const double K = static_cast<double>(H.cols());
    const double M = static_cast<double>(H.rows());
    const double cost_k = M * K * K + K * K * K;
    const double cost_m = K * M * M + M * M * M;
    return cost_k <= cost_m ? lmmse_posterior_k_side(H, y, prior, sigma_n)
                            : lmmse_posterior_m_side(H, y, prior, sigma_n);
}

GaussianMessageVector extrinsic_extract(const GaussianMessageVector& posterior,
                                        const GaussianMessageVector& prior) {
    const int K = static_cast<int>(posterior.mean.size());
    if (prior.mean.size() != K || prior.var.size() != K || posterior.var.size() != K)
        throw std::invalid_argument("extrinsic: size mismatch");
    GaussianMessageVector ext;
    ext.mean.resize(K);
    ext.var.resize(K);
    for (int k = 0; k < K; ++k) {
        const double inv_diff = 1.0 / posterior.var(k) - 1.0 / prior.var(k);
        double ve = inv_diff > 1.0 / kExtrinsicVarCap ? 1.0 / inv_diff : kExtrinsicVarCap;
        ext.var(k) = ve;
        ext.mean(k) = ve * (posterior.mean(k) / posterior.var(k) - prior.mean(k) / prior.var(k));
    }
    return ext;
}

Eigen::VectorXd llr_from_extrinsic(const GaussianMessageVector& extrinsic) {
    Eigen::VectorXd llr(extrinsic.mean.size());
    for (int k = 0; k < llr.size(); ++k)
        llr(k) = std::clamp(2.0 * extrinsic.mean(k) / extrinsic.var(k), -kDetectorLlrClip,
                            kDetectorLlrClip);
    return llr;
}

GaussianMessageVector prior_from_decoder(const Eigen::VectorXd& llrs) {
    GaussianMessageVector prior;
    prior.mean.resize(llrs.size());
    prior.var.resize(llrs.size());
    for (int k = 0; k < llrs.size(); ++k) {
        const double m = std::tanh(0.5 * llrs(k));
        prior.mean(k) = m;
        prior.var(k) = std::max(1.0 - m * m, kPriorVarFloor);
    }
    return prior;
}

}  // namespace nomalink
