#include "nomalink/jfunction.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace nomalink {

namespace {

struct GaussHermite {
    std::vector<double> node;    // abscissas for weight exp(-t^2)
    std::vector<double> weight;  // weights normalized so they sum to 1 (probabilists' use)
};

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the Hermite
// recurrence, weights come from the first eigenvector components.
GaussHermite make_gauss_hermite(int n) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double off = std::sqrt(i / 2.0);
        T(i, i - 1) = off;
        T(i - 1, i) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    if (es.info() != Eigen::Success) throw std::runtime_error("gauss-hermite: eigensolve failed");
    GaussHermite gh;
    gh.node.resize(n);
    gh.weight.resize(n);
    for (int i = 0; i < n; ++i) {
        gh.node[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        gh.weight[i] = v0 * v0;  // normalized: total mass 1 instead of sqrt(pi)
    }
    return gh;
}

const GaussHermite& gh301() {
    static const GaussHermite gh = make_gauss_hermite(301);
    return gh;
}

constexpr double kInvLn2 = 1.4426950408889634;

// log2(1 + exp(u)) without overflow
inline double softplus2(double u) {
    if (u > 0.0) return (u + std::log1p(std::exp(-u))) * kInvLn2;
    return std::log1p(std::exp(u)) * kInvLn2;
}

}  // namespace

double j_function(double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("j_function: sigma must be >= 0");
    if (sigma == 0.0) return 0.0;
    const auto& gh = gh301();
    const double half_var = 0.5 * sigma * sigma;
    // L = sigma^2/2 + sigma * u with u ~ N(0,1); u = sqrt(2) t under exp(-t^2)
    double loss = 0.0;
    for (std::size_t i = 0; i < gh.node.size(); ++i) {
        const double L = half_var + sigma * std::sqrt(2.0) * gh.node[i];
        loss += gh.weight[i] * softplus2(-L);
    }
    const double I = 1.0 - loss;
    return I < 0.0 ? 0.0 : (I > 1.0 ? 1.0 : I);
}

double j_inverse(double mutual_info) {
    if (mutual_info < 0.0 || mutual_info >= 1.0)
        throw std::invalid_argument("j_inverse: mutual information must be in [0, 1)");
    if (mutual_info == 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (j_function(hi) < mutual_info) {
        hi *= 2.0;
        if (hi > 64.0) break;  // J(64) is 1 to double precision
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double val = j_function(mid);
        if (std::fabs(val - mutual_info) <= 1e-9 && it > 10) return mid;
        (val < mutual_info ? lo : hi) = mid;
        if (hi - lo < 1e-13) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace nomalink
