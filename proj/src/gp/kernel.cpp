#include "vegnav/gp/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace vegnav::gp {

double kernel_se(const VecX& a, const VecX& b, const KernelParams& params) {
    if (!params.valid()) throw std::invalid_argument("kernel_se: invalid params");
    const double d2 = (a - b).squaredNorm();
    return params.sf2 * std::exp(-d2 / (2.0 * params.l2));
}

MatX gram_self(const MatX& X, const KernelParams& params, const VecX& noise_var) {
    if (!params.valid()) throw std::invalid_argument("gram_self: invalid params");
    if (noise_var.size() != 0 && noise_var.size() != X.rows())
        throw std::invalid_argument("gram_self: noise_var size mismatch");
    const Eigen::Index n = X.rows();
    MatX K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = params.sf2;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = (X.row(i) - X.row(j)).squaredNorm();
            const double v = params.sf2 * std::exp(-d2 / (2.0 * params.l2));
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    if (noise_var.size() != 0)
        K.diagonal() += noise_var;
    else
        K.diagonal().array() += params.sigma_n2;
    return K;
}

MatX gram_cross(const MatX& X, const MatX& X2, const KernelParams& params) {
    if (!params.valid()) throw std::invalid_argument("gram_cross: invalid params");
    MatX K(X.rows(), X2.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X2.rows(); ++j) {
            const double d2 = (X.row(i) - X2.row(j)).squaredNorm();
            K(i, j) = params.sf2 * std::exp(-d2 / (2.0 * params.l2));
        }
    return K;
}

}  // namespace vegnav::gp
