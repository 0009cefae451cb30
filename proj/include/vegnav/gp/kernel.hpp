#pragma once

#include "vegnav/geom/core.hpp"

namespace vegnav::gp {

using geom::MatX;
using geom::VecX;

// Conditioning floor added to the training self-Gram diagonal before
// factorization. Oracle comparisons must include the same constant.
inline constexpr double kGramJitter = 1e-10;

struct KernelParams {
    double sf2 = 1.0;       // signal variance, output units^2
    double l2 = 1.0;        // squared length scale, m^2
    double sigma_n2 = 0.0;  // noise variance folded into the kernel diagonal

    bool valid() const { return sf2 > 0.0 && l2 > 0.0 && sigma_n2 >= 0.0; }
};

// Squared-exponential kernel sf2 * exp(-|a-b|^2 / (2 l2)); noise excluded.
double kernel_se(const VecX& a, const VecX& b, const KernelParams& params);

// Square self-Gram K'(X,X): kernel plus sigma_n2 on the diagonal (the delta
// term applies only within the same point set). When `noise_var` is non-empty
// it replaces sigma_n2 with per-sample variances. No jitter here.
MatX gram_self(const MatX& X, const KernelParams& params, const VecX& noise_var = VecX());

// Cross-Gram between two distinct sets; never receives the noise term.
MatX gram_cross(const MatX& X, const MatX& X2, const KernelParams& params);

}  // namespace vegnav::gp
