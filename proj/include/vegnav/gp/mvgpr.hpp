#pragma once

#include <limits>
#include <vector>

#include <Eigen/Cholesky>

#include "vegnav/gp/kernel.hpp"

namespace vegnav::gp {

// Output-covariance parameterization Omega = Phi * Phi^T with Phi lower
// triangular and exponential diagonal, so Omega is positive definite for any
// real parameters. Only the trivariate mode uses these; univariate regression
// fixes Omega = I and ignores them.
struct OutputCovParams {
    double psi11 = 0.0, psi22 = 0.0, psi33 = 0.0;  // log-diagonal of Phi
    double phi21 = 0.0, phi31 = 0.0, phi32 = 0.0;  // strict lower triangle

    Eigen::Matrix3d phi_matrix() const;
    Eigen::Matrix3d omega() const;  // Phi * Phi^T
};

struct TrainingSet {
    MatX inputs;     // n x p, p = 2 (horizontal position)
    MatX outputs;    // n x d, d in {1, 3}
    VecX noise_var;  // empty: homoscedastic sigma_n2; else per-sample variance

    Eigen::Index n() const { return inputs.rows(); }
    Eigen::Index d() const { return outputs.cols(); }
    bool heteroscedastic() const { return noise_var.size() != 0; }
    void validate() const;
};

struct Prediction {
    MatX mean;            // m x d
    MatX sigma_hat;       // m x m input-side predictive covariance
    MatX omega_hat;       // d x d output covariance (equals Omega)
    MatX per_output_var;  // m x d, sigma_hat(i,i) * omega_hat(j,j), clamped >= 0
};

// Fixed layout of the hyperparameter gradient vector.
enum GradIndex {
    kGradLogSf2 = 0,
    kGradLogL2 = 1,
    kGradLogSigmaN2 = 2,
    kGradPsi11 = 3,
    kGradPsi22 = 4,
    kGradPsi33 = 5,
    kGradPhi21 = 6,
    kGradPhi31 = 7,
    kGradPhi32 = 8,
    kGradCount = 9
};

// Predictive distribution at Xstar. Solves use a Cholesky factorization of
// the jittered training self-Gram; throws IllConditionedError on failure.
// In homoscedastic mode the test self-Gram diagonal carries sigma_n2 (the
// noise lives inside the kernel); in heteroscedastic mode test points are
// noise-free since per-sample variances exist only for training data.
Prediction predict(const TrainingSet& train, const KernelParams& kp, const OutputCovParams& oc,
                   const MatX& Xstar);

// Negative log marginal likelihood:
//   (nd/2) ln 2pi + (d/2) ln det K' + (n/2) ln det Omega
//   + 1/2 tr(K'^-1 Y Omega^-1 Y^T)
double nlml(const TrainingSet& train, const KernelParams& kp, const OutputCovParams& oc);

// Analytic gradient of nlml in the GradIndex layout. Scalar kernel parameters
// are differentiated in log space. Entries for parameters the model ignores
// (Omega entries when d = 1, sigma_n2 when heteroscedastic) are exactly zero.
VecX nlml_grad(const TrainingSet& train, const KernelParams& kp, const OutputCovParams& oc);

struct FitOptions {
    int budget = 100;           // gradient-descent iterations
    bool fit_sigma_n = true;    // false: keep the noise variance at its init
    double grad_tol = 1e-6;     // stop when the free-gradient norm drops below
    int max_restarts = 3;       // jittered re-inits after IllConditioned
    // Upper bound on the squared length scale. Linear output trends make the
    // unbounded SE likelihood degenerate (l and sf2 drift to infinity
    // together); bounding l by the data span keeps the fit predictive.
    double max_l2 = std::numeric_limits<double>::infinity();
};

struct FitResult {
    KernelParams kernel;
    OutputCovParams output_cov;
    double final_nlml = 0.0;
    int iterations = 0;
    std::vector<double> nlml_trace;  // accepted objective values, non-increasing
};

// Maximum-likelihood hyperparameter fit: gradient descent with backtracking
// line search on {log sf2, log l2 [, log sigma_n2], psi22, psi33, phi21,
// phi31, phi32}. psi11 is pinned to 0 to remove the K/Omega scale ambiguity.
// Deterministic given the init.
FitResult fit_hyperparams(const TrainingSet& train, const KernelParams& init_kp,
                          const OutputCovParams& init_oc, const FitOptions& opts = {});

// Training set plus fitted hyperparameters with a cached Gram factorization.
// Outputs are centered per channel before regression and the channel means
// are re-added to predictive means, so far-field predictions recover the
// training-set mean rather than zero.
class MvgprModel {
public:
    MvgprModel(TrainingSet train, KernelParams kp, OutputCovParams oc);

    static MvgprModel fit(TrainingSet train, const KernelParams& init_kp,
                          const OutputCovParams& init_oc, const FitOptions& opts = {});

    // Re-runs the optimizer from the current hyperparameters.
    void refit(const FitOptions& opts);

    Prediction predict_at(const MatX& Xstar) const;

    // Convenience for a single query: row of means plus per-output variances.
    void predict_point(const geom::Vec2& q, VecX& mean, VecX& var) const;

    const KernelParams& kernel() const { return kp_; }
    const OutputCovParams& output_cov() const { return oc_; }
    const TrainingSet& train() const { return train_; }
    double nlml_value() const;

private:
    void factorize();

    TrainingSet train_;         // centered outputs
    Eigen::RowVectorXd means_;  // channel means removed from outputs
    KernelParams kp_;
    OutputCovParams oc_;
    Eigen::LLT<MatX> llt_;
};

}  // namespace vegnav::gp
