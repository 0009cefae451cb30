#include "vegnav/gp/mvgpr.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "vegnav/errors.hpp"

namespace vegnav::gp {

namespace {

constexpr double kLogParamBound = 30.0;

Eigen::LLT<MatX> factorize_train_gram(const TrainingSet& train, const KernelParams& kp) {
    MatX K = gram_self(train.inputs, kp, train.noise_var);
    K.diagonal().array() += kGramJitter;
    Eigen::LLT<MatX> llt(K);
    if (llt.info() != Eigen::Success)
        throw IllConditionedError("mvgpr: training Gram factorization failed");
    return llt;
}

// Omega for the model's output dimension; univariate mode pins it to I.
MatX omega_for(const TrainingSet& train, const OutputCovParams& oc) {
    if (train.d() == 1) return MatX::Identity(1, 1);
    return oc.omega();
}

double log_det_from_llt(const Eigen::LLT<MatX>& llt) {
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Prediction predict_with_llt(const TrainingSet& train, const KernelParams& kp,
                            const OutputCovParams& oc, const Eigen::LLT<MatX>& llt,
                            const MatX& Xstar) {
    const MatX Kc = gram_cross(train.inputs, Xstar, kp);  // n x m
    Prediction out;
    out.mean = Kc.transpose() * llt.solve(train.outputs);

    MatX Ktt = train.heteroscedastic() ? gram_cross(Xstar, Xstar, kp)
                                       : gram_self(Xstar, kp);
    out.sigma_hat = Ktt - Kc.transpose() * llt.solve(Kc);
    out.sigma_hat = 0.5 * (out.sigma_hat + out.sigma_hat.transpose()).eval();

    out.omega_hat = omega_for(train, oc);
    const Eigen::Index m = Xstar.rows();
    const Eigen::Index d = train.d();
    out.per_output_var.resize(m, d);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double s = std::max(0.0, out.sigma_hat(i, i));
        for (Eigen::Index j = 0; j < d; ++j) out.per_output_var(i, j) = s * out.omega_hat(j, j);
    }
    return out;
}

}  // namespace

Eigen::Matrix3d OutputCovParams::phi_matrix() const {
    Eigen::Matrix3d phi = Eigen::Matrix3d::Zero();
    phi(0, 0) = std::exp(psi11);
    phi(1, 1) = std::exp(psi22);
    phi(2, 2) = std::exp(psi33);
    phi(1, 0) = phi21;
    phi(2, 0) = phi31;
    phi(2, 1) = phi32;
    return phi;
}

Eigen::Matrix3d OutputCovParams::omega() const {
    const Eigen::Matrix3d phi = phi_matrix();
    return phi * phi.transpose();
}

void TrainingSet::validate() const {
    if (inputs.rows() < 1) throw std::invalid_argument("TrainingSet: need n >= 1");
    if (inputs.cols() != 2) throw std::invalid_argument("TrainingSet: inputs must be n x 2");
    if (outputs.rows() != inputs.rows())
        throw std::invalid_argument("TrainingSet: outputs/inputs row mismatch");
    if (outputs.cols() != 1 && outputs.cols() != 3)
        throw std::invalid_argument("TrainingSet: d must be 1 or 3");
    if (noise_var.size() != 0 && noise_var.size() != inputs.rows())
        throw std::invalid_argument("TrainingSet: noise_var size mismatch");
    if (noise_var.size() != 0 && (noise_var.array() < 0.0).any())
        throw std::invalid_argument("TrainingSet: negative noise variance");
}

Prediction predict(const TrainingSet& train, const KernelParams& kp, const OutputCovParams& oc,
                   const MatX& Xstar) {
    train.validate();
    if (Xstar.cols() != 2) throw std::invalid_argument("predict: Xstar must be m x 2");
    const auto llt = factorize_train_gram(train, kp);
    return predict_with_llt(train, kp, oc, llt, Xstar);
}

double nlml(const TrainingSet& train, const KernelParams& kp, const OutputCovParams& oc) {
    train.validate();
    const double n = static_cast<double>(train.n());
    const double d = static_cast<double>(train.d());
    const auto llt = factorize_train_gram(train, kp);

    double log_det_omega = 0.0;
    MatX omega_inv;
    if (train.d() == 1) {
        omega_inv = MatX::Identity(1, 1);
    } else {
        log_det_omega = 2.0 * (oc.psi11 + oc.psi22 + oc.psi33);
        const Eigen::Matrix3d phi = oc.phi_matrix();
        // Omega^-1 = Phi^-T Phi^-1 via triangular solves.
        const Eigen::Matrix3d phi_inv =
            phi.triangularView<Eigen::Lower>().solve(Eigen::Matrix3d::Identity());
        omega_inv = phi_inv.transpose() * phi_inv;
    }

    const MatX alpha = llt.solve(train.outputs);                        // K'^-1 Y
    const double trace = (alpha.array() * (train.outputs * omega_inv).array()).sum();
    return 0.5 * n * d * std::log(2.0 * M_PI) + 0.5 * d * log_det_from_llt(llt) +
           0.5 * n * log_det_omega + 0.5 * trace;
}

VecX nlml_grad(const TrainingSet& train, const KernelParams& kp, const OutputCovParams& oc) {
    train.validate();
    const Eigen::Index n = train.n();
    const double d = static_cast<double>(train.d());
    const auto llt = factorize_train_gram(train, kp);

    const MatX A = llt.solve(MatX::Identity(n, n));  // K'^-1
    MatX omega_inv;
    if (train.d() == 1) {
        omega_inv = MatX::Identity(1, 1);
    } else {
        const Eigen::Matrix3d phi = oc.phi_matrix();
        const Eigen::Matrix3d phi_inv =
            phi.triangularView<Eigen::Lower>().solve(Eigen::Matrix3d::Identity());
        omega_inv = phi_inv.transpose() * phi_inv;
    }
    const MatX alpha = A * train.outputs;
    const MatX M = alpha * omega_inv * alpha.transpose();  // K'^-1 Y Om^-1 Y^T K'^-1
    const MatX W = d * A - M;  // dL/dtheta = 0.5 tr(W dK'/dtheta), W symmetric

    // Noise-free kernel block and squared distances.
    const MatX Kbase = gram_cross(train.inputs, train.inputs, kp);
    MatX D2(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            D2(i, j) = (train.inputs.row(i) - train.inputs.row(j)).squaredNorm();

    VecX g = VecX::Zero(kGradCount);
    g(kGradLogSf2) = 0.5 * (W.array() * Kbase.array()).sum();
    g(kGradLogL2) =
        0.5 * (W.array() * (Kbase.array() * D2.array() / (2.0 * kp.l2))).sum();
    if (!train.heteroscedastic())
        g(kGradLogSigmaN2) = 0.5 * kp.sigma_n2 * W.diagonal().sum();

    if (train.d() == 3) {
        const Eigen::Matrix3d C = train.outputs.transpose() * alpha;  // Y^T K'^-1 Y
        const Eigen::Matrix3d G =
            static_cast<double>(n) * omega_inv - omega_inv * C * omega_inv;
        const Eigen::Matrix3d GPhi = G * oc.phi_matrix();  // dL/dPhi
        g(kGradPsi11) = GPhi(0, 0) * std::exp(oc.psi11);
        g(kGradPsi22) = GPhi(1, 1) * std::exp(oc.psi22);
        g(kGradPsi33) = GPhi(2, 2) * std::exp(oc.psi33);
        g(kGradPhi21) = GPhi(1, 0);
        g(kGradPhi31) = GPhi(2, 0);
        g(kGradPhi32) = GPhi(2, 1);
    }
    return g;
}

namespace {

struct ParamMap {
    bool fit_sigma_n = false;
    bool fit_omega = false;

    int count() const { return 2 + (fit_sigma_n ? 1 : 0) + (fit_omega ? 5 : 0); }

    VecX pack(const KernelParams& kp, const OutputCovParams& oc) const {
        VecX t(count());
        int k = 0;
        t(k++) = std::log(kp.sf2);
        t(k++) = std::log(kp.l2);
        if (fit_sigma_n) t(k++) = std::log(std::max(kp.sigma_n2, 1e-12));
        if (fit_omega) {
            t(k++) = oc.psi22;
            t(k++) = oc.psi33;
            t(k++) = oc.phi21;
            t(k++) = oc.phi31;
            t(k++) = oc.phi32;
        }
        return t;
    }

    void unpack(const VecX& t, KernelParams& kp, OutputCovParams& oc) const {
        int k = 0;
        kp.sf2 = std::exp(t(k++));
        kp.l2 = std::exp(t(k++));
        if (fit_sigma_n) kp.sigma_n2 = std::exp(t(k++));
        if (fit_omega) {
            oc.psi11 = 0.0;  // gauge: Phi(0,0) = 1 removes the K/Omega scale ambiguity
            oc.psi22 = t(k++);
            oc.psi33 = t(k++);
            oc.phi21 = t(k++);
            oc.phi31 = t(k++);
            oc.phi32 = t(k++);
        }
    }

    VecX free_grad(const VecX& full) const {
        VecX g(count());
        int k = 0;
        g(k++) = full(kGradLogSf2);
        g(k++) = full(kGradLogL2);
        if (fit_sigma_n) g(k++) = full(kGradLogSigmaN2);
        if (fit_omega) {
            g(k++) = full(kGradPsi22);
            g(k++) = full(kGradPsi33);
            g(k++) = full(kGradPhi21);
            g(k++) = full(kGradPhi31);
            g(k++) = full(kGradPhi32);
        }
        return g;
    }
};

bool in_bounds(const VecX& t, double max_log_l2) {
    if (!(t.cwiseAbs().array() <= kLogParamBound).all()) return false;
    return t(1) <= max_log_l2;  // slot 1 is log l2
}

}  // namespace

FitResult fit_hyperparams(const TrainingSet& train, const KernelParams& init_kp,
                          const OutputCovParams& init_oc, const FitOptions& opts) {
    train.validate();
    if (opts.budget < 1) throw std::invalid_argument("fit_hyperparams: budget must be >= 1");

    ParamMap map;
    map.fit_sigma_n = opts.fit_sigma_n && !train.heteroscedastic();
    map.fit_omega = (train.d() == 3);

    KernelParams kp = init_kp;
    OutputCovParams oc = init_oc;
    if (map.fit_omega) oc.psi11 = 0.0;

    const auto eval = [&](const VecX& t, double& L, VecX& g) {
        KernelParams kpc = kp;
        OutputCovParams occ = oc;
        map.unpack(t, kpc, occ);
        L = nlml(train, kpc, occ);
        g = map.free_grad(nlml_grad(train, kpc, occ));
    };

    const double max_log_l2 = std::log(opts.max_l2);
    VecX theta = map.pack(kp, oc);
    if (theta(1) > max_log_l2) theta(1) = max_log_l2;
    double L = 0.0;
    VecX g;

    // Initial evaluation; on failure retry from deterministically jittered
    // starting points, then give up.
    int restarts = 0;
    for (;;) {
        try {
            eval(theta, L, g);
            break;
        } catch (const IllConditionedError&) {
            if (restarts >= opts.max_restarts) throw;
            ++restarts;
            std::uint64_t s = 0x12345678ULL + 77ULL * static_cast<std::uint64_t>(restarts);
            for (int i = 0; i < theta.size(); ++i) {
                s = s * 6364136223846793005ULL + 1442695040888963407ULL;
                const double u = static_cast<double>(s >> 11) / 9007199254740992.0;  // [0,1)
                theta(i) += 0.1 * (u - 0.5);
            }
        }
    }

    FitResult result;
    result.nlml_trace.push_back(L);
    double step = 1.0;
    int iter = 0;
    for (; iter < opts.budget; ++iter) {
        const double gnorm = g.norm();
        if (gnorm < opts.grad_tol) break;
        double a = std::min(1.0, 2.0 * step);
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            const VecX cand = theta - a * g;
            if (in_bounds(cand, max_log_l2)) {
                double Lc = 0.0;
                VecX gc;
                bool ok = true;
                try {
                    eval(cand, Lc, gc);
                } catch (const IllConditionedError&) {
                    ok = false;
                }
                if (ok && Lc <= L - 1e-4 * a * gnorm * gnorm) {
                    theta = cand;
                    L = Lc;
                    g = gc;
                    step = a;
                    accepted = true;
                    break;
                }
            }
            a *= 0.5;
        }
        if (!accepted) break;
        result.nlml_trace.push_back(L);
    }

    map.unpack(theta, kp, oc);
    result.kernel = kp;
    result.output_cov = oc;
    result.final_nlml = L;
    result.iterations = iter;
    return result;
}

MvgprModel::MvgprModel(TrainingSet train, KernelParams kp, OutputCovParams oc)
    : train_(std::move(train)), kp_(kp), oc_(oc) {
    train_.validate();
    means_ = train_.outputs.colwise().mean();
    train_.outputs.rowwise() -= means_;
    factorize();
}

void MvgprModel::factorize() { llt_ = factorize_train_gram(train_, kp_); }

MvgprModel MvgprModel::fit(TrainingSet train, const KernelParams& init_kp,
                           const OutputCovParams& init_oc, const FitOptions& opts) {
    MvgprModel model(std::move(train), init_kp, init_oc);
    model.refit(opts);
    return model;
}

void MvgprModel::refit(const FitOptions& opts) {
    const FitResult r = fit_hyperparams(train_, kp_, oc_, opts);
    kp_ = r.kernel;
    oc_ = r.output_cov;
    factorize();
}

Prediction MvgprModel::predict_at(const MatX& Xstar) const {
    Prediction p = predict_with_llt(train_, kp_, oc_, llt_, Xstar);
    p.mean.rowwise() += means_;
    return p;
}

void MvgprModel::predict_point(const geom::Vec2& q, VecX& mean, VecX& var) const {
    MatX Xstar(1, 2);
    Xstar << q.x(), q.y();
    const Prediction p = predict_at(Xstar);
    mean = p.mean.row(0).transpose();
    var = p.per_output_var.row(0).transpose();
}

double MvgprModel::nlml_value() const { return nlml(train_, kp_, oc_); }

}  // namespace vegnav::gp
