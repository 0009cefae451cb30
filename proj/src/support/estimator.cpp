#include "vegnav/support/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vegnav/errors.hpp"
#include "vegnav/geom/attitude.hpp"

namespace vegnav::support {

namespace {

void fuse_channel(double pro_v, double pro_var, double ep_v, double ep_var, double& out_v,
                  double& out_var, double* weight = nullptr) {
    if (pro_var < 0.0 || ep_var < 0.0)
        throw std::invalid_argument("fuse: negative channel variance");
    const double denom = ep_var + pro_var;
    if (denom <= 0.0) {
        if (std::abs(pro_v - ep_v) > 1e-6)
            throw DegenerateVarianceError("fuse: both variances zero, values disagree");
        out_v = pro_v;
        out_var = 0.0;
        if (weight) *weight = 0.5;
        return;
    }
    const double w = ep_var / denom;
    out_v = w * pro_v + (1.0 - w) * ep_v;
    out_var = ep_var * pro_var / denom;
    if (weight) *weight = w;
}

}  // namespace

PlaneEstimate fuse(const PlaneEstimate& pro, const PlaneEstimate& ep) {
    if (std::abs(pro.x - ep.x) > 1e-9 || std::abs(pro.y - ep.y) > 1e-9)
        throw std::invalid_argument("fuse: planes must share (x, y)");
    PlaneEstimate s;
    s.x = pro.x;
    s.y = pro.y;
    fuse_channel(pro.z, pro.var_z, ep.z, ep.var_z, s.z, s.var_z);
    fuse_channel(pro.roll, pro.var_roll, ep.roll, ep.var_roll, s.roll, s.var_roll);
    fuse_channel(pro.pitch, pro.var_pitch, ep.pitch, ep.var_pitch, s.pitch, s.var_pitch);
    return s;
}

double traversability(const SupportEstimate& est, const TraversabilityConfig& cfg) {
    if (!cfg.valid()) throw std::invalid_argument("traversability: invalid config");
    const PlaneEstimate& s = est.s_plane;
    const double slope = geom::slope_from_attitude(s.roll, s.pitch);
    const double eps = s.var_z + cfg.mu * (s.var_roll + s.var_pitch);
    const double tau = cfg.alpha1 * slope / cfg.s_crit + cfg.alpha2 * eps / cfg.eps_crit +
                       cfg.alpha3 * est.veg_height / cfg.h_crit;
    return std::clamp(tau, 0.0, kTauMax);
}

EstimationMode parse_mode(const std::string& name) {
    if (name == "fused") return EstimationMode::kFused;
    if (name == "surf_only") return EstimationMode::kSurfOnly;
    if (name == "pro_only") return EstimationMode::kProOnly;
    throw ConfigError("unknown estimation mode: " + name);
}

std::string mode_name(EstimationMode mode) {
    switch (mode) {
        case EstimationMode::kFused: return "fused";
        case EstimationMode::kSurfOnly: return "surf_only";
        case EstimationMode::kProOnly: return "pro_only";
    }
    return "?";
}

SupportEstimator::SupportEstimator(const geom::PointCloudIndex* cloud,
                                   const geom::TrajectoryHistory* history, EstimationMode mode,
                                   SurfFitConfig surf_cfg, TraversabilityConfig trav_cfg,
                                   GpConfig gp_cfg)
    : cloud_(cloud),
      history_(history),
      mode_(mode),
      surf_cfg_(surf_cfg),
      trav_cfg_(trav_cfg),
      gp_cfg_(gp_cfg) {
    if (!surf_cfg_.valid()) throw ConfigError("SupportEstimator: invalid surf config");
    if (!trav_cfg_.valid()) throw ConfigError("SupportEstimator: invalid traversability config");
    if (mode_ != EstimationMode::kProOnly && cloud_ == nullptr)
        throw ConfigError("SupportEstimator: mode requires a point cloud");
    if (mode_ != EstimationMode::kSurfOnly && (history_ == nullptr || history_->size() < 2))
        throw ConfigError("SupportEstimator: mode requires a trajectory history (>= 2 samples)");
}

void SupportEstimator::fit_models() {
    if (mode_ == EstimationMode::kSurfOnly) return;

    const gp::MatX X = history_->inputs();
    const gp::MatX Y = history_->outputs_zrp();

    gp::TrainingSet pro_train{X, Y, gp::VecX()};
    gp::KernelParams kp;
    // Data-driven starting point: pooled output variance and a length scale
    // of about a third of the trajectory span.
    const gp::MatX Yc = Y.rowwise() - Y.colwise().mean();
    double z_var = Yc.col(0).squaredNorm() / std::max(1.0, static_cast<double>(Y.rows()) - 1.0);
    kp.sf2 = gp_cfg_.init_sf2 > 0.0 ? gp_cfg_.init_sf2 : std::max(z_var, 1e-6);
    const double span =
        (X.colwise().maxCoeff() - X.colwise().minCoeff()).norm();
    kp.l2 = gp_cfg_.init_l2 > 0.0 ? gp_cfg_.init_l2 : std::max(std::pow(span / 3.0, 2), 1e-4);
    kp.sigma_n2 = history_->sigma_n_pro();

    gp::FitOptions opts;
    opts.budget = gp_cfg_.fit_budget;
    opts.fit_sigma_n = false;  // odometry noise is a fixed, known constant
    opts.max_l2 = std::max(kp.l2, span * span);
    pro_model_ = std::make_unique<gp::MvgprModel>(
        gp::MvgprModel::fit(std::move(pro_train), kp, gp::OutputCovParams{}, opts));

    if (mode_ == EstimationMode::kFused) build_depth_training();
}

void SupportEstimator::build_depth_training() {
    history_surf_.assign(history_->size(), std::nullopt);
    std::vector<double> hx, hy, hv, hn;
    for (std::size_t i = 0; i < history_->size(); ++i) {
        const auto& s = (*history_)[i];
        const geom::Vec2 xy(s.position.x(), s.position.y());
        const auto surf = fit_surf_plane(*cloud_, xy, surf_cfg_);
        history_surf_[i] = surf;
        if (!surf) continue;
        hx.push_back(xy.x());
        hy.push_back(xy.y());
        hv.push_back(surf->z - s.position.z());                  // vegetation depth sample
        hn.push_back(history_->sigma_n_pro() + surf->var_z);     // per-sample variance
    }
    if (hv.size() < 2) {
        depth_model_.reset();  // fusion falls back to the Pro-Plane alone
        return;
    }

    const auto n = static_cast<Eigen::Index>(hv.size());
    gp::TrainingSet depth_train;
    depth_train.inputs.resize(n, 2);
    depth_train.outputs.resize(n, 1);
    depth_train.noise_var.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        depth_train.inputs(i, 0) = hx[static_cast<std::size_t>(i)];
        depth_train.inputs(i, 1) = hy[static_cast<std::size_t>(i)];
        depth_train.outputs(i, 0) = hv[static_cast<std::size_t>(i)];
        depth_train.noise_var(i) = hn[static_cast<std::size_t>(i)];
    }

    gp::KernelParams kp;
    const Eigen::RowVector2d lo = depth_train.inputs.colwise().minCoeff();
    const Eigen::RowVector2d hi = depth_train.inputs.colwise().maxCoeff();
    const gp::VecX centered =
        depth_train.outputs.col(0).array() - depth_train.outputs.col(0).mean();
    kp.sf2 = std::max(centered.squaredNorm() / std::max(1.0, static_cast<double>(n) - 1.0), 1e-8);
    kp.l2 = std::max(std::pow((hi - lo).norm() / 3.0, 2), 1e-4);
    kp.sigma_n2 = 0.0;  // heteroscedastic: per-sample variances carry the noise

    gp::FitOptions opts;
    opts.budget = gp_cfg_.fit_budget;
    opts.max_l2 = std::max(kp.l2, std::pow((hi - lo).norm(), 2));
    try {
        depth_model_ = std::make_unique<gp::MvgprModel>(
            gp::MvgprModel::fit(std::move(depth_train), kp, gp::OutputCovParams{}, opts));
    } catch (const IllConditionedError&) {
        depth_model_.reset();
    }
}

void SupportEstimator::refit_models() {
    gp::FitOptions opts;
    opts.budget = gp_cfg_.refit_budget;
    if (pro_model_) {
        opts.fit_sigma_n = false;
        pro_model_->refit(opts);
    }
    if (depth_model_) {
        opts.fit_sigma_n = true;  // ignored: the depth model is heteroscedastic
        depth_model_->refit(opts);
    }
}

PlaneEstimate SupportEstimator::proprioception(const geom::Vec2& q) const {
    if (!pro_model_) throw std::logic_error("proprioception: fit_models() not called");
    gp::VecX mean, var;
    pro_model_->predict_point(q, mean, var);
    PlaneEstimate p;
    p.x = q.x();
    p.y = q.y();
    p.z = mean(0);
    p.roll = mean(1);
    p.pitch = mean(2);
    p.var_z = var(0);
    p.var_roll = var(1);
    p.var_pitch = var(2);
    return p;
}

PlaneEstimate SupportEstimator::ex_perception(const PlaneEstimate& surf,
                                              const geom::Vec2& q) const {
    if (!depth_model_) throw std::logic_error("ex_perception: depth model unavailable");
    gp::VecX mean, var;
    depth_model_->predict_point(q, mean, var);
    PlaneEstimate ep;
    ep.x = q.x();
    ep.y = q.y();
    ep.z = surf.z - mean(0);
    ep.var_z = var(0) + surf.var_z;
    // Penetrable vegetation is assumed uniform and continuous, so the
    // exteroceptive attitude is the canopy attitude.
    ep.roll = surf.roll;
    ep.pitch = surf.pitch;
    ep.var_roll = surf.var_roll;
    ep.var_pitch = surf.var_pitch;
    return ep;
}

std::optional<SupportEstimate> SupportEstimator::estimate(const geom::Vec2& q) const {
    SupportEstimate out;

    std::optional<PlaneEstimate> surf;
    if (mode_ != EstimationMode::kProOnly) {
        surf = fit_surf_plane(*cloud_, q, surf_cfg_);
        if (!surf) return std::nullopt;
        out.surf_plane = *surf;
    }

    try {
        switch (mode_) {
            case EstimationMode::kSurfOnly:
                out.s_plane = *surf;
                break;
            case EstimationMode::kProOnly: {
                out.s_plane = proprioception(q);
                out.surf_plane = out.s_plane;  // no exteroceptive surface
                out.pro_z = out.s_plane.z;
                out.pro_var_z = out.s_plane.var_z;
                break;
            }
            case EstimationMode::kFused: {
                const PlaneEstimate pro = proprioception(q);
                out.pro_z = pro.z;
                out.pro_var_z = pro.var_z;
                if (depth_model_) {
                    const PlaneEstimate ep = ex_perception(*surf, q);
                    out.ep_z = ep.z;
                    out.ep_var_z = ep.var_z;
                    out.s_plane = fuse(pro, ep);
                    out.w_z = (ep.var_z + pro.var_z) > 0.0
                                  ? ep.var_z / (ep.var_z + pro.var_z)
                                  : 0.5;
                } else {
                    out.s_plane = pro;
                }
                break;
            }
        }
    } catch (const IllConditionedError&) {
        return std::nullopt;
    } catch (const DegenerateVarianceError&) {
        return std::nullopt;
    }

    out.veg_height = out.surf_plane.z - out.s_plane.z;
    out.is_obstacle = out.veg_height > trav_cfg_.h_crit;
    out.tau = traversability(out, trav_cfg_);
    return out;
}

std::string SupportEstimator::debug_dump_header() {
    return "x y z_surf z_pro z_ep z_s var_z_pro var_z_ep w_z roll pitch tau is_obstacle";
}

std::string SupportEstimator::debug_dump_line(const SupportEstimate& e) {
    std::ostringstream os;
    os.precision(9);
    os << e.s_plane.x << ' ' << e.s_plane.y << ' ' << e.surf_plane.z << ' ' << e.pro_z << ' '
       << e.ep_z << ' ' << e.s_plane.z << ' ' << e.pro_var_z << ' ' << e.ep_var_z << ' ' << e.w_z
       << ' ' << e.s_plane.roll << ' ' << e.s_plane.pitch << ' ' << e.tau << ' '
       << (e.is_obstacle ? 1 : 0);
    return os.str();
}

}  // namespace vegnav::support
