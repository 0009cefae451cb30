#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vegnav/geom/trajectory.hpp"
#include "vegnav/gp/mvgpr.hpp"
#include "vegnav/support/surf_fit.hpp"

namespace vegnav::support {

// Traversability stays below 1 by this margin so the planner edge cost
// d / (1 - tau) is always finite.
inline constexpr double kTauMax = 1.0 - 1e-6;

struct TraversabilityConfig {
    double alpha1 = 0.4;   // slope weight
    double alpha2 = 0.3;   // uncertainty weight
    double alpha3 = 0.3;   // vegetation-height weight
    double s_crit = 0.35;  // rad
    double eps_crit = 0.02;
    double h_crit = 0.4;   // m
    double mu = 1.0;       // attitude-variance coefficient inside epsilon

    bool valid() const {
        return alpha1 >= 0.0 && alpha2 >= 0.0 && alpha3 >= 0.0 &&
               std::abs(alpha1 + alpha2 + alpha3 - 1.0) <= 1e-9 && s_crit > 0.0 &&
               eps_crit > 0.0 && h_crit > 0.0 && mu >= 0.0;
    }
};

struct SupportEstimate {
    PlaneEstimate s_plane;     // fused support plane
    PlaneEstimate surf_plane;  // canopy-top plane (mirrors s_plane when no cloud)
    double veg_height = 0.0;   // surf_plane.z - s_plane.z
    double tau = 0.0;          // in [0, kTauMax]
    bool is_obstacle = false;  // veg_height > h_crit

    // Pipeline intermediates kept for the per-node debug dump; NaN when the
    // corresponding stage did not run.
    double pro_z = std::numeric_limits<double>::quiet_NaN();
    double ep_z = std::numeric_limits<double>::quiet_NaN();
    double pro_var_z = std::numeric_limits<double>::quiet_NaN();
    double ep_var_z = std::numeric_limits<double>::quiet_NaN();
    double w_z = std::numeric_limits<double>::quiet_NaN();
};

// Per-channel inverse-variance fusion (Eq.-style weights): the channel weight
// on the proprioceptive value is var_ep / (var_ep + var_pro), and the fused
// variance is the product-of-Gaussians posterior var_ep*var_pro/(var_ep+var_pro).
// Both planes must share (x, y). Throws DegenerateVarianceError when a channel
// has two zero variances but disagreeing values.
PlaneEstimate fuse(const PlaneEstimate& pro, const PlaneEstimate& ep);

// Slope / uncertainty / vegetation-height mix, clamped to [0, kTauMax]:
//   s   = arccos(cos roll * cos pitch)
//   eps = var_z + mu * (var_roll + var_pitch)
//   tau = a1 s/s_crit + a2 eps/eps_crit + a3 h/h_crit
double traversability(const SupportEstimate& est, const TraversabilityConfig& cfg);

enum class EstimationMode {
    kFused,     // full pipeline
    kSurfOnly,  // S-Plane := Surf-Plane (plane fitting only)
    kProOnly,   // S-Plane := Pro-Plane (no point cloud)
};

EstimationMode parse_mode(const std::string& name);
std::string mode_name(EstimationMode mode);

struct GpConfig {
    double sigma_n_pro = 1e-4;  // m^2, fixed odometry noise for the trivariate GP
    int fit_budget = 100;
    int refit_budget = 10;    // per-refit budget; refits are warm starts
    int refit_interval = 10;  // accepted planner nodes between refits; 0 disables
    // Optimizer starting point for the trivariate model; data-driven when <= 0.
    double init_sf2 = -1.0;
    double init_l2 = -1.0;
};

// Support-plane estimation pipeline over one immutable cloud + history
// snapshot. Fitting happens once up front (and on explicit refit calls);
// estimate() is const and safe to call concurrently afterwards.
class SupportEstimator {
public:
    SupportEstimator(const geom::PointCloudIndex* cloud, const geom::TrajectoryHistory* history,
                     EstimationMode mode, SurfFitConfig surf_cfg, TraversabilityConfig trav_cfg,
                     GpConfig gp_cfg);

    // Fits the trivariate proprioception model and the univariate vegetation
    // depth model (fused/pro_only modes). Call before estimate().
    void fit_models();

    // Re-optimizes hyperparameters from their current values.
    void refit_models();

    // Full per-node pipeline: Surf-Plane fit, Pro-Plane prediction, EP-Plane
    // prediction, fusion, obstacle check, traversability. Returns nullopt
    // when the node is unknowable (plane fit refused, model unavailable or
    // ill-conditioned).
    std::optional<SupportEstimate> estimate(const geom::Vec2& q) const;

    // Pro-Plane at q from the trivariate GP over the trajectory history.
    PlaneEstimate proprioception(const geom::Vec2& q) const;

    // EP-Plane at q: attitude copied from surf, height = surf height minus
    // predicted vegetation depth. Requires the depth model.
    PlaneEstimate ex_perception(const PlaneEstimate& surf, const geom::Vec2& q) const;

    bool depth_model_available() const { return depth_model_ != nullptr; }
    const gp::MvgprModel* pro_model() const { return pro_model_.get(); }
    const gp::MvgprModel* depth_model() const { return depth_model_.get(); }
    EstimationMode mode() const { return mode_; }
    const TraversabilityConfig& trav_config() const { return trav_cfg_; }
    const SurfFitConfig& surf_config() const { return surf_cfg_; }

    static std::string debug_dump_header();
    static std::string debug_dump_line(const SupportEstimate& e);

private:
    void build_depth_training();

    const geom::PointCloudIndex* cloud_;
    const geom::TrajectoryHistory* history_;
    EstimationMode mode_;
    SurfFitConfig surf_cfg_;
    TraversabilityConfig trav_cfg_;
    GpConfig gp_cfg_;

    std::unique_ptr<gp::MvgprModel> pro_model_;
    std::unique_ptr<gp::MvgprModel> depth_model_;
    // Surf-Plane cache at history samples (depth-GP training data).
    std::vector<std::optional<PlaneEstimate>> history_surf_;
};

}  // namespace vegnav::support
