#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "vegnav/support/estimator.hpp"

namespace vegnav::planner {

using geom::Vec2;
using support::SupportEstimate;

struct TreeNode {
    SupportEstimate estimate;
    int parent = -1;
    double cost = 0.0;  // parent.cost + dist2d / (1 - tau), 0 at the root
    std::vector<int> children;
    bool alive = true;

    Vec2 pos() const { return estimate.s_plane.xy(); }
};

// Detected obstacle centers (2D). Membership checks are strict: a point at
// exactly the inflation radius counts as unsafe.
class ObstacleSet {
public:
    void add(const Vec2& center) { centers_.push_back(center); }
    std::size_t size() const { return centers_.size(); }
    const std::vector<Vec2>& centers() const { return centers_; }

    // True iff every obstacle center is strictly farther than inflation_r.
    bool clear_of(const Vec2& q, double inflation_r) const;

private:
    std::vector<Vec2> centers_;
};

bool inflation_check(const Vec2& q, const ObstacleSet& obstacles, double inflation_r);

// Min distance from point p to segment [a, b].
double point_segment_dist(const Vec2& p, const Vec2& a, const Vec2& b);

// RRT* tree over support estimates. Node ids are stable; pruned nodes keep
// their slot with alive = false.
class PlannerTree {
public:
    using EdgePredicate = std::function<bool(const Vec2&, const Vec2&)>;

    int add_root(const SupportEstimate& estimate);
    int insert(const SupportEstimate& estimate, int parent);

    const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    std::size_t slot_count() const { return nodes_.size(); }
    std::size_t alive_count() const { return alive_count_; }
    int root() const { return root_; }

    double edge_cost(int parent, const Vec2& child_pos, double child_tau) const;

    // Nearest alive node to q (2D); -1 on an empty tree.
    int nearest(const Vec2& q) const;
    // Alive nodes within radius of q, ascending id.
    std::vector<int> neighbors(const Vec2& q, double radius) const;

    // Min-cost parent for a node at `pos` with traversability `tau` among
    // `candidates`; ties break toward the lower id. Candidates must be alive.
    int find_parent(const std::vector<int>& candidates, const Vec2& pos, double tau) const;

    // Re-parents any neighbor whose cost drops by adopting new_id, updating
    // descendant costs transitively. Edges vetoed by `edge_ok` are skipped.
    void rewire(int new_id, const std::vector<int>& neighbor_ids,
                const EdgePredicate& edge_ok = nullptr);

    // Removes every alive node within `radius` of center together with its
    // descendant subtree. Throws RootPrunedError when the root is hit.
    // Returns the number of removed nodes.
    int prune_within(const Vec2& center, double radius);

    // Removes subtrees hanging from parent edges that pass within `radius`
    // of center (both endpoints outside the disk but the segment dipping in).
    int prune_edges_within(const Vec2& center, double radius);

    // Walks parent links from id to the root; front() is the root.
    std::vector<int> path_to_root(int id) const;

    // Structural audit: single root, acyclic parent links, alive children
    // consistency, and cost recursion within tol. Throws std::logic_error.
    void validate(double tol = 1e-9) const;

private:
    void update_subtree_costs(int id);
    void kill_subtree(int id, int& removed);

    std::vector<TreeNode> nodes_;
    int root_ = -1;
    std::size_t alive_count_ = 0;
};

}  // namespace vegnav::planner
