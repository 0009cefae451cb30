#include "vegnav/planner/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vegnav/errors.hpp"

namespace vegnav::planner {

bool ObstacleSet::clear_of(const Vec2& q, double inflation_r) const {
    for (const auto& c : centers_)
        if ((q - c).norm() <= inflation_r) return false;
    return true;
}

bool inflation_check(const Vec2& q, const ObstacleSet& obstacles, double inflation_r) {
    return obstacles.clear_of(q, inflation_r);
}

double point_segment_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 <= 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

int PlannerTree::add_root(const SupportEstimate& estimate) {
    if (root_ != -1) throw std::logic_error("PlannerTree: root already set");
    TreeNode n;
    n.estimate = estimate;
    n.parent = -1;
    n.cost = 0.0;
    nodes_.push_back(std::move(n));
    root_ = 0;
    alive_count_ = 1;
    return root_;
}

double PlannerTree::edge_cost(int parent, const Vec2& child_pos, double child_tau) const {
    const double d = (node(parent).pos() - child_pos).norm();
    return node(parent).cost + d / (1.0 - child_tau);
}

int PlannerTree::insert(const SupportEstimate& estimate, int parent) {
    if (parent < 0 || parent >= static_cast<int>(nodes_.size()) || !node(parent).alive)
        throw std::logic_error("PlannerTree: bad parent");
    TreeNode n;
    n.estimate = estimate;
    n.parent = parent;
    n.cost = edge_cost(parent, estimate.s_plane.xy(), estimate.tau);
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(n));
    nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
    ++alive_count_;
    return id;
}

int PlannerTree::nearest(const Vec2& q) const {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!nodes_[i].alive) continue;
        const double d = (nodes_[i].pos() - q).norm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::vector<int> PlannerTree::neighbors(const Vec2& q, double radius) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!nodes_[i].alive) continue;
        if ((nodes_[i].pos() - q).norm() <= radius) out.push_back(static_cast<int>(i));
    }
    return out;
}

int PlannerTree::find_parent(const std::vector<int>& candidates, const Vec2& pos,
                             double tau) const {
    if (candidates.empty()) throw std::logic_error("find_parent: no candidates");
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const int id : candidates) {
        const double c = edge_cost(id, pos, tau);
        if (c < best_cost || (c == best_cost && id < best)) {
            best_cost = c;
            best = id;
        }
    }
    return best;
}

void PlannerTree::update_subtree_costs(int id) {
    auto& n = nodes_[static_cast<std::size_t>(id)];
    for (const int c : n.children) {
        auto& child = nodes_[static_cast<std::size_t>(c)];
        if (!child.alive) continue;
        child.cost = edge_cost(id, child.pos(), child.estimate.tau);
        update_subtree_costs(c);
    }
}

void PlannerTree::rewire(int new_id, const std::vector<int>& neighbor_ids,
                         const EdgePredicate& edge_ok) {
    const Vec2 new_pos = node(new_id).pos();
    for (const int nb : neighbor_ids) {
        if (nb == new_id || nb == node(new_id).parent) continue;
        if (!node(nb).alive) continue;
        const double cand = edge_cost(new_id, node(nb).pos(), node(nb).estimate.tau);
        if (cand >= node(nb).cost) continue;
        if (edge_ok && !edge_ok(new_pos, node(nb).pos())) continue;
        auto& reusing = nodes_[static_cast<std::size_t>(nb)];
        auto& old_parent = nodes_[static_cast<std::size_t>(reusing.parent)];
        old_parent.children.erase(
            std::remove(old_parent.children.begin(), old_parent.children.end(), nb),
            old_parent.children.end());
        reusing.parent = new_id;
        reusing.cost = cand;
        nodes_[static_cast<std::size_t>(new_id)].children.push_back(nb);
        update_subtree_costs(nb);
    }
}

void PlannerTree::kill_subtree(int id, int& removed) {
    auto& n = nodes_[static_cast<std::size_t>(id)];
    if (n.alive) {
        n.alive = false;
        --alive_count_;
        ++removed;
    }
    for (const int c : n.children) kill_subtree(c, removed);
    n.children.clear();
}

int PlannerTree::prune_within(const Vec2& center, double radius) {
    if (root_ == -1) return 0;
    if (node(root_).alive && (node(root_).pos() - center).norm() <= radius)
        throw RootPrunedError("prune: start node inside the inflation disk");
    int removed = 0;
    // Collect first: killing while scanning would miss marks on shared paths.
    std::vector<int> hits;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!nodes_[i].alive) continue;
        if ((nodes_[i].pos() - center).norm() <= radius) hits.push_back(static_cast<int>(i));
    }
    for (const int id : hits) {
        if (!node(id).alive) continue;  // already taken down with an ancestor
        auto& n = nodes_[static_cast<std::size_t>(id)];
        if (n.parent >= 0) {
            auto& p = nodes_[static_cast<std::size_t>(n.parent)];
            p.children.erase(std::remove(p.children.begin(), p.children.end(), id),
                             p.children.end());
        }
        kill_subtree(id, removed);
    }
    return removed;
}

int PlannerTree::prune_edges_within(const Vec2& center, double radius) {
    if (root_ == -1) return 0;
    int removed = 0;
    std::vector<int> hits;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (!n.alive || n.parent < 0) continue;
        if (point_segment_dist(center, node(n.parent).pos(), n.pos()) <= radius)
            hits.push_back(static_cast<int>(i));
    }
    for (const int id : hits) {
        if (!node(id).alive) continue;
        auto& n = nodes_[static_cast<std::size_t>(id)];
        auto& p = nodes_[static_cast<std::size_t>(n.parent)];
        p.children.erase(std::remove(p.children.begin(), p.children.end(), id),
                         p.children.end());
        kill_subtree(id, removed);
    }
    return removed;
}

std::vector<int> PlannerTree::path_to_root(int id) const {
    std::vector<int> path;
    int cur = id;
    while (cur != -1) {
        path.push_back(cur);
        cur = node(cur).parent;
        if (path.size() > nodes_.size()) throw std::logic_error("path_to_root: cycle");
    }
    std::reverse(path.begin(), path.end());
    return path;
}

void PlannerTree::validate(double tol) const {
    // Local parent/cost identities plus one BFS from the root. Visiting
    // exactly alive_count_ nodes through consistent children lists rules out
    // cycles, orphans, and multiple roots in O(n).
    std::size_t alive_seen = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (!n.alive) continue;
        ++alive_seen;
        if (static_cast<int>(i) == root_) {
            if (n.parent != -1 || n.cost != 0.0) throw std::logic_error("validate: bad root");
        } else {
            if (n.parent < 0 || !node(n.parent).alive)
                throw std::logic_error("validate: dangling parent");
            const double expect = edge_cost(n.parent, n.pos(), n.estimate.tau);
            if (std::abs(expect - n.cost) > tol)
                throw std::logic_error("validate: cost recursion violated");
        }
        for (const int c : n.children) {
            if (!node(c).alive || node(c).parent != static_cast<int>(i))
                throw std::logic_error("validate: children list inconsistent");
        }
    }
    if (alive_seen != alive_count_) throw std::logic_error("validate: alive count drift");

    if (root_ == -1) return;
    std::size_t reached = 0;
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        ++reached;
        if (reached > alive_count_) throw std::logic_error("validate: cycle in children");
        for (const int c : node(id).children) stack.push_back(c);
    }
    if (reached != alive_count_) throw std::logic_error("validate: unreachable alive nodes");
}

}  // namespace vegnav::planner
