#pragma once

// Exact enumeration of the d preimages of a point, depth-n preimage trees and
// random backward-orbit sampling.
//
// Branch conventions. Branch i of a point with lift x~ is f~^{-1}(x~ + w_i)
// with w_i the i-th canonical coset representative. Trees and word-driven
// orbits iterate this rule on the (unreduced) lifts, which matches the
// solenoid inverse exactly; depth is capped so the growing lifts keep full
// precision. Randomly sampled orbits instead reduce the lift mod Z^2 at every
// step (the group action makes this a relabeling of the same fiber), so they
// remain accurate at any length; their recorded word uses these per-step
// canonical frames.

#include <cstdint>
#include <vector>

#include "endolab/map.hpp"
#include "endolab/rng.hpp"

namespace endolab {

inline constexpr double kTolPreimage = 1e-10;
inline constexpr double kTolConservative = 1e-6;
inline constexpr std::int64_t kDefaultNodeCap = 2'000'000;

struct PreimageBranch {
    int label = 0;        // 1-based branch label
    TorusPoint point;     // y with f(y) = x
    Vec2 lift;            // f~^{-1}(x~ + w_label)
    Mat2 deriv;           // Df at y
    double abs_det = 0.0; // |det Df(y)|
};

// preimage fiber of the point with lift xlift; no forward verification
std::vector<PreimageBranch> preimages_lifted(const TorusMap& f, const Vec2& xlift);

// preimage fiber of x from its canonical lift, with each branch verified by
// forward evaluation to kTolPreimage
std::vector<PreimageBranch> preimages(const TorusMap& f, const TorusPoint& x);

class PreimageTree {
public:
    PreimageTree(const TorusMap& f, const TorusPoint& x, int depth,
                 std::int64_t node_cap = kDefaultNodeCap);

    int depth() const { return depth_; }
    int branching() const { return d_; }
    const TorusPoint& root() const { return root_; }
    std::int64_t leaf_count() const { return std::int64_t(leaf_points_.size()); }

    // nodes of one level, in branch order (level k has d^k nodes)
    const std::vector<Vec2>& level_lifts(int k) const { return lifts_[k]; }
    TorusPoint point(int k, std::int64_t idx) const { return wrap(lifts_[k][idx]); }

    const std::vector<TorusPoint>& leaf_points() const { return leaf_points_; }
    // Df^depth at leaf idx composed along the branch to the root
    const Mat2& leaf_cocycle(std::int64_t idx) const { return leaf_cocycles_[idx]; }
    const std::vector<Mat2>& leaf_cocycles() const { return leaf_cocycles_; }

    // branch labels (1-based) from the root down to leaf idx
    std::vector<int> leaf_word(std::int64_t idx) const;

private:
    TorusPoint root_;
    int depth_;
    int d_;
    std::vector<std::vector<Vec2>> lifts_;
    std::vector<TorusPoint> leaf_points_;
    std::vector<Mat2> leaf_cocycles_;
};

PreimageTree preimage_tree(const TorusMap& f, const TorusPoint& x, int depth,
                           std::int64_t node_cap = kDefaultNodeCap);

// throws CapacityError if d^depth > cap; returns d^depth otherwise
std::int64_t check_tree_capacity(std::int64_t d, int depth, std::int64_t cap);

enum class Weighting { bernoulli, jacobian };

struct BackwardOrbit {
    std::vector<TorusPoint> points;            // x_0 .. x_n, f(x_{i+1}) = x_i
    std::vector<int> word;                     // branch labels, length n
    std::vector<Mat2> steps;                   // Df at x_{i+1}, length n
    std::vector<std::vector<double>> weights;  // weights offered at each choice (may be empty)

    int length() const { return int(word.size()); }
};

// Reproducible sampled backward orbit. Jacobian weighting draws branch z with
// probability 1/|det Df(z)| and requires those weights to sum to 1 within
// kTolConservative (conservative maps).
BackwardOrbit sample_backward_orbit(const TorusMap& f, const TorusPoint& x, int n,
                                    Weighting weighting, std::uint64_t seed);

}  // namespace endolab
