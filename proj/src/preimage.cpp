#include "endolab/preimage.hpp"

#include <cmath>
#include <sstream>

namespace endolab {

std::vector<PreimageBranch> preimages_lifted(const TorusMap& f, const Vec2& xlift) {
    const CosetSystem& cs = f.cosets();
    std::vector<PreimageBranch> out;
    out.reserve(cs.reps.size());
    for (std::size_t i = 0; i < cs.reps.size(); ++i) {
        PreimageBranch br;
        br.label = int(i) + 1;
        try {
            br.lift = f.lift_inverse(xlift + cs.reps[i].to_vec());
        } catch (const NumericalError& e) {
            std::ostringstream os;
            os << "branch " << br.label << " inverse failed: " << e.what();
            throw NumericalError(os.str());
        }
        br.point = wrap(br.lift);
        br.deriv = f.derivative(br.point);
        br.abs_det = std::fabs(br.deriv.det());
        out.push_back(br);
    }
    return out;
}

std::vector<PreimageBranch> preimages(const TorusMap& f, const TorusPoint& x) {
    auto out = preimages_lifted(f, x.lift());
    for (const auto& br : out) {
        double res = torus_distance(f.eval(br.point), x);
        if (res > kTolPreimage) {
            std::ostringstream os;
            os << "preimages: branch " << br.label << " fails forward check, residual " << res;
            throw NumericalError(os.str());
        }
    }
    return out;
}

std::int64_t check_tree_capacity(std::int64_t d, int depth, std::int64_t cap) {
    std::int64_t leaves = 1;
    for (int k = 0; k < depth; ++k) {
        if (leaves > cap / d) {
            std::ostringstream os;
            os << "preimage tree: d^n = " << d << "^" << depth << " exceeds node cap " << cap;
            throw CapacityError(os.str());
        }
        leaves *= d;
    }
    if (leaves > cap) {
        std::ostringstream os;
        os << "preimage tree: d^n = " << leaves << " exceeds node cap " << cap;
        throw CapacityError(os.str());
    }
    return leaves;
}

PreimageTree::PreimageTree(const TorusMap& f, const TorusPoint& x, int depth,
                           std::int64_t node_cap)
    : root_(x), depth_(depth), d_(int(f.degree())) {
    if (depth < 0) throw DomainError("preimage tree: negative depth");
    std::int64_t leaves = check_tree_capacity(d_, depth, node_cap);

    lifts_.resize(depth + 1);
    lifts_[0] = {x.lift()};
    std::vector<Mat2> cocycles{Mat2::identity()};

    for (int k = 1; k <= depth; ++k) {
        const auto& parents = lifts_[k - 1];
        std::vector<Vec2> level;
        level.reserve(parents.size() * d_);
        std::vector<Mat2> next_cocycles;
        next_cocycles.reserve(parents.size() * d_);
        for (std::size_t pi = 0; pi < parents.size(); ++pi) {
            auto branches = preimages_lifted(f, parents[pi]);
            for (const auto& br : branches) {
                level.push_back(br.lift);
                // M_child = M_parent * Df(child): cocycle of f^k composed to the root
                next_cocycles.push_back(cocycles[pi] * br.deriv);
            }
        }
        lifts_[k] = std::move(level);
        cocycles = std::move(next_cocycles);
    }

    leaf_points_.reserve(leaves);
    for (const Vec2& v : lifts_[depth]) leaf_points_.push_back(wrap(v));
    leaf_cocycles_ = std::move(cocycles);
}

std::vector<int> PreimageTree::leaf_word(std::int64_t idx) const {
    std::vector<int> word(depth_);
    for (int k = depth_ - 1; k >= 0; --k) {
        word[k] = int(idx % d_) + 1;
        idx /= d_;
    }
    return word;
}

PreimageTree preimage_tree(const TorusMap& f, const TorusPoint& x, int depth,
                           std::int64_t node_cap) {
    return PreimageTree(f, x, depth, node_cap);
}

BackwardOrbit sample_backward_orbit(const TorusMap& f, const TorusPoint& x, int n,
                                    Weighting weighting, std::uint64_t seed) {
    if (n < 1) throw DomainError("sample_backward_orbit: n must be >= 1");
    SplitMix64 rng(seed);
    BackwardOrbit orbit;
    orbit.points.reserve(n + 1);
    orbit.word.reserve(n);
    orbit.steps.reserve(n);
    orbit.weights.reserve(n);
    orbit.points.push_back(x);

    TorusPoint cur = x;
    const int d = int(f.degree());
    for (int k = 0; k < n; ++k) {
        auto branches = preimages_lifted(f, cur.lift());
        std::vector<double> w(d);
        if (weighting == Weighting::bernoulli) {
            for (int i = 0; i < d; ++i) w[i] = 1.0 / d;
        } else {
            double sum = 0.0;
            for (int i = 0; i < d; ++i) {
                w[i] = 1.0 / branches[i].abs_det;
                sum += w[i];
            }
            if (std::fabs(sum - 1.0) > kTolConservative) {
                std::ostringstream os;
                os << "jacobian weighting invalid: fiber weights sum to " << sum
                   << " at step " << k;
                throw DomainError(os.str());
            }
            for (double& wi : w) wi /= sum;
        }
        double u = rng.uniform();
        int pick = d - 1;
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            acc += w[i];
            if (u < acc) { pick = i; break; }
        }
        cur = branches[pick].point;
        orbit.points.push_back(cur);
        orbit.word.push_back(branches[pick].label);
        orbit.steps.push_back(branches[pick].deriv);
        orbit.weights.push_back(std::move(w));
    }
    return orbit;
}

}  // namespace endolab
