#include "endolab/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "endolab/parallel.hpp"

namespace endolab {

double DirectionGrid::theta(int j) const { return double(j) * std::numbers::pi / size; }
Vec2 DirectionGrid::direction(int j) const {
    double t = theta(j);
    return {std::cos(t), std::sin(t)};
}

namespace {

// DFS over the preimage tree accumulating the leaf cocycles M = Df^n . branch
template <typename LeafFn>
void walk_leaf_cocycles(const TorusMap& f, const Vec2& lift, const Mat2& M, int rem,
                        LeafFn&& leaf) {
    if (rem == 0) {
        leaf(lift, M);
        return;
    }
    for (const auto& br : preimages_lifted(f, lift))
        walk_leaf_cocycles(f, br.lift, M * br.deriv, rem - 1, leaf);
}

double I_n_from_lift(const TorusMap& f, const Vec2& lift, const Vec2& v, int n,
                     std::int64_t node_cap) {
    std::int64_t leaves = check_tree_capacity(f.degree(), n, node_cap);
    double sum = 0.0;
    walk_leaf_cocycles(f, lift, Mat2::identity(), n,
                       [&](const Vec2&, const Mat2& M) { sum += std::log(M.solve(v).norm()); });
    return sum / double(leaves);
}

double golden_min(double lo, double hi, const std::function<double(double)>& fn, double tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    double fa = fn(a), fb = fn(b);
    while (hi - lo > tol) {
        if (fa < fb) {
            hi = b; b = a; fb = fa;
            a = hi - gr * (hi - lo); fa = fn(a);
        } else {
            lo = a; a = b; fa = fb;
            b = lo + gr * (hi - lo); fb = fn(b);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<Mat2> leaf_inverse_cocycles(const TorusMap& f, const TorusPoint& x, int n,
                                        std::int64_t node_cap) {
    std::int64_t leaves = check_tree_capacity(f.degree(), n, node_cap);
    std::vector<Mat2> out;
    out.reserve(leaves);
    walk_leaf_cocycles(f, x.lift(), Mat2::identity(), n,
                       [&](const Vec2&, const Mat2& M) { out.push_back(M.inverse()); });
    return out;
}

double I_n(const TorusMap& f, const TorusPoint& x, const Vec2& v, int n,
           std::int64_t node_cap) {
    return I_n_from_lift(f, x.lift(), v, n, node_cap);
}

DirectionInfimum I_inf_direction(const TorusMap& f, const TorusPoint& x, int n, int dir_grid,
                                 std::int64_t node_cap) {
    if (dir_grid < 1) throw DomainError("I_inf_direction: empty direction grid");
    auto inv = leaf_inverse_cocycles(f, x, n, node_cap);
    auto value_at = [&](double theta) {
        Vec2 v{std::cos(theta), std::sin(theta)};
        double sum = 0.0;
        for (const Mat2& Mi : inv) sum += std::log((Mi * v).norm());
        return sum / double(inv.size());
    };

    DirectionGrid grid{dir_grid};
    int best = 0;
    double best_val = value_at(grid.theta(0));
    for (int j = 1; j < dir_grid; ++j) {
        double val = value_at(grid.theta(j));
        if (val < best_val) { best_val = val; best = j; }
    }
    // refine inside the two grid cells around the best direction
    double step = std::numbers::pi / dir_grid;
    double theta0 = grid.theta(best);
    double refined = golden_min(theta0 - step, theta0 + step, value_at, 1e-8);
    double refined_val = value_at(refined);

    DirectionInfimum out;
    if (refined_val <= best_val) {
        out.value = refined_val;
        out.theta = refined;
    } else {
        out.value = best_val;
        out.theta = theta0;
    }
    out.direction = {std::cos(out.theta), std::sin(out.theta)};
    return out;
}

ExpansionReport C_estimate(const TorusMap& f, int N, int spatial_grid, int direction_grid,
                           unsigned threads, std::int64_t node_cap) {
    if (spatial_grid < 1 || direction_grid < 1)
        throw DomainError("C_estimate: grid sizes must be >= 1");
    check_tree_capacity(f.degree(), N, node_cap);

    ExpansionReport rep;
    rep.map_id = f.describe();
    rep.N = N;
    rep.spatial_grid = spatial_grid;
    rep.direction_grid = direction_grid;
    rep.samples.resize(std::size_t(spatial_grid) * spatial_grid);

    parallel_for(rep.samples.size(), threads, [&](std::size_t idx) {
        int i = int(idx) / spatial_grid, j = int(idx) % spatial_grid;
        TorusPoint p{(i + 0.5) / spatial_grid, (j + 0.5) / spatial_grid};
        auto inf = I_inf_direction(f, p, N, direction_grid, node_cap);
        rep.samples[idx] = {p.x, p.y, inf.theta, inf.value / N};
    });

    rep.c_estimate = rep.samples.front().value;
    rep.max_value = rep.samples.front().value;
    for (const auto& s : rep.samples) {
        rep.c_estimate = std::min(rep.c_estimate, s.value);
        rep.max_value = std::max(rep.max_value, s.value);
    }
    return rep;
}

double verify_tree_identity(const TorusMap& f, const TorusPoint& x, const Vec2& v, int n,
                            int m, std::int64_t node_cap) {
    if (n < 1 || m < 1) throw DomainError("verify_tree_identity: n, m must be >= 1");
    check_tree_capacity(f.degree(), n * m, node_cap);

    double lhs = I_n_from_lift(f, x.lift(), v, n * m, node_cap);

    // right side: at every node y of depth i*m, the fiber average over the
    // next m steps of the renormalized pulled-back direction F_y^{-im} v
    double rhs = 0.0;
    std::vector<std::pair<Vec2, Mat2>> nodes{{x.lift(), Mat2::identity()}};
    double weight = 1.0;  // d^{-im}
    for (int i = 0; i < n; ++i) {
        for (const auto& [lift, M] : nodes)
            rhs += weight * I_n_from_lift(f, lift, M.solve(v).normalized(), m, node_cap);
        if (i + 1 == n) break;
        for (int s = 0; s < m; ++s) {
            std::vector<std::pair<Vec2, Mat2>> next;
            next.reserve(nodes.size() * f.degree());
            for (const auto& [lift, M] : nodes)
                for (const auto& br : preimages_lifted(f, lift))
                    next.emplace_back(br.lift, M * br.deriv);
            nodes = std::move(next);
            weight /= double(f.degree());
        }
    }
    return std::fabs(lhs - rhs);
}

double R_minus_estimate(const TorusMap& f, int n, int grid, unsigned threads,
                        std::int64_t node_cap) {
    if (grid < 1) throw DomainError("R_minus_estimate: grid must be >= 1");
    if (n < 1) throw DomainError("R_minus_estimate: n must be >= 1");

    // forward cocycles at grid points, rescaled each step to avoid overflow
    std::vector<double> best_per_row(grid, -1e300);
    parallel_for(grid, threads, [&](std::size_t gi) {
        double row_best = -1e300;
        for (int gj = 0; gj < grid; ++gj) {
            TorusPoint p{(double(gi) + 0.5) / grid, (gj + 0.5) / grid};
            Mat2 M = Mat2::identity();
            double log_scale = 0.0;
            TorusPoint cur = p;
            for (int k = 0; k < n; ++k) {
                M = f.derivative(cur) * M;
                double s = M.max_abs();
                if (s > 1e100) { M = M * (1.0 / s); log_scale += std::log(s); }
                cur = f.eval(cur);
            }
            // ||(Df^n)^{-1}|| = 1 / sigma_min(Df^n)
            double log_inv_norm = -(log_scale + std::log(M.sigma_min()));
            row_best = std::max(row_best, log_inv_norm);
        }
        best_per_row[gi] = row_best;
    });
    double best = *std::max_element(best_per_row.begin(), best_per_row.end());

    // branch cocycles rooted at a coarse fixed subgrid, when d^n is enumerable
    std::int64_t leaves = 1;
    bool fits = true;
    for (int k = 0; k < n && fits; ++k) {
        if (leaves > node_cap / f.degree()) fits = false;
        leaves *= f.degree();
    }
    if (fits && leaves <= node_cap) {
        int sub = std::min(grid, 8);
        for (int gi = 0; gi < sub; ++gi)
            for (int gj = 0; gj < sub; ++gj) {
                TorusPoint p{(gi + 0.5) / sub, (gj + 0.5) / sub};
                walk_leaf_cocycles(f, p.lift(), Mat2::identity(), n,
                                   [&](const Vec2&, const Mat2& M) {
                                       best = std::max(best, -std::log(M.sigma_min()));
                                   });
            }
    }
    return std::max(0.0, best) / n;
}

std::optional<ExpandingPreimage> find_expanding_preimage(const TorusMap& f, const TorusPoint& x,
                                                         const Vec2& v, int N,
                                                         std::int64_t node_cap) {
    PreimageTree tree(f, x, N, node_cap);
    std::int64_t best_idx = -1;
    double best = -1.0;
    for (std::int64_t i = 0; i < tree.leaf_count(); ++i) {
        double lam = tree.leaf_cocycle(i).solve(v).norm();
        if (lam > best) { best = lam; best_idx = i; }
    }
    if (best <= 1.0) return std::nullopt;
    ExpandingPreimage out;
    out.y = tree.leaf_points()[best_idx];
    out.lambda = best;
    out.inverse_cocycle = tree.leaf_cocycle(best_idx).inverse();
    out.v_pulled = tree.leaf_cocycle(best_idx).solve(v).normalized();
    out.word.letters = tree.leaf_word(best_idx);
    return out;
}

bool Cone::contains(const Vec2& w) const {
    double w1 = w.dot(axis);
    double w2 = w.dot(axis.perp());
    return std::fabs(w2) <= half_slope * std::fabs(w1) * (1.0 + 1e-12);
}

ConeCheckReport cone_invariance_check(const TorusMap& f, const TorusPoint& x, const Vec2& v,
                                      int N, int n_dirs, std::int64_t node_cap) {
    if (n_dirs < 2) throw DomainError("cone_invariance_check: need n_dirs >= 2");
    auto fe = find_expanding_preimage(f, x, v, N, node_cap);
    if (!fe)
        throw DomainError("cone_invariance_check: no expanding preimage (lambda <= 1)");

    ConeCheckReport rep;
    rep.lambda = fe->lambda;

    // grid estimates of ||Df||_inf and K = min |det Df^N|
    const int m = 128;
    double df_inf = 0.0, K = 1e300;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            TorusPoint p{(i + 0.5) / m, (j + 0.5) / m};
            df_inf = std::max(df_inf, f.derivative(p).op_norm());
            TorusPoint cur = p;
            double det_acc = 1.0;
            for (int k = 0; k < N; ++k) {
                det_acc *= std::fabs(f.det_at(cur));
                cur = f.eval(cur);
            }
            K = std::min(K, det_acc);
        }
    rep.df_inf = df_inf;
    rep.K = K;

    double lam = fe->lambda;
    double eps = 0.5 * std::min((lam - 1.0) / df_inf, (lam * lam * K - 1.0) / (K * df_inf * df_inf));
    eps *= 0.95;  // safety deflation, the grid sups are not certified
    rep.eps = eps;
    if (eps <= 0.0) {
        rep.applicable = false;
        return rep;
    }
    rep.applicable = true;

    Vec2 axis = v.normalized();
    Cone source{axis, eps};
    Cone target{fe->v_pulled, eps};
    (void)source;

    rep.pass = true;
    rep.min_expansion = 1e300;
    rep.max_slope_ratio = 0.0;
    for (int i = 0; i < n_dirs; ++i) {
        double s = -1.0 + 2.0 * double(i) / (n_dirs - 1);  // covers both boundary rays
        Vec2 w = axis + axis.perp() * (eps * s);
        Vec2 u = fe->inverse_cocycle * w;
        double u1 = u.dot(fe->v_pulled);
        double u2 = u.dot(fe->v_pulled.perp());
        double ratio = std::fabs(u2) / (eps * std::fabs(u1));
        rep.max_slope_ratio = std::max(rep.max_slope_ratio, ratio);
        double expansion = u.norm() / w.norm();
        rep.min_expansion = std::min(rep.min_expansion, expansion);
        if (ratio > 1.0 || expansion <= 1.0) rep.pass = false;
    }
    return rep;
}

}  // namespace endolab
