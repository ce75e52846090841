#pragma once

// Backward-expansion-on-average functionals: the fiber average
// I(x,v;f^n) = d^{-n} sum over y in f^{-n}(x) of log||(Df^n_y)^{-1} v||,
// its infimum over directions, finite-scale estimates of C(f) and R^-(f),
// the nested tree identity behind their equivalence, and the invariant-cone
// verification around an expanding preimage branch.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "endolab/map.hpp"
#include "endolab/preimage.hpp"
#include "endolab/solenoid.hpp"

namespace endolab {

struct DirectionGrid {
    int size = 64;
    double theta(int j) const;
    Vec2 direction(int j) const;
};

// leaf cocycle inverses (Df^n_y)^{-1} of the depth-n tree, in branch order
std::vector<Mat2> leaf_inverse_cocycles(const TorusMap& f, const TorusPoint& x, int n,
                                        std::int64_t node_cap = kDefaultNodeCap);

double I_n(const TorusMap& f, const TorusPoint& x, const Vec2& v, int n,
           std::int64_t node_cap = kDefaultNodeCap);

struct DirectionInfimum {
    double value = 0.0;
    double theta = 0.0;
    Vec2 direction;
};

// min over a direction grid refined by golden-section search in theta
DirectionInfimum I_inf_direction(const TorusMap& f, const TorusPoint& x, int n,
                                 int dir_grid = 64, std::int64_t node_cap = kDefaultNodeCap);

struct ExpansionSample {
    double x = 0.0, y = 0.0;
    double theta_min = 0.0;
    double value = 0.0;  // inf_v I(x,v;f^N) / N
};

struct ExpansionReport {
    std::string map_id;
    int N = 0;
    int spatial_grid = 0;
    int direction_grid = 0;
    std::vector<ExpansionSample> samples;
    double c_estimate = 0.0;  // min over samples
    double max_value = 0.0;
    std::optional<double> r_minus;
};

ExpansionReport C_estimate(const TorusMap& f, int N, int spatial_grid, int direction_grid,
                           unsigned threads = 0, std::int64_t node_cap = kDefaultNodeCap);

// | I(x,v;f^{nm}) - sum_{i<n} sum_{y in f^{-im}(x)} d^{-im} I(y, F_y^{-im}v; f^m) |
double verify_tree_identity(const TorusMap& f, const TorusPoint& x, const Vec2& v, int n,
                            int m, std::int64_t node_cap = kDefaultNodeCap);

// (1/n) log^+ of the largest ||(Df^n)^{-1}|| seen over forward cocycles at
// grid points, enriched by all depth-n branch cocycles rooted at a coarse
// subgrid when d^n fits the node cap
double R_minus_estimate(const TorusMap& f, int n, int grid, unsigned threads = 0,
                        std::int64_t node_cap = kDefaultNodeCap);

struct ExpandingPreimage {
    TorusPoint y;
    double lambda = 0.0;     // ||(Df^N_y)^{-1} v||
    Vec2 v_pulled;           // normalized (Df^N_y)^{-1} v
    Mat2 inverse_cocycle;    // (Df^N_y)^{-1}
    SymbolWord word;
};

// the leaf maximizing ||(Df^N_y)^{-1} v||, if it expands (lambda > 1)
std::optional<ExpandingPreimage> find_expanding_preimage(const TorusMap& f, const TorusPoint& x,
                                                         const Vec2& v, int N,
                                                         std::int64_t node_cap = kDefaultNodeCap);

struct Cone {
    Vec2 axis;           // unit
    double half_slope;   // eps > 0
    bool contains(const Vec2& w) const;
};

struct ConeCheckReport {
    bool applicable = false;  // false when the eps formula is nonpositive
    bool pass = false;
    double lambda = 0.0;
    double eps = 0.0;
    double df_inf = 0.0;        // grid estimate of ||Df||_inf
    double K = 0.0;             // grid estimate of min |det Df^N|
    double min_expansion = 0.0; // over sampled cone directions
    double max_slope_ratio = 0.0;
};

// checks (Df^N_y)^{-1} C(v,eps) within C(v_y,eps) with expansion > 1, with
// eps = 0.95 * (1/2) min{(lambda-1)/||Df||_inf, (lambda^2 K - 1)/(K ||Df||_inf^2)}
ConeCheckReport cone_invariance_check(const TorusMap& f, const TorusPoint& x, const Vec2& v,
                                      int N, int n_dirs,
                                      std::int64_t node_cap = kDefaultNodeCap);

}  // namespace endolab
