#pragma once

// Conservative perturbations with non-constant Jacobian: a smooth compactly
// supported bump, the degree-k circle cover S_eps built from it, the product
// perturbation A_eps = S_eps x R_tau2 and the torus map g_eps = U . A_eps . V
// assembled through the Smith normal form of an integer matrix, together with
// the exact conservativity diagnostics and the folding entropy of Lebesgue.

#include <cstdint>
#include <optional>
#include <vector>

#include "endolab/lattice.hpp"
#include "endolab/map.hpp"

namespace endolab {

// phi(x) = a * exp(1 - 1/(1-t^2)) with t = 2(x-p)/delta, supported on
// |x - p| <= delta/2. The amplitude a is scaled so that 0 <= phi <= eps,
// phi(p) > 0 and |phi'| < eps all hold (the sup of |phi'| is pinned just
// below eps, so eps is the C^1 size of the perturbation).
struct Bump {
    double center = 0.0;
    double delta = 0.0;      // half-width of the surrounding interval I_0
    double eps = 0.0;        // requested C^1 size
    double amplitude = 0.0;  // value at the center

    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;
};

// largest slope of the normalized bump profile, doubled: sup_t |d/dt e^{1-1/(1-t^2)}| * 2
double bump_shape_constant();

Bump make_bump(double p, double delta, double eps);

class CircleCover {
public:
    CircleCover(int k, double p, double delta, double eps);

    int k() const { return k_; }
    const Bump& bump() const { return bump_; }
    double interval_center(int j) const { return bump_.center + double(j) / k_; }
    double delta() const { return bump_.delta; }
    double eps() const { return bump_.eps; }

    // lift R -> R with S(x+1) = S(x) + k, strictly increasing
    double lift(double x) const;
    double lift_d1(double x) const;
    double lift_d2(double x) const;
    void lift_jet(double x, double& value, double& d1, double& d2) const;

    double eval(double x) const;  // on the circle

    // unique solution of lift(z) = y (bracketed bisection, then Newton)
    double lift_inverse(double y) const;

    // the k circle preimages of y, branch j solving lift(z) = frac(y) + j
    std::vector<double> preimages(double y) const;

    // T(x) = x + 1/k + (2/k) phi(x) on I_0, and its inverse on I_1
    double forward_T(double x) const;
    double inverse_T(double w) const;

private:
    // perturbation part psi(x) = lift(x) - k x and its derivatives; periodic
    void psi_jet(double x, double& v, double& d1, double& d2) const;

    int k_;
    Bump bump_;
};

CircleCover make_s_epsilon(int k, double p, double delta, double eps);

// max over sampled y of | sum_z 1/|S'(z)| - 1 |, z over the k branch preimages
double check_conservative_1d(const CircleCover& S, int samples);

struct PerturbedCover2D {
    IntMatrix2 E;
    SmithForm smith;
    double eps = 0.0;
    double delta = 0.0;
    double center = 0.0;
};

// g_eps = U . A_eps . V for E = U diag(tau1,tau2) V; the circle factor with
// degree tau1 carries the perturbation. delta and p default to 1/(4 tau1).
TorusMap make_g_epsilon(const IntMatrix2& E, double eps,
                        std::optional<double> delta = std::nullopt,
                        std::optional<double> center = std::nullopt);

// metadata accessor; nullptr when the map is not a perturbed cover
const PerturbedCover2D* as_perturbed(const TorusMap& m);

// max over `samples` quasi-random points q of | sum_z 1/|det Dg(z)| - 1 |
double check_conservative_2d(const TorusMap& g, int samples, std::uint64_t seed = 7);

struct FoldingEntropyResult {
    double value = 0.0;             // midpoint quadrature of log|det Dg| on an m x m grid
    double refinement_error = 0.0;  // |value - value at m/2|
    int grid = 0;
};

// requires g conservative (probe residual < 1e-8), since J_Leb = |det Dg|
// only under Lebesgue invariance
FoldingEntropyResult folding_entropy_leb(const TorusMap& g, int grid, unsigned threads = 0);

}  // namespace endolab
