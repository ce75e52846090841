#include "endolab/perturbation.hpp"

#include <cmath>
#include <sstream>

#include "endolab/parallel.hpp"
#include "endolab/preimage.hpp"
#include "endolab/rng.hpp"

namespace endolab {

namespace {

// normalized profile h(t) = exp(1 - 1/(1-t^2)) on (-1,1), zero outside
double profile(double t) {
    double s = 1.0 - t * t;
    if (s <= 0.0) return 0.0;
    return std::exp(1.0 - 1.0 / s);
}

double profile_d1(double t) {
    double s = 1.0 - t * t;
    if (s <= 0.0) return 0.0;
    return -2.0 * t / (s * s) * profile(t);
}

double profile_d2(double t) {
    double s = 1.0 - t * t;
    if (s <= 0.0) return 0.0;
    double g = -2.0 * t / (s * s);
    double gp = -2.0 / (s * s) - 8.0 * t * t / (s * s * s);
    return (gp + g * g) * profile(t);
}

constexpr double kAmplitudeSafety = 0.95;

}  // namespace

double bump_shape_constant() {
    // |h'| vanishes at both ends of (0,1) with a single interior maximum
    static const double c0 = [] {
        double lo = 0.0, hi = 1.0;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
        double fa = std::fabs(profile_d1(a)), fb = std::fabs(profile_d1(b));
        for (int it = 0; it < 200; ++it) {
            if (fa < fb) {
                lo = a; a = b; fa = fb;
                b = lo + gr * (hi - lo); fb = std::fabs(profile_d1(b));
            } else {
                hi = b; b = a; fb = fa;
                a = hi - gr * (hi - lo); fa = std::fabs(profile_d1(a));
            }
        }
        return 2.0 * std::max(fa, fb);
    }();
    return c0;
}

double Bump::value(double x) const {
    if (amplitude == 0.0) return 0.0;
    return amplitude * profile(2.0 * (x - center) / delta);
}

double Bump::d1(double x) const {
    if (amplitude == 0.0) return 0.0;
    return amplitude * (2.0 / delta) * profile_d1(2.0 * (x - center) / delta);
}

double Bump::d2(double x) const {
    if (amplitude == 0.0) return 0.0;
    return amplitude * (4.0 / (delta * delta)) * profile_d2(2.0 * (x - center) / delta);
}

Bump make_bump(double p, double delta, double eps) {
    if (!std::isfinite(p) || !std::isfinite(delta) || !std::isfinite(eps))
        throw DomainError("make_bump: non-finite parameter");
    if (delta <= 0.0) throw DomainError("make_bump: delta must be positive");
    if (eps < 0.0) throw DomainError("make_bump: eps must be nonnegative");
    if (eps >= delta) throw DomainError("make_bump: requires eps < delta");
    Bump b;
    b.center = p;
    b.delta = delta;
    b.eps = eps;
    // sup|phi'| = amplitude * C0 / delta, pinned at kAmplitudeSafety * eps;
    // then 0 <= phi <= amplitude < eps holds as well since delta/C0 < 1
    b.amplitude = kAmplitudeSafety * eps * delta / bump_shape_constant();
    return b;
}

CircleCover::CircleCover(int k, double p, double delta, double eps) : k_(k) {
    if (k < 2) throw DomainError("circle cover: degree k must be >= 2");
    if (!(delta < 1.0 / (2.0 * k)))
        throw DomainError("circle cover: requires delta < 1/(2k)");
    if (!(eps < 0.5 * (k - 1)) && eps != 0.0)
        throw DomainError("circle cover: requires eps < (k-1)/2");
    bump_ = make_bump(wrap(p, 0.0).x, delta, eps);

    // C^1 continuity at the four piece junctions p±delta and p+1/k±delta
    for (double x : {bump_.center - delta, bump_.center + delta,
                     bump_.center + 1.0 / k - delta, bump_.center + 1.0 / k + delta}) {
        double h = 1e-12;
        double defect = std::fabs(lift(x + h) - lift(x - h));
        double defect1 = std::fabs(lift_d1(x + h) - lift_d1(x - h));
        if (defect > 1e-9 || defect1 > 1e-6)
            throw ConstructionError("circle cover: continuity defect at a piece junction");
    }
    // every branch stays monotone
    double min_d1 = 1e300;
    for (int i = 0; i < 4096; ++i) min_d1 = std::min(min_d1, lift_d1((i + 0.5) / 4096.0));
    if (min_d1 <= 0.0)
        throw ConstructionError("circle cover: derivative vanishes, not a cover");
}

CircleCover make_s_epsilon(int k, double p, double delta, double eps) {
    return CircleCover(k, p, delta, eps);
}

void CircleCover::psi_jet(double x, double& v, double& d1, double& d2) const {
    v = d1 = d2 = 0.0;
    if (bump_.amplitude == 0.0) return;
    const double p = bump_.center;
    const double half_support = 0.5 * bump_.delta;
    double u0 = wrap_symmetric(x - p);
    if (std::fabs(u0) < half_support) {
        double z = p + u0;
        v = bump_.value(z);
        d1 = bump_.d1(z);
        d2 = bump_.d2(z);
        return;
    }
    double u1 = wrap_symmetric(x - p - 1.0 / k_);
    if (std::fabs(u1) < half_support) {
        // S = R_k - phi . T^{-1} on I_1
        double w = p + 1.0 / k_ + u1;
        double z = inverse_T(w);
        double tp = 1.0 + (2.0 / k_) * bump_.d1(z);
        double tpp = (2.0 / k_) * bump_.d2(z);
        v = -bump_.value(z);
        d1 = -bump_.d1(z) / tp;
        d2 = -(bump_.d2(z) * tp - bump_.d1(z) * tpp) / (tp * tp * tp);
    }
}

double CircleCover::lift(double x) const {
    double v, d1, d2;
    psi_jet(x, v, d1, d2);
    return k_ * x + v;
}

double CircleCover::lift_d1(double x) const {
    double v, d1, d2;
    psi_jet(x, v, d1, d2);
    return k_ + d1;
}

double CircleCover::lift_d2(double x) const {
    double v, d1, d2;
    psi_jet(x, v, d1, d2);
    return d2;
}

void CircleCover::lift_jet(double x, double& value, double& d1, double& d2) const {
    double v;
    psi_jet(x, v, d1, d2);
    value = k_ * x + v;
    d1 += k_;
}

double CircleCover::eval(double x) const { return wrap(lift(x), 0.0).x; }

double CircleCover::forward_T(double x) const {
    return x + 1.0 / k_ + (2.0 / k_) * bump_.value(x);
}

double CircleCover::inverse_T(double w) const {
    // T' >= 1 - (2/k)|phi'| > 0, Newton from the unperturbed solution
    double x = w - 1.0 / k_;
    for (int it = 0; it < 50; ++it) {
        double r = forward_T(x) - w;
        if (std::fabs(r) < 1e-15) return x;
        double tp = 1.0 + (2.0 / k_) * bump_.d1(x);
        x -= r / tp;
    }
    if (std::fabs(forward_T(x) - w) > 1e-12)
        throw NumericalError("circle cover: inverse of T did not converge");
    return x;
}

double CircleCover::lift_inverse(double y) const {
    const double amp = bump_.amplitude;
    double lo = (y - amp) / k_ - 1e-12;
    double hi = (y + amp) / k_ + 1e-12;
    // bisection to 1e-6 (lift is strictly increasing)
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        if (lift(mid) < y) lo = mid; else hi = mid;
    }
    // Newton to 1e-14, safeguarded by the bracket
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 40; ++it) {
        double r = lift(x) - y;
        if (r < 0.0) lo = std::max(lo, x); else hi = std::min(hi, x);
        double step = r / lift_d1(x);
        double next = x - step;
        if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) < 1e-15 * (1.0 + std::fabs(x)) && std::fabs(r) < 1e-13) {
            x = next;
            break;
        }
        x = next;
    }
    if (std::fabs(lift(x) - y) > 1e-12 * (1.0 + std::fabs(y)))
        throw NumericalError("circle cover: branch inverse did not converge");
    return x;
}

std::vector<double> CircleCover::preimages(double y) const {
    double base = wrap(y, 0.0).x;
    std::vector<double> out;
    out.reserve(k_);
    for (int j = 0; j < k_; ++j) out.push_back(wrap(lift_inverse(base + j), 0.0).x);
    return out;
}

double check_conservative_1d(const CircleCover& S, int samples) {
    if (samples < 1) throw DomainError("check_conservative_1d: need samples >= 1");
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double y = (i + 0.5) / samples;
        auto zs = S.preimages(y);
        if (int(zs.size()) != S.k())
            throw ConstructionError("check_conservative_1d: wrong preimage count");
        double sum = 0.0;
        for (double z : zs) {
            if (std::fabs(wrap_symmetric(S.eval(z) - y)) > 1e-10)
                throw ConstructionError("check_conservative_1d: branch misses its target");
            sum += 1.0 / std::fabs(S.lift_d1(z));
        }
        worst = std::max(worst, std::fabs(sum - 1.0));
    }
    return worst;
}

namespace {

class PerturbedCoverImpl final : public MapImpl {
public:
    PerturbedCoverImpl(const IntMatrix2& E, double eps, double delta, double center)
        : data_{E, smith_normal_form(E), eps, delta, center},
          cover_(int(data_.smith.tau1()), center, delta, eps),
          tau2_(data_.smith.tau2()) {
        if (E.degree() < 2) throw DomainError("make_g_epsilon: requires |det E| >= 2");
        if (data_.smith.tau1() < 2)
            throw DomainError("make_g_epsilon: tau1 = 1, no circle factor to perturb");
        U_ = data_.smith.U.to_mat();
        V_ = data_.smith.V.to_mat();
        // unimodular integer inverses are exact
        double du = double(data_.smith.U.det()), dv = double(data_.smith.V.det());
        Uinv_ = data_.smith.U.adjugate().to_mat() * (1.0 / du);
        Vinv_ = data_.smith.V.adjugate().to_mat() * (1.0 / dv);
        init_linear(E);
    }

    Vec2 lift(const Vec2& x) const override {
        Vec2 v = V_ * x;
        Vec2 a{cover_.lift(v.x), double(tau2_) * v.y};
        return U_ * a;
    }

    Vec2 lift_inverse(const Vec2& x) const override {
        Vec2 a = Uinv_ * x;
        Vec2 v{cover_.lift_inverse(a.x), a.y / double(tau2_)};
        return Vinv_ * v;
    }

    Jet2 jet2(const TorusPoint& p) const override {
        Vec2 v = V_ * p.lift();
        double s, s1, s2;
        cover_.lift_jet(v.x, s, s1, s2);
        Vec2 axis_val{s, double(tau2_) * v.y};

        Jet2 inner{wrap(v), V_, SymTensor2::zero()};
        Jet2 axis;
        axis.value = wrap(axis_val);
        axis.D = {s1, 0.0, 0.0, double(tau2_)};
        axis.D2.comp(0, 0, 0) = s2;
        Jet2 outer{wrap(U_ * axis_val), U_, SymTensor2::zero()};
        return chain_jets(outer, chain_jets(axis, inner));
    }

    MapKind kind() const override { return MapKind::perturbed_cover; }

    std::string describe() const override {
        std::ostringstream os;
        os << "perturbed(" << data_.E.e11 << "," << data_.E.e12 << "," << data_.E.e21 << ","
           << data_.E.e22 << ";" << data_.eps << ";" << data_.delta << ";" << data_.center
           << ")";
        return os.str();
    }

    const PerturbedCover2D& data() const { return data_; }
    const CircleCover& cover() const { return cover_; }

private:
    PerturbedCover2D data_;
    CircleCover cover_;
    std::int64_t tau2_;
    Mat2 U_, V_, Uinv_, Vinv_;
};

}  // namespace

TorusMap make_g_epsilon(const IntMatrix2& E, double eps, std::optional<double> delta,
                        std::optional<double> center) {
    SmithForm sf = smith_normal_form(E);  // early, for the default delta
    double k = double(sf.tau1());
    double dlt = delta.value_or(1.0 / (4.0 * k));
    double p = center.value_or(1.0 / (4.0 * k));
    return TorusMap(std::make_shared<PerturbedCoverImpl>(E, eps, dlt, p));
}

const PerturbedCover2D* as_perturbed(const TorusMap& m) {
    if (!m.valid() || m.kind() != MapKind::perturbed_cover) return nullptr;
    return &static_cast<const PerturbedCoverImpl&>(m.impl()).data();
}

double check_conservative_2d(const TorusMap& g, int samples, std::uint64_t seed) {
    if (samples < 1) throw DomainError("check_conservative_2d: need samples >= 1");
    SplitMix64 rng(seed);
    const std::int64_t d = g.degree();
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        TorusPoint q = wrap(rng.uniform(), rng.uniform());
        auto fiber = preimages_lifted(g, q.lift());
        if (std::int64_t(fiber.size()) != d)
            throw ConstructionError("check_conservative_2d: wrong preimage count");
        double sum = 0.0;
        for (const auto& br : fiber) {
            if (torus_distance(g.eval(br.point), q) > 1e-9)
                throw ConstructionError("check_conservative_2d: branch misses its target");
            sum += 1.0 / br.abs_det;
        }
        worst = std::max(worst, std::fabs(sum - 1.0));
    }
    return worst;
}

namespace {

double quadrature_log_det(const TorusMap& g, int m, unsigned threads) {
    std::vector<double> row_sums(m, 0.0);
    parallel_for(m, threads, [&](std::size_t i) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            TorusPoint p{(double(i) + 0.5) / m, (double(j) + 0.5) / m};
            acc += std::log(std::fabs(g.det_at(p)));
        }
        row_sums[i] = acc;
    });
    double total = 0.0;
    for (double r : row_sums) total += r;  // fixed merge order
    return total / (double(m) * double(m));
}

}  // namespace

FoldingEntropyResult folding_entropy_leb(const TorusMap& g, int grid, unsigned threads) {
    if (grid < 2) throw DomainError("folding_entropy_leb: grid too small");
    double probe = check_conservative_2d(g, 64, 2026);
    if (probe > 1e-8) {
        std::ostringstream os;
        os << "folding_entropy_leb: map is not conservative (probe residual " << probe
           << "), J_Leb = |det Df| does not apply";
        throw DomainError(os.str());
    }
    FoldingEntropyResult res;
    res.grid = grid;
    res.value = quadrature_log_det(g, grid, threads);
    res.refinement_error = std::fabs(res.value - quadrature_log_det(g, grid / 2, threads));
    return res;
}

}  // namespace endolab
