#include "endolab/map.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace endolab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void MapImpl::init_linear(const IntMatrix2& L) {
    if (L.det() == 0) throw DomainError("torus map: singular linear part");
    linear_ = L;
    cosets_ = coset_representatives(L);
}

TorusMap::TorusMap(std::shared_ptr<const MapImpl> impl) : impl_(std::move(impl)) {}

TorusPoint TorusMap::eval(const TorusPoint& p) const { return wrap(impl_->lift(p.lift())); }
Vec2 TorusMap::lift(const Vec2& x) const { return impl_->lift(x); }
Vec2 TorusMap::lift_inverse(const Vec2& x) const { return impl_->lift_inverse(x); }
Jet2 TorusMap::jet2(const TorusPoint& p) const { return impl_->jet2(p); }
Mat2 TorusMap::derivative(const TorusPoint& p) const { return impl_->jet2(p).D; }
double TorusMap::det_at(const TorusPoint& p) const { return impl_->jet2(p).D.det(); }
MapKind TorusMap::kind() const { return impl_->kind(); }
const IntMatrix2& TorusMap::linear_part() const { return impl_->linear_part(); }
std::int64_t TorusMap::degree() const { return impl_->degree(); }
const CosetSystem& TorusMap::cosets() const { return impl_->cosets(); }
std::string TorusMap::describe() const { return impl_->describe(); }

namespace {

class LinearMap final : public MapImpl {
public:
    explicit LinearMap(const IntMatrix2& A) {
        init_linear(A);
        M_ = A.to_mat();
        Minv_ = M_.inverse();
    }

    Vec2 lift(const Vec2& x) const override { return M_ * x; }
    Vec2 lift_inverse(const Vec2& x) const override { return Minv_ * x; }
    Jet2 jet2(const TorusPoint& p) const override {
        return Jet2{wrap(M_ * p.lift()), M_, SymTensor2::zero()};
    }
    MapKind kind() const override { return MapKind::linear; }
    std::string describe() const override {
        std::ostringstream os;
        os << "linear(" << linear_.e11 << "," << linear_.e12 << "," << linear_.e21 << ","
           << linear_.e22 << ")";
        return os.str();
    }

private:
    Mat2 M_, Minv_;
};

class ShearMap final : public MapImpl {
public:
    ShearMap(double s, ShearAxis axis) : s_(s), axis_(axis) {
        if (!std::isfinite(s)) throw DomainError("shear: non-finite amplitude");
        init_linear(IntMatrix2::identity());
    }

    Vec2 lift(const Vec2& x) const override {
        if (axis_ == ShearAxis::horizontal) return {x.x + s_ * std::sin(kTwoPi * x.y), x.y};
        return {x.x, x.y + s_ * std::sin(kTwoPi * x.x)};
    }
    Vec2 lift_inverse(const Vec2& x) const override {
        if (axis_ == ShearAxis::horizontal) return {x.x - s_ * std::sin(kTwoPi * x.y), x.y};
        return {x.x, x.y - s_ * std::sin(kTwoPi * x.x)};
    }
    Jet2 jet2(const TorusPoint& p) const override {
        Jet2 j;
        j.value = wrap(lift(p.lift()));
        double c = kTwoPi * s_;
        if (axis_ == ShearAxis::horizontal) {
            j.D = {1.0, c * std::cos(kTwoPi * p.y), 0.0, 1.0};
            j.D2.comp(0, 1, 1) = -kTwoPi * c * std::sin(kTwoPi * p.y);
        } else {
            j.D = {1.0, 0.0, c * std::cos(kTwoPi * p.x), 1.0};
            j.D2.comp(1, 0, 0) = -kTwoPi * c * std::sin(kTwoPi * p.x);
        }
        return j;
    }
    MapKind kind() const override { return MapKind::shear; }
    std::string describe() const override {
        std::ostringstream os;
        os << "shear(" << s_ << "," << (axis_ == ShearAxis::horizontal ? "h" : "v") << ")";
        return os.str();
    }

private:
    double s_;
    ShearAxis axis_;
};

class CompositeMap final : public MapImpl {
public:
    explicit CompositeMap(std::vector<TorusMap> factors) : factors_(std::move(factors)) {
        if (factors_.size() > 8)
            throw DomainError("compose: composite depth capped at 8 factors");
        IntMatrix2 L = IntMatrix2::identity();
        for (const auto& f : factors_) L = L * f.linear_part();
        init_linear(L);
    }

    Vec2 lift(const Vec2& x) const override {
        Vec2 v = x;
        for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) v = it->lift(v);
        return v;
    }
    Vec2 lift_inverse(const Vec2& x) const override {
        Vec2 v = x;
        for (const auto& f : factors_) v = f.lift_inverse(v);
        return v;
    }
    Jet2 jet2(const TorusPoint& p) const override {
        Jet2 acc;
        acc.value = p;
        acc.D = Mat2::identity();
        acc.D2 = SymTensor2::zero();
        for (auto it = factors_.rbegin(); it != factors_.rend(); ++it)
            acc = chain_jets(it->jet2(acc.value), acc);
        return acc;
    }
    MapKind kind() const override { return MapKind::composite; }
    std::string describe() const override {
        std::string s;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (i) s += " * ";
            s += factors_[i].describe();
        }
        return s;
    }

    const std::vector<TorusMap>& factors() const { return factors_; }

private:
    std::vector<TorusMap> factors_;
};

}  // namespace

Jet2 chain_jets(const Jet2& f, const Jet2& g) {
    Jet2 h;
    h.value = f.value;
    h.D = f.D * g.D;
    const Vec2 col[2] = {{g.D.a, g.D.c}, {g.D.b, g.D.d}};  // images of e0, e1 under Dg
    const int js[3] = {0, 0, 1}, ks[3] = {0, 1, 1};
    for (int slot = 0; slot < 3; ++slot) {
        Vec2 g2uw{g.D2.t[0][slot], g.D2.t[1][slot]};
        Vec2 r = f.D2.apply(col[js[slot]], col[ks[slot]]) + f.D * g2uw;
        h.D2.t[0][slot] = r.x;
        h.D2.t[1][slot] = r.y;
    }
    return h;
}

TorusMap make_linear(const IntMatrix2& A) {
    return TorusMap(std::make_shared<LinearMap>(A));
}

TorusMap make_shear(double s, ShearAxis axis) {
    return TorusMap(std::make_shared<ShearMap>(s, axis));
}

TorusMap compose(const TorusMap& f, const TorusMap& g) {
    if (!f.valid() || !g.valid()) throw DomainError("compose: invalid map");
    std::vector<TorusMap> factors;
    auto append = [&](const TorusMap& m) {
        if (m.kind() == MapKind::composite) {
            const auto& c = static_cast<const CompositeMap&>(m.impl());
            for (const auto& sub : c.factors()) factors.push_back(sub);
        } else {
            factors.push_back(m);
        }
    };
    append(f);
    append(g);
    return TorusMap(std::make_shared<CompositeMap>(std::move(factors)));
}

}  // namespace endolab
