#pragma once

// Evaluatable self-covers of the 2-torus. Every supported family exposes an
// equivariant lift of R^2 (lift(x+v) = lift(x) + L v for the integer linear
// part L) whose inverse is a global diffeomorphism of R^2. Point preimages,
// the solenoid inverse and backward curve iteration all reduce to evaluating
// that lift inverse at shifted arguments.

#include <memory>
#include <string>
#include <vector>

#include "endolab/geometry.hpp"
#include "endolab/lattice.hpp"

namespace endolab {

struct Jet2 {
    TorusPoint value;
    Mat2 D;
    SymTensor2 D2;
};

enum class MapKind { linear, shear, composite, perturbed_cover };

enum class ShearAxis { horizontal, vertical };

class MapImpl;

// Immutable value handle; cheap to copy, safe to share across threads.
class TorusMap {
public:
    TorusMap() = default;
    explicit TorusMap(std::shared_ptr<const MapImpl> impl);

    bool valid() const { return impl_ != nullptr; }

    TorusPoint eval(const TorusPoint& p) const;
    Vec2 lift(const Vec2& x) const;
    Vec2 lift_inverse(const Vec2& x) const;
    Jet2 jet2(const TorusPoint& p) const;
    Mat2 derivative(const TorusPoint& p) const;
    double det_at(const TorusPoint& p) const;

    MapKind kind() const;
    const IntMatrix2& linear_part() const;
    std::int64_t degree() const;
    const CosetSystem& cosets() const;

    // compact textual form, parseable by the config front end
    std::string describe() const;

    const MapImpl& impl() const { return *impl_; }
    std::shared_ptr<const MapImpl> impl_ptr() const { return impl_; }

private:
    std::shared_ptr<const MapImpl> impl_;
};

TorusMap make_linear(const IntMatrix2& A);
TorusMap make_shear(double s, ShearAxis axis);
// f after g (evaluation order: g first); composite depth is capped at 8 factors
TorusMap compose(const TorusMap& f, const TorusMap& g);

// jet of the composition outer.inner, where outer is evaluated at inner.value
Jet2 chain_jets(const Jet2& outer, const Jet2& inner);

// --- implementation interface (exposed so tests can add synthetic families) ---

class MapImpl {
public:
    virtual ~MapImpl() = default;

    virtual Vec2 lift(const Vec2& x) const = 0;
    virtual Vec2 lift_inverse(const Vec2& x) const = 0;
    virtual Jet2 jet2(const TorusPoint& p) const = 0;
    virtual MapKind kind() const = 0;
    virtual std::string describe() const = 0;

    const IntMatrix2& linear_part() const { return linear_; }
    const CosetSystem& cosets() const { return cosets_; }
    std::int64_t degree() const { return linear_.degree(); }

protected:
    // derived constructors must call this once the linear part is known
    void init_linear(const IntMatrix2& L);

    IntMatrix2 linear_ = IntMatrix2::identity();
    CosetSystem cosets_;
};

}  // namespace endolab
