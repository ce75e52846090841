#include "endolab/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace endolab {

Vec2 Vec2::normalized() const {
    double n = norm();
    if (n == 0.0 || !std::isfinite(n))
        throw NumericalError("cannot normalize zero or non-finite vector");
    return {x / n, y / n};
}

Mat2 Mat2::inverse() const {
    double dt = det();
    if (dt == 0.0 || !std::isfinite(dt))
        throw NumericalError("singular matrix in Mat2::inverse");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

Vec2 Mat2::solve(const Vec2& rhs) const {
    double dt = det();
    if (dt == 0.0 || !std::isfinite(dt))
        throw NumericalError("singular matrix in Mat2::solve");
    return {(d * rhs.x - b * rhs.y) / dt, (-c * rhs.x + a * rhs.y) / dt};
}

double Mat2::max_abs() const {
    return std::max(std::max(std::fabs(a), std::fabs(b)), std::max(std::fabs(c), std::fabs(d)));
}

double Mat2::sigma_max() const {
    // eigenvalues of M^T M
    double t = a * a + b * b + c * c + d * d;
    double dt = det();
    double disc = t * t - 4.0 * dt * dt;
    if (disc < 0.0) disc = 0.0;
    return std::sqrt(0.5 * (t + std::sqrt(disc)));
}

double Mat2::sigma_min() const {
    double t = a * a + b * b + c * c + d * d;
    double dt = det();
    double disc = t * t - 4.0 * dt * dt;
    if (disc < 0.0) disc = 0.0;
    double lam = 0.5 * (t - std::sqrt(disc));
    if (lam < 0.0) lam = 0.0;
    return std::sqrt(lam);
}

double SymTensor2::max_abs() const {
    double m = 0.0;
    for (const auto& row : t)
        for (double v : row) m = std::max(m, std::fabs(v));
    return m;
}

SymTensor2 SymTensor2::operator+(const SymTensor2& o) const {
    SymTensor2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) r.t[i][j] = t[i][j] + o.t[i][j];
    return r;
}

SymTensor2 SymTensor2::operator*(double s) const {
    SymTensor2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) r.t[i][j] = t[i][j] * s;
    return r;
}

namespace {
double frac_part(double t) {
    double r = t - std::floor(t);
    if (r >= 1.0) r -= 1.0;  // guards rounding when t is a tiny negative number
    if (r < 0.0) r += 1.0;
    return r;
}
}  // namespace

TorusPoint wrap(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y))
        throw DomainError("wrap: non-finite coordinate");
    return TorusPoint{frac_part(x), frac_part(y)};
}

TorusPoint wrap(const Vec2& v) { return wrap(v.x, v.y); }

double wrap_symmetric(double t) {
    double r = frac_part(t);
    if (r >= 0.5) r -= 1.0;
    return r;
}

double torus_distance(const TorusPoint& p, const TorusPoint& q) {
    double best = 4.0;
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            double dx = p.x - q.x + i;
            double dy = p.y - q.y + j;
            best = std::min(best, dx * dx + dy * dy);
        }
    }
    return std::sqrt(best);
}

std::string IntMatrix2::str() const {
    std::ostringstream os;
    os << "[[" << e11 << "," << e12 << "],[" << e21 << "," << e22 << "]]";
    return os.str();
}

}  // namespace endolab
