#include "endolab/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace endolab {

bool in_lattice_image(const IntMatrix2& A, const LatticeVector& u) {
    // A z = u  <=>  adj(A) u = det(A) z, so both components of adj(A) u
    // must be divisible by det(A).
    std::int64_t dt = A.det();
    if (dt == 0) throw DomainError("in_lattice_image: singular matrix");
    LatticeVector w = A.adjugate() * u;
    return w.a % dt == 0 && w.b % dt == 0;
}

CosetSystem coset_representatives(const IntMatrix2& A) {
    std::int64_t dt = A.det();
    if (dt == 0) throw DomainError("coset_representatives: det A = 0");
    std::int64_t d = std::llabs(dt);

    // u lies in A[0,1)^2 iff adj(A) u / det is componentwise in [0,1).
    auto in_parallelepiped = [&](const LatticeVector& u) {
        LatticeVector w = A.adjugate() * u;
        if (dt > 0) return w.a >= 0 && w.a < dt && w.b >= 0 && w.b < dt;
        return w.a <= 0 && w.a > dt && w.b <= 0 && w.b > dt;
    };

    // bounding box of the parallelepiped corners 0, a1, a2, a1+a2
    std::int64_t xs[4] = {0, A.e11, A.e12, A.e11 + A.e12};
    std::int64_t ys[4] = {0, A.e21, A.e22, A.e21 + A.e22};
    std::int64_t xmin = *std::min_element(xs, xs + 4), xmax = *std::max_element(xs, xs + 4);
    std::int64_t ymin = *std::min_element(ys, ys + 4), ymax = *std::max_element(ys, ys + 4);

    std::vector<LatticeVector> reps;
    for (std::int64_t a = xmin; a <= xmax; ++a)
        for (std::int64_t b = ymin; b <= ymax; ++b)
            if (in_parallelepiped({a, b})) reps.push_back({a, b});

    if (std::int64_t(reps.size()) != d) {
        std::ostringstream os;
        os << "coset_representatives: scan of " << A.str() << " found " << reps.size()
           << " points, expected " << d;
        throw ConstructionError(os.str());
    }

    // lexicographic order with the class of 0 first; (0,0) is always in the scan
    std::sort(reps.begin(), reps.end(), [](const LatticeVector& l, const LatticeVector& r) {
        return l.a != r.a ? l.a < r.a : l.b < r.b;
    });
    auto zero = std::find(reps.begin(), reps.end(), LatticeVector{0, 0});
    if (zero == reps.end()) throw ConstructionError("coset_representatives: missing origin");
    std::rotate(reps.begin(), zero, zero + 1);

    return CosetSystem{A, std::move(reps)};
}

namespace {

struct WorkMat {
    std::int64_t m[2][2];
    void swap_rows() { std::swap(m[0][0], m[1][0]); std::swap(m[0][1], m[1][1]); }
    void swap_cols() { std::swap(m[0][0], m[0][1]); std::swap(m[1][0], m[1][1]); }
    void add_row(int dst, int src, std::int64_t q) {
        m[dst][0] += q * m[src][0];
        m[dst][1] += q * m[src][1];
    }
    void add_col(int dst, int src, std::int64_t q) {
        m[0][dst] += q * m[0][src];
        m[1][dst] += q * m[1][src];
    }
    void negate_row(int r) { m[r][0] = -m[r][0]; m[r][1] = -m[r][1]; }
    void negate_col(int c) { m[0][c] = -m[0][c]; m[1][c] = -m[1][c]; }
};

}  // namespace

SmithForm smith_normal_form(const IntMatrix2& E) {
    if (E.det() == 0) throw DomainError("smith_normal_form: singular matrix");

    WorkMat M{{{E.e11, E.e12}, {E.e21, E.e22}}};
    WorkMat U{{{1, 0}, {0, 1}}};  // accumulated row operations (inverse applied)
    WorkMat V{{{1, 0}, {0, 1}}};  // accumulated column operations (inverse applied)

    // Row op on M must be undone on the left factor: M -> R M implies U -> U R^{-1}.
    // Same for columns on the right. Each elementary op below keeps U * M * V
    // equal to E exactly.
    auto rows_swapped = [&]() { M.swap_rows(); U.swap_cols(); };           // R = P, R^{-1} = P
    auto cols_swapped = [&]() { M.swap_cols(); V.swap_rows(); };
    auto row_axpy = [&](int dst, int src, std::int64_t q) {                // row_dst += q row_src
        M.add_row(dst, src, q);
        U.add_col(src, dst, -q);
    };
    auto col_axpy = [&](int dst, int src, std::int64_t q) {                // col_dst += q col_src
        M.add_col(dst, src, q);
        V.add_row(src, dst, -q);
    };

    // Gaussian elimination over Z by repeated division with remainder.
    for (int iter = 0; iter < 256; ++iter) {
        // bring a minimal nonzero entry to (0,0)
        std::int64_t best = 0;
        int bi = 0, bj = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                std::int64_t v = std::llabs(M.m[i][j]);
                if (v != 0 && (best == 0 || v < best)) { best = v; bi = i; bj = j; }
            }
        if (bi == 1) rows_swapped();
        if (bj == 1) cols_swapped();

        std::int64_t p = M.m[0][0];
        if (M.m[1][0] != 0) {
            std::int64_t q = M.m[1][0] / p;  // truncated division, loop re-reduces the remainder
            if (q != 0) row_axpy(1, 0, -q);
            if (M.m[1][0] != 0) continue;
        }
        if (M.m[0][1] != 0) {
            std::int64_t q = M.m[0][1] / p;
            if (q != 0) col_axpy(1, 0, -q);
            if (M.m[0][1] != 0) continue;
        }
        // off-diagonal is zero; enforce divisibility m00 | m11
        if (M.m[1][1] % p != 0) {
            col_axpy(0, 1, 1);  // couples the rows again, re-reduce
            continue;
        }
        break;
    }
    if (M.m[1][0] != 0 || M.m[0][1] != 0)
        throw NumericalError("smith_normal_form: reduction did not terminate");

    // positive diagonal
    if (M.m[0][0] < 0) { M.negate_row(0); U.negate_col(0); }
    if (M.m[1][1] < 0) { M.negate_row(1); U.negate_col(1); }

    // standard form has gcd first; the diagonal convention here is
    // diag(tau1, tau2) with tau2 = gcd, so swap both rows and columns
    rows_swapped();
    cols_swapped();

    IntMatrix2 Um{U.m[0][0], U.m[0][1], U.m[1][0], U.m[1][1]};
    IntMatrix2 Am{M.m[0][0], M.m[0][1], M.m[1][0], M.m[1][1]};
    IntMatrix2 Vm{V.m[0][0], V.m[0][1], V.m[1][0], V.m[1][1]};

    // normalize to det +1 when both factors have det -1
    if (Um.det() == -1 && Vm.det() == -1) {
        // D = diag(-1,1) commutes with diagonal A via D A D = A
        Um = Um * IntMatrix2{-1, 0, 0, 1};
        Vm = IntMatrix2{-1, 0, 0, 1} * Vm;
    }

    SmithForm out{Um, Am, Vm};
    if (!(out.U * out.A * out.V == E))
        throw NumericalError("smith_normal_form: reconstruction mismatch");
    if (std::llabs(out.U.det()) != 1 || std::llabs(out.V.det()) != 1)
        throw NumericalError("smith_normal_form: factors not unimodular");

    std::int64_t g = std::gcd(std::gcd(std::llabs(E.e11), std::llabs(E.e12)),
                              std::gcd(std::llabs(E.e21), std::llabs(E.e22)));
    if (out.tau2() != g || out.tau1() * out.tau2() != E.degree() || out.tau1() % out.tau2() != 0)
        throw NumericalError("smith_normal_form: diagonal is not (d/gcd, gcd)");
    return out;
}

}  // namespace endolab
