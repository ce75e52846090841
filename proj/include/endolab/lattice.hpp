#pragma once

// Exact integer lattice arithmetic for 2x2 integer matrices: coset
// representatives of Z^2 / A(Z^2) and the Smith normal form.

#include <vector>

#include "endolab/geometry.hpp"

namespace endolab {

struct CosetSystem {
    IntMatrix2 A;
    std::vector<LatticeVector> reps;  // reps[0] is always (0,0)

    int degree() const { return int(reps.size()); }
};

// true iff u = A z has an integer solution z (exact arithmetic)
bool in_lattice_image(const IntMatrix2& A, const LatticeVector& u);

// Enumerates the d = |det A| integer points of the half-open fundamental
// parallelepiped A[0,1)^2 in lexicographic order and puts the class of 0
// (representative (0,0)) first. Rejects det A = 0.
CosetSystem coset_representatives(const IntMatrix2& A);

struct SmithForm {
    IntMatrix2 U;  // |det U| = 1
    IntMatrix2 A;  // diag(tau1, tau2), tau1 >= tau2 >= 1, tau2 = gcd of entries
    IntMatrix2 V;  // |det V| = 1
    std::int64_t tau1() const { return A.e11; }
    std::int64_t tau2() const { return A.e22; }
};

// E = U * A * V exactly; A = diag(tau1, tau2) with tau2 | tau1,
// tau2 = gcd of the entries of E and tau1 * tau2 = |det E|.
// When det E > 0 the factors are normalized to det U = det V = +1;
// when det E < 0 exactly one of them has determinant -1.
SmithForm smith_normal_form(const IntMatrix2& E);

}  // namespace endolab
