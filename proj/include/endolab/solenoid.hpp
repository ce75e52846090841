#pragma once

// Finite-prefix arithmetic on the solenoidal lift: the group transformation
// psi_v on symbol words, the lifted map and its inverse, and the Bernoulli
// measure of cylinders. Solenoid points are represented by a base lift in R^2
// plus a finite word; everything with an infinite tail in the text is
// approximated here by its cylinder, which is this module's finite-precision
// contract.

#include <cstdint>
#include <string>
#include <vector>

#include "endolab/map.hpp"
#include "endolab/preimage.hpp"

namespace endolab {

struct SymbolWord {
    std::vector<int> letters;  // values in 1..d

    int length() const { return int(letters.size()); }
    bool operator==(const SymbolWord& o) const { return letters == o.letters; }
    std::string str() const;  // comma-separated, as used in CSV output
};

struct SolenoidPrefix {
    Vec2 base_lift;
    SymbolWord word;
    std::vector<LatticeVector> carries;  // u_0..u_n from psi computations, optional

    TorusPoint project() const { return wrap(base_lift); }
};

struct PsiResult {
    SymbolWord word;
    LatticeVector final_carry;
    std::vector<LatticeVector> carries;  // u_0 = v, then u_1..u_n
};

// the inductive definition of psi_v, exact in integer arithmetic
PsiResult psi_v(const SymbolWord& word, const LatticeVector& v, const CosetSystem& cs);

// group element (x,w) -> (x+v, psi_v(w))
SolenoidPrefix group_act(const LatticeVector& v, const SolenoidPrefix& s, const CosetSystem& cs);

// f^ : base -> lifted f, word -> prepend letter 1
SolenoidPrefix lift_forward(const TorusMap& f, const SolenoidPrefix& s);

// f^{-1} : base -> f~^{-1}(base + w_{word_1}), word -> shift; word must be nonempty
SolenoidPrefix lift_inverse(const TorusMap& f, const SolenoidPrefix& s);

// deterministic backward orbit picking branch word_i at step i (iterated
// lifted inverse, so consecutive lifts are not reduced mod Z^2)
BackwardOrbit backward_orbit_from_word(const TorusMap& f, const TorusPoint& x,
                                       const SymbolWord& word);

// Bernoulli mass d^{-length} of the cylinder C(word)
double cylinder_probability(const SymbolWord& word, std::int64_t d);

}  // namespace endolab
