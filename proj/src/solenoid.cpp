#include "endolab/solenoid.hpp"

#include <cmath>
#include <sstream>

#include "endolab/lattice.hpp"

namespace endolab {

std::string SymbolWord::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) os << ",";
        os << letters[i];
    }
    return os.str();
}

PsiResult psi_v(const SymbolWord& word, const LatticeVector& v, const CosetSystem& cs) {
    const int d = cs.degree();
    PsiResult res;
    res.word.letters.reserve(word.letters.size());
    res.carries.reserve(word.letters.size() + 1);
    res.carries.push_back(v);

    LatticeVector u = v;
    std::int64_t dt = cs.A.det();
    for (int letter : word.letters) {
        if (letter < 1 || letter > d)
            throw DomainError("psi_v: word letter outside alphabet");
        const LatticeVector& w_omega = cs.reps[letter - 1];
        int tau = 0;
        LatticeVector next{};
        for (int cand = 1; cand <= d; ++cand) {
            LatticeVector t = cs.reps[cand - 1] - w_omega + u;
            LatticeVector adj = cs.A.adjugate() * t;
            if (adj.a % dt == 0 && adj.b % dt == 0) {
                tau = cand;
                next = {adj.a / dt, adj.b / dt};  // u_n = A^{-1}(w_tau - w_omega + u)
                break;
            }
        }
        if (tau == 0)
            throw ConstructionError("psi_v: no coset representative matches (broken CosetSystem)");
        res.word.letters.push_back(tau);
        res.carries.push_back(next);
        u = next;
    }
    res.final_carry = u;
    return res;
}

SolenoidPrefix group_act(const LatticeVector& v, const SolenoidPrefix& s, const CosetSystem& cs) {
    PsiResult psi = psi_v(s.word, v, cs);
    SolenoidPrefix out;
    out.base_lift = s.base_lift + v.to_vec();
    out.word = std::move(psi.word);
    out.carries = std::move(psi.carries);
    return out;
}

SolenoidPrefix lift_forward(const TorusMap& f, const SolenoidPrefix& s) {
    SolenoidPrefix out;
    out.base_lift = f.lift(s.base_lift);
    out.word.letters.reserve(s.word.letters.size() + 1);
    out.word.letters.push_back(1);
    out.word.letters.insert(out.word.letters.end(), s.word.letters.begin(),
                            s.word.letters.end());
    return out;
}

SolenoidPrefix lift_inverse(const TorusMap& f, const SolenoidPrefix& s) {
    if (s.word.letters.empty())
        throw DomainError("lift_inverse: word is empty (insufficient prefix)");
    int letter = s.word.letters.front();
    const CosetSystem& cs = f.cosets();
    if (letter < 1 || letter > cs.degree())
        throw DomainError("lift_inverse: word letter outside alphabet");
    SolenoidPrefix out;
    out.base_lift = f.lift_inverse(s.base_lift + cs.reps[letter - 1].to_vec());
    out.word.letters.assign(s.word.letters.begin() + 1, s.word.letters.end());
    return out;
}

BackwardOrbit backward_orbit_from_word(const TorusMap& f, const TorusPoint& x,
                                       const SymbolWord& word) {
    const CosetSystem& cs = f.cosets();
    BackwardOrbit orbit;
    orbit.points.reserve(word.length() + 1);
    orbit.points.push_back(x);
    Vec2 lift = x.lift();
    for (int letter : word.letters) {
        if (letter < 1 || letter > cs.degree())
            throw DomainError("backward_orbit_from_word: letter outside alphabet");
        lift = f.lift_inverse(lift + cs.reps[letter - 1].to_vec());
        if (std::fabs(lift.x) > 0x1p35 || std::fabs(lift.y) > 0x1p35)
            throw NumericalError(
                "backward_orbit_from_word: lift magnitude exhausts precision at this depth");
        TorusPoint p = wrap(lift);
        orbit.points.push_back(p);
        orbit.word.push_back(letter);
        orbit.steps.push_back(f.derivative(p));
    }
    return orbit;
}

double cylinder_probability(const SymbolWord& word, std::int64_t d) {
    if (d < 1) throw DomainError("cylinder_probability: degree must be >= 1");
    return std::pow(double(d), -double(word.length()));
}

}  // namespace endolab
