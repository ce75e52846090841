#pragma once

// Empirical measures from backward Birkhoff averages, Lyapunov exponent
// estimation and finite-time unstable directions on fibers. Long random
// orbits are streamed with per-step canonical lifts (see preimage.hpp);
// the group action makes this an exact relabeling of the fiber measure.

#include <cstdint>
#include <vector>

#include "endolab/preimage.hpp"
#include "endolab/solenoid.hpp"

namespace endolab {

struct EmpiricalMeasure {
    int bins = 0;                      // m, grid is m x m
    std::vector<std::int64_t> counts;  // row-major, cell (i,j) = floor(x m), floor(y m)
    std::int64_t total = 0;

    explicit EmpiricalMeasure(int m = 0) : bins(m), counts(std::size_t(m) * m, 0) {}

    void add(const TorusPoint& p);
    void merge(const EmpiricalMeasure& other);
    double probability(std::size_t idx) const {
        return total == 0 ? 0.0 : double(counts[idx]) / double(total);
    }
};

// sum over bins of |p_i - q_i|; rejects mismatched grids
double measure_distance_l1(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

// distance to the exactly uniform histogram
double l1_to_uniform(const EmpiricalMeasure& a);

// a priori bound used as comparison yardstick: 3 sqrt(m^2 / N)
double measure_noise_floor(int bins, std::int64_t total_samples);

// Accumulates the points x_1..x_n of `trials_per_start` sampled backward
// orbits from every start. Stream s = start_index * trials + trial seeds its
// own generator from (seed, s), so results do not depend on thread count.
EmpiricalMeasure empirical_backward_measure(const TorusMap& f,
                                            const std::vector<TorusPoint>& starts, int n,
                                            int trials_per_start, Weighting weighting, int bins,
                                            std::uint64_t seed, unsigned threads = 0);

struct LyapunovEstimate {
    double chi_plus = 0.0;
    double chi_minus = 0.0;     // log_det_avg - chi_plus
    double log_det_avg = 0.0;
    int n = 0;
    int burn_in = 0;
    Vec2 top_direction;         // current most-expanded direction at the orbit end
};

// Benettin-style estimate with a re-orthonormalized pair; the first burn_in
// steps are excluded from the averages (pass burn_in = -1 for the default
// min(n/10, 1024)).
LyapunovEstimate forward_lyapunov(const TorusMap& f, const TorusPoint& x, int n,
                                  int burn_in = -1);

// (1/n) log||(Df^n)^{-1} v|| along the orbit's cocycle, renormalized per step
double backward_vector_exponent(const BackwardOrbit& orbit, const Vec2& v);

// Finite-time unstable direction at x for the fiber point selected by `word`:
// a fixed generic seed vector is pushed forward along the word's backward
// orbit. Returned with positive orientation (projective representative).
Vec2 unstable_direction_estimate(const TorusMap& f, const TorusPoint& x, const SymbolWord& word);

struct StableDirectionResult {
    Vec2 direction;
    int depth_used = 0;
    double last_move = 0.0;  // angle moved at the final doubling
};

// doubles the word depth (Bernoulli letters from `seed`) from n0 until the
// direction moves less than tol, capped at `cap`
StableDirectionResult unstable_direction_auto(const TorusMap& f, const TorusPoint& x,
                                              std::uint64_t seed, int n0 = 64, int cap = 1024,
                                              double tol = 1e-6);

// angle between two projective directions, in [0, pi/2]
double projective_angle(const Vec2& a, const Vec2& b);

struct FiberAngleTable {
    std::vector<double> ref_thetas;             // reference directions E on a P^1 grid
    std::vector<double> gammas;                 // angle thresholds
    std::vector<std::vector<double>> fraction;  // [ref][gamma] = P^(angle < gamma)
    std::vector<double> sample_thetas;          // estimated directions, one per word
    double max_pairwise_angle = 0.0;
};

FiberAngleTable fiber_angle_distribution(const TorusMap& f, const TorusPoint& x, int n_words,
                                         int n_burn, const std::vector<double>& gammas,
                                         std::uint64_t seed, int ref_grid = 32,
                                         unsigned threads = 0);

}  // namespace endolab
