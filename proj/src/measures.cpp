#include "endolab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "endolab/parallel.hpp"
#include "endolab/rng.hpp"

namespace endolab {

void EmpiricalMeasure::add(const TorusPoint& p) {
    int i = std::min(bins - 1, int(p.x * bins));
    int j = std::min(bins - 1, int(p.y * bins));
    ++counts[std::size_t(i) * bins + j];
    ++total;
}

void EmpiricalMeasure::merge(const EmpiricalMeasure& other) {
    if (other.bins != bins) throw DomainError("EmpiricalMeasure::merge: grid mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
}

double measure_distance_l1(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    if (a.bins != b.bins) throw DomainError("measure_distance_l1: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.counts.size(); ++i)
        s += std::fabs(a.probability(i) - b.probability(i));
    return s;
}

double l1_to_uniform(const EmpiricalMeasure& a) {
    double u = 1.0 / double(a.counts.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.counts.size(); ++i) s += std::fabs(a.probability(i) - u);
    return s;
}

double measure_noise_floor(int bins, std::int64_t total_samples) {
    if (total_samples <= 0) throw DomainError("measure_noise_floor: no samples");
    return 3.0 * std::sqrt(double(bins) * double(bins) / double(total_samples));
}

namespace {

// one backward step in the per-step canonical frame
TorusPoint step_bernoulli(const TorusMap& f, const TorusPoint& cur, SplitMix64& rng) {
    const CosetSystem& cs = f.cosets();
    int i = int(rng.below(std::uint64_t(cs.reps.size())));
    return wrap(f.lift_inverse(cur.lift() + cs.reps[i].to_vec()));
}

TorusPoint step_jacobian(const TorusMap& f, const TorusPoint& cur, SplitMix64& rng) {
    auto fiber = preimages_lifted(f, cur.lift());
    double sum = 0.0;
    for (const auto& br : fiber) sum += 1.0 / br.abs_det;
    if (std::fabs(sum - 1.0) > kTolConservative) {
        std::ostringstream os;
        os << "jacobian weighting invalid: fiber weights sum to " << sum;
        throw DomainError(os.str());
    }
    double u = rng.uniform() * sum;
    double acc = 0.0;
    for (const auto& br : fiber) {
        acc += 1.0 / br.abs_det;
        if (u < acc) return br.point;
    }
    return fiber.back().point;
}

}  // namespace

EmpiricalMeasure empirical_backward_measure(const TorusMap& f,
                                            const std::vector<TorusPoint>& starts, int n,
                                            int trials_per_start, Weighting weighting, int bins,
                                            std::uint64_t seed, unsigned threads) {
    if (starts.empty()) throw DomainError("empirical_backward_measure: no starting points");
    if (n < 1) throw DomainError("empirical_backward_measure: n must be >= 1");
    if (trials_per_start < 1) throw DomainError("empirical_backward_measure: no trials");
    if (bins < 1) throw DomainError("empirical_backward_measure: bins must be >= 1");

    const std::size_t streams = starts.size() * std::size_t(trials_per_start);
    unsigned nthreads = resolve_threads(threads);
    std::vector<EmpiricalMeasure> partial(nthreads, EmpiricalMeasure(bins));

    parallel_for_workers(streams, nthreads, [&](unsigned tid, std::size_t s) {
        EmpiricalMeasure& local = partial[tid];
        SplitMix64 rng = stream_rng(seed, s);
        TorusPoint cur = starts[s / trials_per_start];
        for (int k = 0; k < n; ++k) {
            cur = weighting == Weighting::bernoulli ? step_bernoulli(f, cur, rng)
                                                    : step_jacobian(f, cur, rng);
            local.add(cur);
        }
    });

    EmpiricalMeasure out(bins);
    for (const auto& part : partial) out.merge(part);
    return out;
}

LyapunovEstimate forward_lyapunov(const TorusMap& f, const TorusPoint& x, int n, int burn_in) {
    if (n < 1) throw DomainError("forward_lyapunov: n must be >= 1");
    if (burn_in < 0) burn_in = std::min(n / 10, 1024);
    if (burn_in >= n) burn_in = n - 1;

    Vec2 v1{1.0, 0.0}, v2{0.0, 1.0};
    TorusPoint cur = x;
    double sum_r11 = 0.0, sum_logdet = 0.0;
    for (int k = 0; k < n; ++k) {
        Mat2 D = f.derivative(cur);
        Vec2 w1 = D * v1;
        Vec2 w2 = D * v2;
        double r11 = w1.norm();
        v1 = w1 / r11;
        Vec2 w2p = w2 - v1 * w2.dot(v1);
        double r22 = w2p.norm();
        v2 = w2p / r22;
        if (k >= burn_in) {
            sum_r11 += std::log(r11);
            sum_logdet += std::log(std::fabs(D.det()));
        }
        cur = f.eval(cur);
    }
    LyapunovEstimate est;
    est.n = n;
    est.burn_in = burn_in;
    int window = n - burn_in;
    est.chi_plus = sum_r11 / window;
    est.log_det_avg = sum_logdet / window;
    est.chi_minus = est.log_det_avg - est.chi_plus;
    est.top_direction = v1;
    return est;
}

double backward_vector_exponent(const BackwardOrbit& orbit, const Vec2& v) {
    int n = orbit.length();
    if (n < 1) throw DomainError("backward_vector_exponent: orbit too short");
    Vec2 w = v;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        w = orbit.steps[k].solve(w);
        double nm = w.norm();
        acc += std::log(nm);
        w = w / nm;
    }
    return acc / n;
}

double projective_angle(const Vec2& a, const Vec2& b) {
    double c = std::fabs(a.normalized().dot(b.normalized()));
    if (c > 1.0) c = 1.0;
    return std::acos(c);
}

namespace {

Vec2 projective_representative(const Vec2& v) {
    Vec2 u = v.normalized();
    if (u.x < 0.0 || (u.x == 0.0 && u.y < 0.0)) return {-u.x, -u.y};
    return u;
}

// deep-word orbits use per-step canonical frames, so any depth is fine
std::vector<Mat2> canonical_backward_steps(const TorusMap& f, const TorusPoint& x,
                                           const SymbolWord& word) {
    const CosetSystem& cs = f.cosets();
    std::vector<Mat2> steps;
    steps.reserve(word.letters.size());
    TorusPoint cur = x;
    for (int letter : word.letters) {
        if (letter < 1 || letter > cs.degree())
            throw DomainError("unstable_direction: word letter outside alphabet");
        cur = wrap(f.lift_inverse(cur.lift() + cs.reps[letter - 1].to_vec()));
        steps.push_back(f.derivative(cur));
    }
    return steps;
}

const Vec2 kGenericSeed = Vec2{1.0, 0.6180339887498949}.normalized();

Vec2 push_forward_direction(const std::vector<Mat2>& steps) {
    Vec2 u = kGenericSeed;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        u = (*it) * u;
        double nm = u.norm();
        if (!(nm > 1e-300))
            throw NumericalError("unstable_direction: degenerate pushforward");
        u = u / nm;
    }
    return projective_representative(u);
}

}  // namespace

Vec2 unstable_direction_estimate(const TorusMap& f, const TorusPoint& x,
                                 const SymbolWord& word) {
    if (word.length() < 1) throw DomainError("unstable_direction: empty word");
    return push_forward_direction(canonical_backward_steps(f, x, word));
}

StableDirectionResult unstable_direction_auto(const TorusMap& f, const TorusPoint& x,
                                              std::uint64_t seed, int n0, int cap, double tol) {
    if (n0 < 1 || cap < n0) throw DomainError("unstable_direction_auto: bad depths");
    SplitMix64 rng(seed);
    SymbolWord word;
    word.letters.reserve(cap);
    const int d = int(f.degree());
    for (int i = 0; i < cap; ++i) word.letters.push_back(int(rng.below(d)) + 1);

    auto at_depth = [&](int depth) {
        SymbolWord prefix;
        prefix.letters.assign(word.letters.begin(), word.letters.begin() + depth);
        return unstable_direction_estimate(f, x, prefix);
    };

    StableDirectionResult res;
    int depth = n0;
    res.direction = at_depth(depth);
    res.depth_used = depth;
    res.last_move = 1e300;
    while (2 * depth <= cap) {
        Vec2 next = at_depth(2 * depth);
        res.last_move = projective_angle(res.direction, next);
        res.direction = next;
        depth *= 2;
        res.depth_used = depth;
        if (res.last_move < tol) break;
    }
    return res;
}

FiberAngleTable fiber_angle_distribution(const TorusMap& f, const TorusPoint& x, int n_words,
                                         int n_burn, const std::vector<double>& gammas,
                                         std::uint64_t seed, int ref_grid, unsigned threads) {
    if (n_words < 1) throw DomainError("fiber_angle_distribution: need n_words >= 1");
    if (n_burn < 1) throw DomainError("fiber_angle_distribution: need n_burn >= 1");

    std::vector<Vec2> dirs(n_words);
    const int d = int(f.degree());
    parallel_for(std::size_t(n_words), threads, [&](std::size_t w) {
        SplitMix64 rng = stream_rng(seed, w);
        SymbolWord word;
        word.letters.reserve(n_burn);
        for (int i = 0; i < n_burn; ++i) word.letters.push_back(int(rng.below(d)) + 1);
        dirs[w] = unstable_direction_estimate(f, x, word);
    });

    FiberAngleTable tab;
    tab.gammas = gammas;
    tab.ref_thetas.resize(ref_grid);
    tab.fraction.assign(ref_grid, std::vector<double>(gammas.size(), 0.0));
    tab.sample_thetas.reserve(n_words);
    for (const Vec2& u : dirs) tab.sample_thetas.push_back(std::atan2(u.y, u.x));

    for (int r = 0; r < ref_grid; ++r) {
        double th = r * std::acos(-1.0) / ref_grid;
        tab.ref_thetas[r] = th;
        Vec2 E{std::cos(th), std::sin(th)};
        for (std::size_t g = 0; g < gammas.size(); ++g) {
            int cnt = 0;
            for (const Vec2& u : dirs)
                if (projective_angle(E, u) < gammas[g]) ++cnt;
            tab.fraction[r][g] = double(cnt) / n_words;
        }
    }
    for (int i = 0; i < n_words; ++i)
        for (int j = i + 1; j < n_words; ++j)
            tab.max_pairwise_angle =
                std::max(tab.max_pairwise_angle, projective_angle(dirs[i], dirs[j]));
    return tab;
}

}  // namespace endolab
