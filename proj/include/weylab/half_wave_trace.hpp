#pragma once

// Regularized half-wave traces as finite mollified spectral sums.
//
// The raw trace is sum_n mult_n e^{-i sigma_n tau}; its singular support is
// the geodesic length spectrum.  We sample
//
//     S(tau) = sum_n mult_n w(sigma_n) <sigma_n>^{-s} e^{-i sigma_n tau}
//
// with w either a sharp count cutoff (the first m eigenvalues, multiplicity
// groups split if needed so that S(0) = m exactly) or a Gaussian window
// exp(-sigma^2 h^2 / 2).  The tau^{-1}-weighted variant is
//
//     Q(tau) = (-i / tau) S(tau),
//
// the restriction of the transformed counting function away from tau = 0
// (each step Theta(sigma - sigma_n) transforms to -i e^{-i sigma_n tau} /
// (tau - i0)).  Derivatives are exact termwise differentiation; for Q the
// product rule brings in d^j/dtau^j (1/tau) = (-1)^j j! tau^{-j-1}.
//
// Grid evaluation uses one complex rotation per (eigenvalue, grid point):
// the phase advances by e^{-i sigma step} along the grid, re-seeded from
// std::polar every few thousand steps to stop drift.  Threads split the tau
// grid into disjoint chunks, each of which runs over all eigenvalues in
// enumeration order, so results are bit-identical for any thread count.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "weylab/errors.hpp"
#include "weylab/parallel.hpp"
#include "weylab/quadrature.hpp"
#include "weylab/spectral_models.hpp"

namespace weylab {

// ---------------------------------------------------------------------------
// Regularization spec
// ---------------------------------------------------------------------------

struct RegularizationSpec {
    enum class Cutoff { sharp_count, gaussian_scale };

    Cutoff cutoff = Cutoff::sharp_count;
    std::int64_t sharp_m = 1;  // eigenvalues kept, counted with multiplicity
    double gaussian_h = 0.0;   // mollification width in sigma
    double sobolev_order = 0;  // s in the weight <sigma>^{-s}
    bool weight_by_inverse_tau = false;

    static RegularizationSpec sharp(std::int64_t m, double s = 0,
                                    bool weighted = false) {
        RegularizationSpec r;
        r.cutoff = Cutoff::sharp_count;
        r.sharp_m = m;
        r.sobolev_order = s;
        r.weight_by_inverse_tau = weighted;
        return r;
    }
    static RegularizationSpec gaussian(double h, double s = 0,
                                       bool weighted = false) {
        RegularizationSpec r;
        r.cutoff = Cutoff::gaussian_scale;
        r.gaussian_h = h;
        r.sobolev_order = s;
        r.weight_by_inverse_tau = weighted;
        return r;
    }

    void validate() const {
        if (cutoff == Cutoff::sharp_count) {
            if (sharp_m < 1)
                throw precondition_error("sharp cutoff needs m >= 1");
        } else if (!(gaussian_h > 0)) {
            throw precondition_error("gaussian cutoff needs h > 0");
        }
        if (!(sobolev_order >= 0))
            throw precondition_error("sobolev_order must be >= 0");
    }

    std::string describe() const {
        if (cutoff == Cutoff::sharp_count)
            return "sharp(m=" + std::to_string(sharp_m) +
                   ",s=" + std::to_string(sobolev_order) + ")";
        return "gaussian(h=" + std::to_string(gaussian_h) +
               ",s=" + std::to_string(sobolev_order) + ")";
    }
};

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

struct TauGrid {
    double start = 0;
    double step = 0;
    int count = 0;

    double tau(int i) const { return start + step * i; }
    double stop() const { return tau(count - 1); }

    void validate() const {
        if (count < 2 || !(step > 0))
            throw precondition_error("tau grid needs count >= 2 and step > 0");
    }
    static TauGrid over(double a, double b, int count) {
        TauGrid g;
        g.start = a;
        g.count = count;
        g.step = (count > 1) ? (b - a) / (count - 1) : 0.0;
        return g;
    }
};

struct TraceGrid {
    TauGrid tau;
    std::vector<cplx> values;
    int derivative_order = 0;
    RegularizationSpec spec;
    std::string source; // spectrum label
};

// ---------------------------------------------------------------------------
// Term weights (cutoff application)
// ---------------------------------------------------------------------------

namespace detail {

struct WeightedTerm {
    double sigma;
    double weight; // mult * cutoff window * <sigma>^{-s}
};

inline double sigma_bracket(double sigma) {
    return std::sqrt(1.0 + sigma * sigma);
}

// Resolve the cutoff against an enumerated spectrum.  Throws
// incomplete_spectrum when the enumeration cannot certify coverage: for the
// sharp cutoff when fewer than m eigenvalues are known, for the Gaussian one
// when the neglected tail beyond sigma_max is not provably below 1e-10 --
// with at most O((1+sigma)^d) eigenvalues below sigma, the weighted tail is
// controlled by exp(-sigma_max^2 h^2/2) (1+sigma_max)^{d+order+1}.
inline std::vector<WeightedTerm> term_weights(const Spectrum& s,
                                              const RegularizationSpec& spec,
                                              int derivative_order) {
    spec.validate();
    std::vector<WeightedTerm> out;
    out.reserve(s.entries.size());
    if (spec.cutoff == RegularizationSpec::Cutoff::sharp_count) {
        if (spec.sharp_m > s.total_count())
            throw incomplete_spectrum(
                "sharp cutoff m=" + std::to_string(spec.sharp_m) +
                " exceeds the " + std::to_string(s.total_count()) +
                " enumerated eigenvalues");
        std::int64_t left = spec.sharp_m;
        for (const SpectrumEntry& e : s.entries) {
            if (left <= 0) break;
            double kept = (double)std::min<std::int64_t>(left, e.multiplicity);
            out.push_back(
                {e.sigma,
                 kept * std::pow(sigma_bracket(e.sigma), -spec.sobolev_order)});
            left -= e.multiplicity;
        }
    } else {
        const double h = spec.gaussian_h;
        double tail = std::exp(-0.5 * s.sigma_max * s.sigma_max * h * h) *
                      std::pow(1.0 + s.sigma_max, s.dim + derivative_order + 1);
        if (!(tail <= 1e-10))
            throw incomplete_spectrum(
                "enumeration radius sigma_max=" + std::to_string(s.sigma_max) +
                " does not cover the gaussian window h=" + std::to_string(h) +
                " (tail bound " + std::to_string(tail) + ")");
        for (const SpectrumEntry& e : s.entries)
            out.push_back(
                {e.sigma,
                 (double)e.multiplicity *
                     std::exp(-0.5 * e.sigma * e.sigma * h * h) *
                     std::pow(sigma_bracket(e.sigma), -spec.sobolev_order)});
    }
    return out;
}

// Phase-power sums A_r(tau_i) = sum_n weight_n (-i sigma_n)^r e^{-i sigma_n
// tau_i} for r = 0..r_max, over a chunk of the grid.  Serial over terms in
// enumeration order.
inline void accumulate_chunk(const std::vector<WeightedTerm>& terms,
                             const TauGrid& grid, int lo, int hi, int r_max,
                             std::vector<std::vector<cplx>>& sums) {
    constexpr int reseed_every = 8192;
    for (const WeightedTerm& t : terms) {
        // powers (-i sigma)^r
        cplx pw[16];
        pw[0] = cplx{1, 0};
        const cplx mis{0.0, -t.sigma};
        for (int r = 1; r <= r_max; ++r) pw[r] = pw[r - 1] * mis;
        const cplx rot = std::polar(1.0, -t.sigma * grid.step);
        cplx z = t.weight * std::polar(1.0, -t.sigma * grid.tau(lo));
        for (int i = lo; i < hi; ++i) {
            for (int r = 0; r <= r_max; ++r) sums[r][i - lo] += pw[r] * z;
            if ((i - lo + 1) % reseed_every == 0)
                z = t.weight * std::polar(1.0, -t.sigma * grid.tau(i + 1));
            else
                z *= rot;
        }
    }
}

// All-order phase sums over the whole grid, threaded by disjoint tau chunks.
inline std::vector<std::vector<cplx>> phase_sums(
    const std::vector<WeightedTerm>& terms, const TauGrid& grid, int r_max,
    int threads) {
    if (r_max > 15) throw precondition_error("derivative order too large");
    const int nt = effective_threads(threads);
    int n_chunks = std::min(grid.count, std::max(nt * 4, 1));
    const int chunk = (grid.count + n_chunks - 1) / n_chunks;
    n_chunks = (grid.count + chunk - 1) / chunk;

    std::vector<std::vector<cplx>> out(r_max + 1,
                                       std::vector<cplx>(grid.count));
    for_each_block(n_chunks, nt, [&](int b) {
        const int lo = b * chunk, hi = std::min(grid.count, lo + chunk);
        std::vector<std::vector<cplx>> local(r_max + 1,
                                             std::vector<cplx>(hi - lo));
        accumulate_chunk(terms, grid, lo, hi, r_max, local);
        for (int r = 0; r <= r_max; ++r)
            std::copy(local[r].begin(), local[r].end(), out[r].begin() + lo);
    });
    return out;
}

inline double binomial_small(int n, int k) {
    double v = 1;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Trace sampling
// ---------------------------------------------------------------------------

inline TraceGrid sample_trace(const Spectrum& s, const TauGrid& grid,
                              const RegularizationSpec& spec,
                              int derivative_order = 0, int threads = 1) {
    grid.validate();
    if (derivative_order < 0)
        throw precondition_error("derivative_order must be >= 0");
    if (spec.weight_by_inverse_tau) {
        for (int i = 0; i < grid.count; ++i)
            if (std::abs(grid.tau(i)) < 1e-9)
                throw domain_error(
                    "tau^{-1}-weighted trace needs a grid excluding tau = 0");
    }
    auto terms = detail::term_weights(s, spec, derivative_order);

    TraceGrid t;
    t.tau = grid;
    t.derivative_order = derivative_order;
    t.spec = spec;
    t.source = s.label;

    const int k = derivative_order;
    if (!spec.weight_by_inverse_tau) {
        // d^k S = sum_n c_n (-i sigma_n)^k e^{-i sigma_n tau}: only r = k.
        auto sums = detail::phase_sums(terms, grid, k, threads);
        t.values = std::move(sums[k]);
        return t;
    }

    // d^k Q = -i sum_{r<=k} C(k,r) A_r(tau) (-1)^{k-r} (k-r)! tau^{r-k-1}
    auto sums = detail::phase_sums(terms, grid, k, threads);
    t.values.assign(grid.count, cplx{});
    std::vector<double> fact(k + 1, 1.0);
    for (int j = 1; j <= k; ++j) fact[j] = fact[j - 1] * j;
    for (int i = 0; i < grid.count; ++i) {
        const double tau = grid.tau(i);
        cplx acc{};
        for (int r = 0; r <= k; ++r) {
            double c = detail::binomial_small(k, r) * fact[k - r] *
                       ((k - r) % 2 ? -1.0 : 1.0) *
                       std::pow(tau, (double)(r - k - 1));
            acc += c * sums[r][i];
        }
        t.values[i] = cplx{0, -1} * acc;
    }
    return t;
}

// ---------------------------------------------------------------------------
// Singular-support detection
// ---------------------------------------------------------------------------

struct Peak {
    double tau = 0;         // parabolically refined location
    double uncertainty = 0; // half the search window
    double height = 0;      // |values| at the grid maximum
    double prominence = 0;  // height above the higher of the two base valleys
};

// 5x the median magnitude: a robust floor above the smooth background.
inline double default_prominence(const TraceGrid& t) {
    if (t.values.empty()) throw domain_error("empty trace grid");
    std::vector<double> mags(t.values.size());
    for (std::size_t i = 0; i < t.values.size(); ++i)
        mags[i] = std::abs(t.values[i]);
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    return 5.0 * mags[mags.size() / 2];
}

inline std::vector<Peak> detect_singularities(const TraceGrid& t,
                                              double window,
                                              double prominence) {
    if (t.values.empty()) throw domain_error("empty trace grid");
    if (t.derivative_order != 0)
        throw precondition_error("peak detection expects derivative_order 0");
    if (!(window > 0) || !(prominence >= 0))
        throw precondition_error("window must be > 0, prominence >= 0");

    const int n = (int)t.values.size();
    std::vector<double> m(n);
    for (int i = 0; i < n; ++i) m[i] = std::abs(t.values[i]);
    const int w = std::max(1, (int)std::llround(window / t.tau.step));

    std::vector<Peak> peaks;
    for (int i = 0; i < n; ++i) {
        bool is_max = true;
        for (int j = std::max(0, i - w); j <= std::min(n - 1, i + w); ++j)
            if (j != i && m[j] >= m[i]) { is_max = false; break; }
        if (!is_max) continue;

        // prominence: walk outwards until strictly higher ground, tracking
        // the deepest valley on each side; edge counts as a base.
        double left_min = m[i], right_min = m[i];
        for (int j = i - 1; j >= 0 && m[j] <= m[i]; --j)
            left_min = std::min(left_min, m[j]);
        for (int j = i + 1; j < n && m[j] <= m[i]; ++j)
            right_min = std::min(right_min, m[j]);
        Peak p;
        p.prominence = m[i] - std::max(left_min, right_min);
        if (p.prominence < prominence) continue;

        p.tau = t.tau.tau(i);
        p.uncertainty = 0.5 * window;
        p.height = m[i];
        if (i > 0 && i < n - 1) {
            double denom = m[i - 1] - 2 * m[i] + m[i + 1];
            if (denom < 0) {
                double delta = 0.5 * (m[i - 1] - m[i + 1]) / denom;
                if (std::abs(delta) <= 1.0) p.tau += delta * t.tau.step;
            }
        }
        peaks.push_back(p);
    }
    return peaks;
}

// ---------------------------------------------------------------------------
// Sobolev norms of the weighted trace
// ---------------------------------------------------------------------------

// sum_{k=0}^{ell} integral_a^b |d^k Q| dtau by composite Simpson on a grid
// refined until the value moves by < 1% (hard cap 2^20 points).
inline double sobolev_norm(const Spectrum& s, RegularizationSpec spec,
                           int ell, double a, double b, double grid_step,
                           int threads = 1) {
    if (!(0 < a && a < b))
        throw domain_error("sobolev_norm needs 0 < a < b (weight is "
                           "singular at tau = 0)");
    if (ell < 0) throw precondition_error("ell must be >= 0");
    if (!(grid_step > 0)) throw precondition_error("grid_step must be > 0");
    spec.weight_by_inverse_tau = true;

    auto norm_at = [&](int points) {
        TauGrid g = TauGrid::over(a, b, points);
        double total = 0;
        for (int k = 0; k <= ell; ++k) {
            TraceGrid t = sample_trace(s, g, spec, k, threads);
            std::vector<double> mags(t.values.size());
            for (std::size_t i = 0; i < mags.size(); ++i)
                mags[i] = std::abs(t.values[i]);
            total += simpson_on_grid(mags, g.step);
        }
        return total;
    };

    int points = std::max(3, (int)std::ceil((b - a) / grid_step) + 1);
    if (points % 2 == 0) ++points;
    double prev = norm_at(points);
    while (true) {
        int next = 2 * points - 1;
        if (next > (1 << 20))
            throw accuracy_error("sobolev_norm did not settle within the "
                                 "grid cap", 0.01, 1.0);
        double cur = norm_at(next);
        if (std::abs(cur - prev) <= 0.01 * std::max(cur, 1e-300))
            return cur;
        prev = cur;
        points = next;
    }
}

} // namespace weylab
