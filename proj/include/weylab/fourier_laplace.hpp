#pragma once

// One-sided (causal) Fourier-Laplace transforms.
//
// For f supported on [0, inf) with |f(sigma)| <= budget * <sigma>^K,
//
//     A(t) = integral_0^inf f(sigma) e^{-sigma t} dsigma
//
// is analytic on Re t > 0, and its boundary values on the imaginary axis,
// taken as eps -> 0+ along t = eps + i*tau, recover the Fourier transform
// of f.  The partial transform A_Sigma(t) = integral_0^Sigma is entire.
//
// Functions are carried in two representations:
//   * a structural one -- pieces of polynomial * e^{-decay*sigma}, plus an
//     optional global bracket factor <sigma>^w (integer w <= 0) -- for which
//     every transform used downstream has a stable closed form, and
//   * a black-box callable with growth metadata, handled by truncated
//     adaptive quadrature.
//
// Closed forms are evaluated in "fused" arrangements: exponent real parts
// are kept <= 0 by attaching reference factors like e^{Sigma t} directly to
// the integrand, so no intermediate quantity overflows even when
// Sigma * |Re t| is in the thousands.  The workhorse is poly_exp_finite,
// which splits [a,b] into chunks with |s * chunk| <= 1 and sums an
// exactly-shifted power series per chunk; each chunk's error is O(1e-18)
// relative, and the chunk count grows only linearly in |s|(b-a).

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "weylab/errors.hpp"
#include "weylab/quadrature.hpp"

namespace weylab {

inline constexpr double fl_infinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Structural representation
// ---------------------------------------------------------------------------

struct Piece {
    double lo = 0;
    double hi = fl_infinity;          // fl_infinity marks an unbounded piece
    std::vector<cplx> coeffs;         // polynomial in sigma, ascending powers
    double decay = 0.0;               // extra factor e^{-decay * sigma}, >= 0
};

struct Structure {
    // The function is the SUM of the pieces, each supported on [lo, hi);
    // overlapping supports are allowed (a sum of terms), though builders in
    // this project emit disjoint ascending pieces.
    std::vector<Piece> pieces;
    int bracket_weight = 0;           // extra factor <sigma>^w, integer w <= 0

    // f(sigma) for sigma >= 0 (zero off the pieces)
    cplx eval(double sigma) const {
        cplx acc{};
        for (const Piece& p : pieces) {
            if (sigma < p.lo || sigma >= p.hi) continue;
            cplx v{};
            for (std::size_t j = p.coeffs.size(); j-- > 0;)
                v = v * sigma + p.coeffs[j];
            if (p.decay != 0.0) v *= std::exp(-p.decay * sigma);
            acc += v;
        }
        if (bracket_weight != 0)
            acc *= std::pow(1.0 + sigma * sigma, 0.5 * bracket_weight);
        return acc;
    }
};

// ---------------------------------------------------------------------------
// CausalFunction
// ---------------------------------------------------------------------------

struct CausalFunction {
    std::function<cplx(double)> eval;    // defined for sigma >= 0
    double growth_K = 0;                 // |f| <= budget * <sigma>^growth_K
    double budget = 1;
    std::optional<Structure> structure;  // present when closed forms apply

    static CausalFunction from_callable(std::function<cplx(double)> fn,
                                        double K, double budget) {
        CausalFunction f;
        f.eval = std::move(fn);
        f.growth_K = K;
        f.budget = budget;
        return f;
    }
    static CausalFunction from_structure(Structure st, double K, double budget) {
        CausalFunction f;
        f.structure = std::move(st);
        f.eval = [s = *f.structure](double sigma) { return s.eval(sigma); };
        f.growth_K = K;
        f.budget = budget;
        return f;
    }
};

// ---------------------------------------------------------------------------
// Stable polynomial x exponential integrals
// ---------------------------------------------------------------------------

namespace detail {

// integral_0^Delta u^m e^{s u} du by power series; intended for
// |s|*Delta <= ~1.25 where convergence is fast and cancellation-free.
inline cplx power_exp_moment(int m, double delta, cplx s) {
    cplx term = std::pow(delta, m + 1) / (m + 1.0);
    cplx acc = term;
    for (int r = 1; r < 90; ++r) {
        term *= s * delta * ((double)(m + r) / ((double)r * (m + r + 1.0)));
        acc += term;
        if (std::abs(term) <= 1e-18 * std::abs(acc)) break;
    }
    return acc;
}

// Taylor shift: q such that p(x + u) = sum_m q[m] u^m (repeated Horner).
inline void shift_poly(const std::vector<cplx>& c, double x,
                       std::vector<cplx>& q) {
    q = c;
    const int n = (int)q.size();
    for (int m = 0; m < n; ++m)
        for (int j = n - 2; j >= m; --j) q[j] += x * q[j + 1];
}

// integral_a^b p(sigma) e^{w + s*sigma} dsigma (finite interval).
// Stable whenever Re(w + s*sigma) stays below ~ +30 across [a,b]; callers
// arrange fused exponents so the real part is <= 0.
inline cplx poly_exp_finite(const std::vector<cplx>& coeffs, double a, double b,
                            cplx s, cplx w) {
    if (!(b > a)) return cplx{};
    long chunks = 1 + (long)std::floor(std::abs(s) * (b - a));
    if (chunks > 20000000L)
        throw accuracy_error("poly_exp_finite: oscillation count too large",
                             0.0, (double)chunks);
    const double h = (b - a) / (double)chunks;
    std::vector<cplx> q;
    cplx acc{};
    for (long k = 0; k < chunks; ++k) {
        const double x = a + k * h;
        shift_poly(coeffs, x, q);
        cplx pref = std::exp(w + s * x);
        if (pref == cplx{}) continue; // underflow: chunk contributes nothing
        cplx sub{};
        for (std::size_t m = 0; m < q.size(); ++m)
            if (q[m] != cplx{}) sub += q[m] * power_exp_moment((int)m, h, s);
        acc += pref * sub;
    }
    return acc;
}

// integral_a^inf p(sigma) e^{w + s*sigma} dsigma via the shifted closed form
//   e^{w + s a} * sum_m q[m] * m! / (-s)^{m+1}.
// Valid for Re s < 0; for Re s == 0, s != 0 it is the analytic continuation
// of the transform (used on contour arcs at the imaginary axis).
inline cplx poly_exp_tail(const std::vector<cplx>& coeffs, double a, cplx s,
                          cplx w) {
    if (s == cplx{})
        throw domain_error("poly_exp_tail: divergent tail (s == 0)");
    std::vector<cplx> q;
    shift_poly(coeffs, a, q);
    cplx acc{};
    double factorial = 1.0;
    cplx inv = 1.0 / (-s);
    cplx power = inv;
    for (std::size_t m = 0; m < q.size(); ++m) {
        if (m > 0) {
            factorial *= (double)m;
            power *= inv;
        }
        acc += q[m] * factorial * power;
    }
    return std::exp(w + s * a) * acc;
}

// ---------------------------------------------------------------------------
// Antiderivatives of sigma^k (1+sigma^2)^{w/2} for integer k >= 0, w <= 0.
// ---------------------------------------------------------------------------
//
//   I(k,w) = [sigma^{k-1}(1+sigma^2)^{(w+2)/2} - (k-1) I(k-2,w)] / (k+w+1)
//   I(0,w) = [sigma (1+sigma^2)^{(w+2)/2} - (w+3) I(0,w+2)] / (-w-2)
//   I(1,w) = (1+sigma^2)^{(w+2)/2} / (w+2)          (w != -2)
// with bases I(0,0)=sigma, I(0,-1)=asinh, I(0,-2)=atan, I(1,-2)=log/2, and
// the k+w+1 == 0 pivot I(k,w) = I(k-2,w+2) - I(k-2,w).

inline double bracket_antideriv(int k, int w, double sigma) {
    if (k < 0 || w > 0) throw precondition_error("bracket_antideriv: k>=0, w<=0");
    const double s2p1 = 1.0 + sigma * sigma;
    if (k == 0) {
        if (w == 0) return sigma;
        if (w == -1) return std::asinh(sigma);
        if (w == -2) return std::atan(sigma);
        return (sigma * std::pow(s2p1, 0.5 * (w + 2)) -
                (w + 3) * bracket_antideriv(0, w + 2, sigma)) /
               (double)(-w - 2);
    }
    if (k == 1) {
        if (w == -2) return 0.5 * std::log(s2p1);
        return std::pow(s2p1, 0.5 * (w + 2)) / (double)(w + 2);
    }
    if (k + w + 1 == 0)
        return bracket_antideriv(k - 2, w + 2, sigma) -
               bracket_antideriv(k - 2, w, sigma);
    return (std::pow(sigma, k - 1) * std::pow(s2p1, 0.5 * (w + 2)) -
            (k - 1) * bracket_antideriv(k - 2, w, sigma)) /
           (double)(k + w + 1);
}

// integral_a^b p(sigma) <sigma>^w dsigma, exact up to roundoff
inline cplx bracket_poly_integral(const std::vector<cplx>& coeffs, int w,
                                  double a, double b) {
    cplx acc{};
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (coeffs[k] == cplx{}) continue;
        acc += coeffs[k] * (bracket_antideriv((int)k, w, b) -
                            bracket_antideriv((int)k, w, a));
    }
    return acc;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Structure transforms (closed forms)
// ---------------------------------------------------------------------------

namespace detail {

// Clip a piece to [0, Sigma]; returns false if empty.
inline bool clip_piece(const Piece& p, double Sigma, double& lo, double& hi) {
    lo = p.lo;
    hi = std::min(p.hi, Sigma);
    return hi > lo;
}

} // namespace detail

// integral_0^Sigma f e^{-sigma t} dsigma for structural f (exact).
// bracket_weight != 0 is supported only at t == 0 here; callers route other
// combinations through quadrature.
inline cplx structure_partial_fl(const Structure& st, double Sigma, cplx t) {
    cplx acc{};
    for (const Piece& p : st.pieces) {
        double lo, hi;
        if (!detail::clip_piece(p, Sigma, lo, hi)) continue;
        if (st.bracket_weight != 0) {
            if (t != cplx{} || p.decay != 0.0)
                throw precondition_error(
                    "structure_partial_fl: bracket weight needs t == 0 and "
                    "decay-free pieces");
            acc += detail::bracket_poly_integral(p.coeffs, st.bracket_weight,
                                                 lo, hi);
        } else {
            acc += detail::poly_exp_finite(p.coeffs, lo, hi, -(t + p.decay),
                                           cplx{});
        }
    }
    return acc;
}

// Full transform integral_0^inf f e^{-sigma t} dsigma for structural f with
// bracket_weight == 0.  Needs Re(t + decay) > 0 on every unbounded piece
// (Re t itself may be anything on bounded pieces).
inline cplx structure_fl(const Structure& st, cplx t) {
    if (st.bracket_weight != 0)
        throw precondition_error("structure_fl: bracket weight unsupported");
    cplx acc{};
    for (const Piece& p : st.pieces) {
        const cplx s = -(t + p.decay);
        if (p.hi == fl_infinity) {
            if (!(std::real(t) + p.decay > 0))
                throw domain_error("structure_fl: transform diverges on an "
                                   "unbounded piece");
            acc += detail::poly_exp_tail(p.coeffs, p.lo, s, cplx{});
        } else {
            acc += detail::poly_exp_finite(p.coeffs, p.lo, p.hi, s, cplx{});
        }
    }
    return acc;
}

// Boundary value on the imaginary axis, c(tau) = A(0 + i tau), by closed
// form.  Unbounded decay-free pieces use the analytic continuation of the
// tail formula and therefore require tau != 0.
inline cplx structure_axis_value(const Structure& st, double tau) {
    if (st.bracket_weight != 0)
        throw precondition_error("structure_axis_value: bracket weight "
                                 "unsupported");
    const cplx it{0.0, tau};
    cplx acc{};
    for (const Piece& p : st.pieces) {
        const cplx s = -(it + p.decay);
        if (p.hi == fl_infinity) {
            if (p.decay == 0.0 && tau == 0.0)
                throw domain_error("structure_axis_value: divergent at tau=0");
            acc += detail::poly_exp_tail(p.coeffs, p.lo, s, cplx{});
        } else {
            acc += detail::poly_exp_finite(p.coeffs, p.lo, p.hi, s, cplx{});
        }
    }
    return acc;
}

// Fused head: integral_0^Sigma f(sigma) e^{(Sigma - sigma) t} dsigma, which
// equals C_Sigma(t) * e^{t Sigma}.  Safe for Re t <= 0 (left contour arcs):
// every exponent has nonpositive real part.
inline cplx structure_head_transform(const Structure& st, double Sigma, cplx t) {
    if (st.bracket_weight != 0)
        throw precondition_error("structure_head_transform: bracket weight "
                                 "unsupported");
    if (std::real(t) > 1e-12)
        throw precondition_error("structure_head_transform: needs Re t <= 0");
    cplx acc{};
    for (const Piece& p : st.pieces) {
        double lo, hi;
        if (!detail::clip_piece(p, Sigma, lo, hi)) continue;
        // integrand = p(sigma) e^{Sigma t} e^{-sigma (t + decay)}
        acc += detail::poly_exp_finite(p.coeffs, lo, hi, -(t + p.decay),
                                       Sigma * t);
    }
    return acc;
}

// Fused tail: integral_Sigma^inf f(sigma) e^{(Sigma - sigma) t} dsigma, which
// equals (C(t) - C_Sigma(t)) * e^{t Sigma}.  Safe for Re t >= 0 (right
// contour arcs); decay-free unbounded pieces use the tail continuation and
// need t != 0.
inline cplx structure_tail_transform(const Structure& st, double Sigma, cplx t) {
    if (st.bracket_weight != 0)
        throw precondition_error("structure_tail_transform: bracket weight "
                                 "unsupported");
    if (std::real(t) < -1e-12)
        throw precondition_error("structure_tail_transform: needs Re t >= 0");
    cplx acc{};
    for (const Piece& p : st.pieces) {
        double lo = std::max(p.lo, Sigma);
        if (p.hi == fl_infinity) {
            acc += detail::poly_exp_tail(p.coeffs, lo, -(t + p.decay),
                                         Sigma * t);
        } else {
            if (p.hi <= lo) continue;
            acc += detail::poly_exp_finite(p.coeffs, lo, p.hi, -(t + p.decay),
                                           Sigma * t);
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Black-box quadrature paths
// ---------------------------------------------------------------------------

namespace detail {

// Truncation radius R with budget * 2^{K/2+1} R^K e^{-R x} / x <= tol_abs,
// doubled from a starting guess.  Requires x > 0.
inline double truncation_radius(double K, double budget, double x,
                                double tol_abs, double r_cap,
                                double* achieved = nullptr) {
    double R = std::max(4.0, 4.0 / x);
    auto tail_bound = [&](double r) {
        double lg = std::log(budget) + 0.5 * K * std::log(4.0) +
                    K * std::log(std::max(r, 1.0)) - r * x - std::log(x) +
                    std::log(2.0);
        return std::exp(lg);
    };
    while (tail_bound(R) > tol_abs) {
        R *= 2;
        if (R > r_cap) {
            if (achieved) *achieved = tail_bound(r_cap);
            return -1.0;
        }
    }
    if (achieved) *achieved = tail_bound(R);
    return R;
}

// Quadrature of f(sigma) e^{-sigma t} over [a,b], splitting panels by the
// oscillation scale |Im t| when present.
template <class F>
inline cplx quad_exp_interval(F&& f, double a, double b, cplx t, double tol) {
    auto g = [&](double sigma) { return f(sigma) * std::exp(-sigma * t); };
    double freq = std::abs(std::imag(t));
    if (freq * (b - a) > 8.0)
        return oscillatory_integrate(g, a, b, freq, tol).value;
    return adaptive_integrate(g, a, b, tol, 16, 48);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

// A(t) = integral_0^inf f e^{-sigma t} dsigma; requires Re t > 0.
inline cplx fl_transform(const CausalFunction& f, cplx t, double tol = 1e-10) {
    if (!(std::real(t) > 0))
        throw domain_error("fl_transform: needs Re t > 0");
    if (f.structure && f.structure->bracket_weight == 0)
        return structure_fl(*f.structure, t);
    // black-box (or bracket-weighted) truncated quadrature
    const double x = std::real(t);
    double achieved = 0;
    double R = detail::truncation_radius(f.growth_K, f.budget, x, 0.5 * tol,
                                         1e9, &achieved);
    if (R < 0)
        throw accuracy_error("fl_transform: truncation radius cap exceeded",
                             tol, achieved);
    return detail::quad_exp_interval(f.eval, 0.0, R, t, 0.5 * tol);
}

// A_Sigma(t) = integral_0^Sigma f e^{-sigma t} dsigma; entire in t.
inline cplx partial_fl(const CausalFunction& f, double Sigma, cplx t,
                       double tol = 1e-10) {
    if (!(Sigma >= 0)) throw domain_error("partial_fl: Sigma must be >= 0");
    if (Sigma * std::max(0.0, -std::real(t)) > 690.0)
        throw domain_error("partial_fl: e^{-sigma t} overflows; use the fused "
                           "contour evaluators instead");
    if (f.structure) {
        const Structure& st = *f.structure;
        if (st.bracket_weight == 0) return structure_partial_fl(st, Sigma, t);
        if (t == cplx{}) return structure_partial_fl(st, Sigma, t);
        // bracket weight with t != 0: piecewise quadrature (integrand is
        // smooth inside each piece)
        cplx acc{};
        for (const Piece& p : st.pieces) {
            double lo, hi;
            if (!detail::clip_piece(p, Sigma, lo, hi)) continue;
            acc += detail::quad_exp_interval(
                [&](double sigma) { return st.eval(sigma); }, lo, hi, t, tol);
        }
        return acc;
    }
    return detail::quad_exp_interval(f.eval, 0.0, Sigma, t, tol);
}

// ---------------------------------------------------------------------------
// Boundary values along t = eps + i tau
// ---------------------------------------------------------------------------

struct BoundaryValue {
    cplx value{};                 // extrapolated limit
    double observed_order = 0;    // convergence order measured from the ladder
    bool converged = false;
    std::vector<std::pair<double, cplx>> ladder; // (eps, A(eps + i tau))
};

inline std::vector<double> default_eps_ladder() {
    std::vector<double> eps;
    double e = 0.1;
    for (int k = 0; k < 10; ++k) {
        eps.push_back(e);
        e *= 0.5;
    }
    return eps;
}

// Evaluates A(eps_k + i tau) down the ladder and applies two-point Richardson
// extrapolation assuming first-order convergence in eps (the generic rate for
// these transforms; the observed order is measured and reported).  When the
// ladder does not stabilize, converged=false and the raw ladder is returned
// rather than a fabricated digit.
inline BoundaryValue boundary_value(const CausalFunction& f, double tau,
                                    std::vector<double> eps_list = {},
                                    double tol = 1e-8) {
    if (eps_list.empty()) eps_list = default_eps_ladder();
    if (eps_list.size() < 3)
        throw precondition_error("boundary_value: need >= 3 ladder points");
    BoundaryValue out;
    for (double e : eps_list) {
        if (!(e > 0))
            throw domain_error("boundary_value: ladder eps must be > 0");
        out.ladder.emplace_back(e, fl_transform(f, cplx(e, tau),
                                                std::min(tol * 0.1, 1e-10)));
    }
    const std::size_t n = out.ladder.size();
    // observed order from the last three raw values (assumes ratio ~ const)
    cplx d1 = out.ladder[n - 2].second - out.ladder[n - 3].second;
    cplx d2 = out.ladder[n - 1].second - out.ladder[n - 2].second;
    double ratio = (std::abs(d2) > 0) ? std::abs(d1) / std::abs(d2) : 0.0;
    double step_ratio = out.ladder[n - 3].first / out.ladder[n - 2].first;
    out.observed_order =
        (ratio > 0 && step_ratio > 1) ? std::log(ratio) / std::log(step_ratio)
                                      : 0.0;
    // two-point first-order Richardson on the last pairs
    auto extrap = [&](std::size_t i) {
        double e1 = out.ladder[i - 1].first, e2 = out.ladder[i].first;
        cplx a1 = out.ladder[i - 1].second, a2 = out.ladder[i].second;
        return a2 + (a2 - a1) * (e2 / (e1 - e2));
    };
    cplx r_prev = extrap(n - 2), r_last = extrap(n - 1);
    out.value = r_last;
    double scale = std::max(1.0, std::abs(r_last));
    bool stable = std::abs(r_last - r_prev) <= std::max(tol, 1e-12) * scale;
    // the raw ladder must actually be contracting; order well below 1 means
    // the limit is not being approached linearly and the value is suspect
    bool contracting = std::abs(d2) <= std::abs(d1) * 1.02 + 1e-14 * scale;
    out.converged = stable && contracting &&
                    (out.observed_order > 0.7 || std::abs(d2) <= 1e-12 * scale);
    return out;
}

} // namespace weylab
