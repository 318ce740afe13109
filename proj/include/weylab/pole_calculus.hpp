#pragma once

// Dictionary between one-sided polynomial growth and distributional poles.
//
// For a polynomial Z of degree J-1, the transform of the truncated function
// Theta(sigma) Z(sigma) is a combination of boundary-value poles at the
// origin:
//
//     sum_{j=1}^{J} a_j (tau - i0)^{-j}
//       <->   Z(sigma) = sum_{j=0}^{J-1} i^{j+1} a_{j+1} sigma^j / j!
//
// (j = 1, a_1 = -i is the Heaviside case.)  Fractional orders j > 0 enter
// the asymptotic evaluation through e^{i pi j / 2} and Gamma(j+1); they have
// no polynomial counterpart and are rejected by the polynomial conversions.
//
// Unit phases i^k are applied by ordinary complex multiplication with the
// exact constants {1, i, -1, -i}, which is exact in IEEE arithmetic, so the
// two conversions invert each other bit-for-bit whenever the factorial
// products are representable.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "weylab/errors.hpp"
#include "weylab/quadrature.hpp"

namespace weylab {

// ---------------------------------------------------------------------------
// Pole data
// ---------------------------------------------------------------------------

struct PoleTerm {
    double order = 1; // j > 0; integer-valued orders admit polynomial form
    cplx coefficient{};
};

struct PoleExpansion {
    std::vector<PoleTerm> terms; // ascending order
    cplx constant{};             // additive constant (the "smooth" a_00 term)
};

inline bool is_integer_order(double j) {
    return std::abs(j - std::nearbyint(j)) < 1e-12 && j >= 1.0;
}

// i^k for integer k (exact unit rotation)
inline cplx i_power(long k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return cplx{1, 0};
        case 1: return cplx{0, 1};
        case 2: return cplx{-1, 0};
        default: return cplx{0, -1};
    }
}

inline double exact_factorial(int n) {
    if (n < 0 || n > 170) throw domain_error("factorial out of double range");
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// ---------------------------------------------------------------------------
// Polynomial ansatz
// ---------------------------------------------------------------------------

// Z(sigma) plus an optional compactly supported bump correction E(sigma).
struct PolynomialAnsatz {
    std::vector<cplx> coefficients; // coefficients[j] multiplies sigma^j
    double bump_center = 1.5;       // E is amplitude * chi((x-c)/halfwidth)
    double bump_halfwidth = 0.5;
    double bump_amplitude = 0.0; // 0: no correction

    int degree() const {
        for (int j = (int)coefficients.size() - 1; j >= 0; --j)
            if (coefficients[j] != cplx{}) return j;
        return -1; // zero polynomial
    }
    cplx eval(double sigma) const {
        cplx v{};
        for (std::size_t j = coefficients.size(); j-- > 0;)
            v = v * sigma + coefficients[j];
        return v;
    }
};

// ---------------------------------------------------------------------------
// Polynomial <-> pole conversions (integer orders)
// ---------------------------------------------------------------------------

// coefficient of sigma^j is i^{j+1} a_{j+1} / j!
inline PolynomialAnsatz poles_to_polynomial(const PoleExpansion& p) {
    int jmax = 0;
    for (const PoleTerm& t : p.terms) {
        if (!is_integer_order(t.order))
            throw domain_error(
                "poles_to_polynomial: fractional order " +
                std::to_string(t.order) +
                " has no polynomial counterpart; evaluate it through "
                "asymptotic_contribution instead");
        jmax = std::max(jmax, (int)std::nearbyint(t.order));
    }
    PolynomialAnsatz z;
    z.coefficients.assign(std::max(jmax, 0), cplx{});
    for (const PoleTerm& t : p.terms) {
        int j = (int)std::nearbyint(t.order);
        z.coefficients[j - 1] +=
            i_power(j) * t.coefficient / exact_factorial(j - 1);
    }
    return z;
}

// a_{j+1} = j! b_j i^{-(j+1)}
inline PoleExpansion polynomial_to_poles(const std::vector<cplx>& coeffs) {
    PoleExpansion p;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        PoleTerm t;
        t.order = (double)(j + 1);
        t.coefficient =
            coeffs[j] * exact_factorial((int)j) * i_power(-(long)(j + 1));
        p.terms.push_back(t);
    }
    return p;
}

inline PoleExpansion polynomial_to_poles(const PolynomialAnsatz& z) {
    return polynomial_to_poles(z.coefficients);
}

// (tau - i0)^{-j}: tau^{-j} for tau > 0, |tau|^{-j} e^{+i pi j} for tau < 0
// (the branch reached from below the negative real axis).
inline cplx minus_i0_power(double tau, double j) {
    if (tau == 0) throw domain_error("minus_i0_power: singular at tau = 0");
    if (tau > 0) return cplx{std::pow(tau, -j), 0.0};
    return std::pow(-tau, -j) * std::polar(1.0, 3.14159265358979323846 * j);
}

// ---------------------------------------------------------------------------
// Asymptotic evaluation
// ---------------------------------------------------------------------------

// constant + sum_j e^{i pi j / 2} a_j Sigma^j / Gamma(j+1); integer orders
// use the exact phase and factorial, fractional ones go through polar/tgamma.
inline cplx asymptotic_contribution(const PoleExpansion& p, double Sigma) {
    if (!(Sigma > 0)) throw domain_error("asymptotic_contribution: Sigma > 0");
    cplx acc = p.constant;
    for (const PoleTerm& t : p.terms) {
        if (!(t.order > 0))
            throw domain_error("asymptotic_contribution: orders must be > 0");
        cplx phase;
        double gamma1;
        if (is_integer_order(t.order)) {
            int j = (int)std::nearbyint(t.order);
            phase = i_power(j);
            gamma1 = exact_factorial(j);
        } else {
            phase = std::polar(1.0, 0.5 * 3.14159265358979323846 * t.order);
            gamma1 = std::tgamma(t.order + 1.0);
        }
        acc += phase * t.coefficient * std::pow(Sigma, t.order) / gamma1;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Bump corrections
// ---------------------------------------------------------------------------

// shape of the standard smooth bump: exp(-1/(1-u^2)) on (-1,1), zero outside
inline double bump_profile_unit(double u) {
    if (!(std::abs(u) < 1.0)) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

// integral_{-1}^{1} exp(-1/(1-u^2)) du, computed once to ~1e-14 and cached.
inline double bump_profile_mass() {
    static const double mass = [] {
        auto f = [](double u) { return cplx{bump_profile_unit(u), 0.0}; };
        return std::real(doubling_integrate(f, -1.0, 1.0, 1e-13, 64).value);
    }();
    return mass;
}

struct BumpSpec {
    double center = 1.5;
    double halfwidth = 0.5; // support (center - halfwidth, center + halfwidth)
    double amplitude = 0.0; // 0 disables the bump

    double eval(double sigma) const {
        if (amplitude == 0.0 || halfwidth <= 0) return 0.0;
        return amplitude * bump_profile_unit((sigma - center) / halfwidth);
    }
};

// The normalized cutoff profile on (1,2) with unit mass.
inline BumpSpec normalized_unit_bump() {
    BumpSpec b;
    b.center = 1.5;
    b.halfwidth = 0.5;
    b.amplitude = 1.0 / (b.halfwidth * bump_profile_mass());
    return b;
}

// Solves for the amplitude A so that integral weight(sigma) * E_A(sigma)
// dsigma = target, where E_A is `shape` with amplitude A.  The dependence on
// A is monotone (linear), so a secant step from two trial amplitudes lands on
// the root; the loop below is a guarded secant iteration for robustness.
inline double solve_bump_amplitude(const BumpSpec& shape,
                                   const std::function<double(double)>& weight,
                                   double target, double tol = 1e-12) {
    auto mass = [&](double amp) {
        BumpSpec b = shape;
        b.amplitude = amp;
        auto f = [&](double sigma) { return cplx{weight(sigma) * b.eval(sigma), 0.0}; };
        return std::real(doubling_integrate(f, shape.center - shape.halfwidth,
                                            shape.center + shape.halfwidth,
                                            1e-13, 64)
                             .value);
    };
    double a0 = 0.0, a1 = 1.0;
    double g0 = mass(a0) - target, g1 = mass(a1) - target;
    for (int it = 0; it < 60; ++it) {
        if (std::abs(g1 - g0) < 1e-300)
            throw domain_error("solve_bump_amplitude: weight annihilates the "
                               "bump; amplitude is undetermined");
        double a2 = a1 - g1 * (a1 - a0) / (g1 - g0);
        double g2 = mass(a2) - target;
        a0 = a1; g0 = g1; a1 = a2; g1 = g2;
        if (std::abs(g1) <= tol * std::max(1.0, std::abs(target))) return a1;
    }
    throw accuracy_error("solve_bump_amplitude: secant did not converge", tol,
                         std::abs(g1));
}

} // namespace weylab
