#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "weylab/fourier_laplace.hpp"
#include "weylab/pole_calculus.hpp"
#include "weylab/quadrature.hpp"

using namespace weylab;

TEST_CASE("pole dictionary on the reference cases") {
    // {1: -i} is the step function
    PoleExpansion heav;
    heav.terms = {{1.0, cplx{0, -1}}};
    PolynomialAnsatz z = poles_to_polynomial(heav);
    REQUIRE(z.degree() == 0);
    REQUIRE(z.coefficients[0] == cplx{1, 0});

    // {2: -1} -> Z = sigma
    PoleExpansion second;
    second.terms = {{2.0, cplx{-1, 0}}};
    PolynomialAnsatz zs = poles_to_polynomial(second);
    REQUIRE(zs.degree() == 1);
    REQUIRE(std::abs(zs.coefficients[0]) == 0.0);
    REQUIRE(zs.coefficients[1] == cplx{1, 0});

    // Z = sigma^2 / 2 -> {3: i}
    PoleExpansion p = polynomial_to_poles(
        std::vector<cplx>{cplx{}, cplx{}, cplx{0.5, 0}});
    REQUIRE(p.terms.size() == 3);
    REQUIRE(p.terms[2].order == 3.0);
    REQUIRE(p.terms[2].coefficient == cplx{0, 1});
    REQUIRE(p.terms[0].coefficient == cplx{});
    REQUIRE(p.terms[1].coefficient == cplx{});

    // empty -> zero polynomial
    REQUIRE(poles_to_polynomial(PoleExpansion{}).degree() == -1);

    // fractional orders are rejected with a pointer to the right tool
    PoleExpansion frac;
    frac.terms = {{1.5, cplx{1, 0}}};
    REQUIRE_THROWS_WITH(poles_to_polynomial(frac),
                        Catch::Matchers::ContainsSubstring(
                            "asymptotic_contribution"));
}

TEST_CASE("round trip is exact on random dyadic polynomials") {
    // Coefficients k / 2^12 with |k| < 2^12 have 24-bit significands, so
    // multiplying by j! <= 12! (29 bits) stays exactly representable and the
    // inverse division is exact as well: the round trip must be bitwise.
    std::mt19937_64 rng(20260822);
    std::uniform_int_distribution<int> num(-4095, 4095);
    std::uniform_int_distribution<int> deg(0, 11);
    for (int rep = 0; rep < 200; ++rep) {
        int d = deg(rng);
        std::vector<cplx> coeffs(d + 1);
        for (auto& c : coeffs)
            c = cplx{num(rng) / 4096.0, num(rng) / 4096.0};
        PoleExpansion p = polynomial_to_poles(coeffs);
        PolynomialAnsatz back = poles_to_polynomial(p);
        REQUIRE(back.coefficients.size() == coeffs.size());
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            REQUIRE(back.coefficients[j].real() == coeffs[j].real());
            REQUIRE(back.coefficients[j].imag() == coeffs[j].imag());
        }
        // and poles -> polynomial -> poles
        PoleExpansion again = polynomial_to_poles(back);
        for (std::size_t j = 0; j < p.terms.size(); ++j) {
            REQUIRE(again.terms[j].order == p.terms[j].order);
            REQUIRE(again.terms[j].coefficient.real() ==
                    p.terms[j].coefficient.real());
            REQUIRE(again.terms[j].coefficient.imag() ==
                    p.terms[j].coefficient.imag());
        }
    }
}

TEST_CASE("asymptotic contributions") {
    PoleExpansion heav;
    heav.terms = {{1.0, cplx{0, -1}}};
    for (double Sigma : {0.5, 1.0, 7.0}) {
        cplx v = asymptotic_contribution(heav, Sigma);
        REQUIRE(std::abs(v - cplx{Sigma, 0}) < 1e-14 * std::max(1.0, Sigma));
    }
    heav.constant = cplx{2, 1};
    REQUIRE(std::abs(asymptotic_contribution(heav, 3.0) - cplx{5, 1}) < 1e-14);

    // fractional order: e^{i pi/4} * 2 / Gamma(3/2), Gamma(3/2) = sqrt(pi)/2
    PoleExpansion half;
    half.terms = {{0.5, cplx{1, 0}}};
    cplx got = asymptotic_contribution(half, 4.0);
    const double pi = 3.14159265358979323846;
    cplx expect = std::polar(1.0, pi / 4) * 2.0 / (std::sqrt(pi) / 2.0);
    REQUIRE(std::abs(got - expect) < 1e-13);

    // empty expansion: just the constant
    PoleExpansion none;
    none.constant = cplx{0.25, -2};
    REQUIRE(asymptotic_contribution(none, 9.0) == none.constant);

    PoleExpansion bad;
    bad.terms = {{-1.0, cplx{1, 0}}};
    REQUIRE_THROWS_AS(asymptotic_contribution(bad, 1.0), domain_error);
}

TEST_CASE("asymptotic contribution integrates the polynomial") {
    // For integer orders the Sigma-asymptotics equal integral_0^Sigma Z.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 25; ++rep) {
        std::vector<cplx> coeffs(5);
        for (auto& c : coeffs) c = cplx{u(rng), u(rng)};
        PoleExpansion p = polynomial_to_poles(coeffs);
        p.constant = cplx{u(rng), 0};
        for (double Sigma : {0.5, 2.0, 11.0}) {
            cplx integral{};
            for (std::size_t j = 0; j < coeffs.size(); ++j)
                integral += coeffs[j] * std::pow(Sigma, (double)j + 1) /
                            ((double)j + 1);
            cplx got = asymptotic_contribution(p, Sigma) - p.constant;
            REQUIRE(std::abs(got - integral) <
                    1e-12 * std::max(1.0, std::abs(integral)));
        }
    }
}

TEST_CASE("monomial transforms match the pole formula") {
    // F[Theta sigma^j / j!] has boundary value i^{-(j+1)} (tau - i0)^{-(j+1)}.
    std::vector<double> ladder;
    for (int k = 0; k <= 14; ++k) ladder.push_back(0.1 * std::pow(2.0, -k));
    for (int j = 0; j <= 8; ++j) {
        Structure mono;
        Piece piece;
        piece.lo = 0;
        piece.coeffs.assign(j + 1, cplx{});
        double jf = 1;
        for (int i = 2; i <= j; ++i) jf *= i;
        piece.coeffs[j] = cplx{1.0 / jf, 0};
        mono.pieces = {piece};
        CausalFunction f = CausalFunction::from_structure(mono, j, 1.0 / jf);

        for (double tau : {1.0, -1.0, 2.0, -2.0}) {
            cplx pole = i_power(-(j + 1)) * minus_i0_power(tau, j + 1);
            // sharp oracle: the closed-form boundary limit
            cplx axis = structure_axis_value(mono, tau);
            REQUIRE(std::abs(axis - pole) < 1e-12 * std::abs(pole));
            // ladder extrapolation from inside the half-plane
            BoundaryValue bv = boundary_value(f, tau, ladder);
            REQUIRE(bv.converged);
            REQUIRE(std::abs(bv.value - pole) < 1e-8 * std::abs(pole));
        }
    }
}

TEST_CASE("bump profile and amplitude solving") {
    BumpSpec unit = normalized_unit_bump();
    REQUIRE(unit.center == 1.5);
    REQUIRE(unit.eval(1.0) == 0.0);
    REQUIRE(unit.eval(2.0) == 0.0);
    REQUIRE(unit.eval(0.5) == 0.0);
    REQUIRE(unit.eval(1.5) > 0.0);

    auto total = [&](const BumpSpec& b) {
        auto f = [&](double x) { return cplx{b.eval(x), 0}; };
        return std::real(doubling_integrate(f, 1.0, 2.0, 1e-13).value);
    };
    REQUIRE(total(unit) == Catch::Approx(1.0).margin(1e-11));

    // choose the amplitude so that integral <sigma>^{-1} E = 0.3
    BumpSpec shape;
    shape.center = 1.5;
    shape.halfwidth = 0.5;
    auto weight = [](double sigma) {
        return 1.0 / std::sqrt(1.0 + sigma * sigma);
    };
    double amp = solve_bump_amplitude(shape, weight, 0.3);
    shape.amplitude = amp;
    auto f = [&](double x) { return cplx{weight(x) * shape.eval(x), 0}; };
    double achieved = std::real(doubling_integrate(f, 1.0, 2.0, 1e-13).value);
    REQUIRE(achieved == Catch::Approx(0.3).margin(1e-10));

    auto dead_weight = [](double) { return 0.0; };
    REQUIRE_THROWS_AS(solve_bump_amplitude(shape, dead_weight, 0.5),
                      domain_error);
}

TEST_CASE("branch of (tau - i0)^{-s}") {
    REQUIRE(minus_i0_power(2.0, 1.0) == cplx{0.5, 0});
    // tau < 0, integer s: continuation from below gives e^{i pi s} = (-1)^s
    REQUIRE(std::abs(minus_i0_power(-2.0, 1.0) - cplx{-0.5, 0}) < 1e-15);
    REQUIRE(std::abs(minus_i0_power(-2.0, 2.0) - cplx{0.25, 0}) < 1e-15);
    // fractional: |tau|^{-s} e^{i pi s}
    cplx v = minus_i0_power(-4.0, 0.5);
    REQUIRE(std::abs(v - 0.5 * std::polar(1.0, 1.5707963267948966)) < 1e-15);
    REQUIRE_THROWS_AS(minus_i0_power(0.0, 1.0), domain_error);
}
