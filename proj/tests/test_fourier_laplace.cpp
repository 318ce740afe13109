#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "weylab/fourier_laplace.hpp"
#include "weylab/quadrature.hpp"

using namespace weylab;

namespace {

Structure heaviside() {
    Structure st;
    Piece p;
    p.lo = 0;
    p.coeffs = {cplx{1, 0}};
    st.pieces = {p};
    return st;
}

Structure decaying_exp() { // Theta(sigma) e^{-sigma}
    Structure st = heaviside();
    st.pieces[0].decay = 1.0;
    return st;
}

Structure monomial(int j) { // Theta(sigma) sigma^j
    Structure st;
    Piece p;
    p.lo = 0;
    p.coeffs.assign(j + 1, cplx{});
    p.coeffs[j] = 1;
    st.pieces = {p};
    return st;
}

} // namespace

TEST_CASE("quadrature building blocks") {
    // Gauss rule integrates low-degree polynomials exactly
    auto f7 = [](double x) { return cplx{x * x * x * x * x * x * x, 0.0}; };
    REQUIRE(std::abs(gl_integrate(f7, 0.0, 1.0, 4) - cplx{0.125, 0.0}) <
            1e-14);

    auto fe = [](double x) { return cplx{std::exp(x), 0.0}; };
    auto r = doubling_integrate(fe, 0.0, 1.0, 1e-12);
    REQUIRE(std::abs(r.value - cplx{std::exp(1.0) - 1.0, 0.0}) < 1e-12);

    auto osc = [](double x) { return cplx{std::cos(50.0 * x), 0.0}; };
    cplx io = oscillatory_integrate(osc, 0.0, 1.0, 50.0, 1e-12);
    REQUIRE(std::abs(io - cplx{std::sin(50.0) / 50.0, 0.0}) < 1e-11);

    auto kink = [](double x) { return cplx{std::abs(x - 0.3), 0.0}; };
    cplx ik = adaptive_integrate(kink, 0.0, 1.0, 1e-10);
    REQUIRE(std::abs(ik - cplx{0.3 * 0.3 / 2 + 0.7 * 0.7 / 2, 0.0}) < 1e-9);

    std::vector<double> grid(101);
    for (int i = 0; i <= 100; ++i) {
        double x = i / 100.0;
        grid[i] = x * x;
    }
    REQUIRE(simpson_on_grid(grid, 0.01) == Catch::Approx(1.0 / 3).margin(1e-12));
}

TEST_CASE("stable polynomial-exponential integrals") {
    // closed form: integral_0^1 sigma^3 e^{2 sigma} dsigma
    auto oracle = [](double sexp) {
        auto f = [&](double x) {
            return cplx{x * x * x * std::exp(sexp * x), 0.0};
        };
        return doubling_integrate(f, 0.0, 1.0, 1e-13).value;
    };
    std::vector<cplx> cubic = {0, 0, 0, 1};
    for (double sv : {2.0, -2.0, 0.001, -0.001, 0.0}) {
        cplx got = detail::poly_exp_finite(cubic, 0.0, 1.0, cplx{sv, 0}, cplx{});
        REQUIRE(std::abs(got - oracle(sv)) < 1e-12 * std::abs(got));
    }
    // oscillatory s: integral_0^1 sigma^3 e^{2 i sigma}
    cplx gi = detail::poly_exp_finite(cubic, 0.0, 1.0, cplx{0, 2}, cplx{});
    auto fi = [](double x) {
        return cplx{x * x * x, 0.0} * std::exp(cplx{0, 2.0 * x});
    };
    REQUIRE(std::abs(gi - doubling_integrate(fi, 0.0, 1.0, 1e-13).value) <
            1e-12);

    // tail: integral_2^inf (1 + sigma^2) e^{-3 sigma}
    std::vector<cplx> quad = {1, 0, 1};
    cplx tail = detail::poly_exp_tail(quad, 2.0, cplx{-3, 0}, cplx{});
    auto ft = [](double x) {
        return cplx{(1 + x * x) * std::exp(-3.0 * x), 0.0};
    };
    cplx tor = doubling_integrate(ft, 2.0, 30.0, 1e-14).value;
    REQUIRE(std::abs(tail - tor) < 1e-12);
    REQUIRE_THROWS_AS(detail::poly_exp_tail(quad, 2.0, cplx{}, cplx{}),
                      domain_error);
}

TEST_CASE("transforms of the step and the decaying exponential") {
    CausalFunction theta = CausalFunction::from_structure(heaviside(), 0, 1);
    CausalFunction expd = CausalFunction::from_structure(decaying_exp(), 0, 1);

    for (cplx t : {cplx{2, 0}, cplx{0.3, 1.0}, cplx{1, -4}}) {
        REQUIRE(std::abs(fl_transform(theta, t) - 1.0 / t) < 1e-12);
        REQUIRE(std::abs(fl_transform(expd, t) - 1.0 / (1.0 + t)) < 1e-12);
    }
    REQUIRE_THROWS_AS(fl_transform(theta, cplx{0, 1}), domain_error);
    REQUIRE_THROWS_AS(fl_transform(theta, cplx{-1, 0}), domain_error);

    // black-box route goes through truncation + quadrature
    CausalFunction bb = CausalFunction::from_callable(
        [](double sigma) { return cplx{std::exp(-sigma), 0.0}; }, 0, 1);
    for (cplx t : {cplx{1, 0}, cplx{0.5, 2.0}}) {
        REQUIRE(std::abs(fl_transform(bb, t, 1e-10) - 1.0 / (1.0 + t)) < 1e-8);
    }
}

TEST_CASE("partial transforms") {
    CausalFunction theta = CausalFunction::from_structure(heaviside(), 0, 1);
    CausalFunction lin = CausalFunction::from_structure(monomial(1), 1, 1);

    for (double Sigma : {0.5, 3.0, 10.0}) {
        for (cplx t : {cplx{1, 0}, cplx{0.2, 2.0}, cplx{0, 1.3}, cplx{-0.1, 0.7}}) {
            cplx expect = (1.0 - std::exp(-Sigma * t)) / t;
            REQUIRE(std::abs(partial_fl(theta, Sigma, t) - expect) < 1e-11);
            cplx el = (1.0 - std::exp(-Sigma * t) * (1.0 + Sigma * t)) / (t * t);
            REQUIRE(std::abs(partial_fl(lin, Sigma, t) - el) <
                    1e-11 * std::max(1.0, std::abs(el)));
        }
        // t = 0: plain moment integrals
        REQUIRE(std::abs(partial_fl(theta, Sigma, cplx{}) - Sigma) < 1e-13);
        REQUIRE(std::abs(partial_fl(lin, Sigma, cplx{}) -
                         0.5 * Sigma * Sigma) < 1e-12 * Sigma * Sigma);
    }

    // black box matches structural on a two-piece function
    Structure two;
    {
        Piece a;
        a.lo = 0;
        a.hi = 2;
        a.coeffs = {cplx{1, 0}, cplx{0, 0.5}};
        Piece b;
        b.lo = 2;
        b.coeffs = {cplx{0.25, -1}, cplx{0.125, 0}};
        b.decay = 0.5;
        two.pieces = {a, b};
    }
    CausalFunction st2 = CausalFunction::from_structure(two, 1, 2);
    CausalFunction bb2 = CausalFunction::from_callable(
        [two](double sigma) { return two.eval(sigma); }, 1, 2);
    for (double Sigma : {1.0, 4.0}) {
        for (cplx t : {cplx{0.7, 0.4}, cplx{0, 2.0}}) {
            cplx a = partial_fl(st2, Sigma, t);
            cplx b = partial_fl(bb2, Sigma, t, 1e-10);
            REQUIRE(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
        }
        cplx fa = fl_transform(st2, cplx{0.7, 0.4});
        cplx fb = fl_transform(bb2, cplx{0.7, 0.4}, 1e-10);
        REQUIRE(std::abs(fa - fb) < 1e-8 * std::abs(fa));
    }

    // deep truncation guard: strongly negative Re t at large Sigma is
    // rejected in favor of the fused evaluators
    REQUIRE_THROWS_AS(partial_fl(theta, 1000.0, cplx{-1, 0}), domain_error);
}

TEST_CASE("transform is analytic (Cauchy-Riemann by differences)") {
    Structure two = monomial(2);
    CausalFunction f = CausalFunction::from_structure(two, 2, 1);
    auto F = [&](cplx t) { return partial_fl(f, 3.0, t); };
    cplx t0{0.4, 0.9};
    auto cr_residual = [&](double d) {
        cplx dx = (F(t0 + cplx{d, 0}) - F(t0 - cplx{d, 0})) / (2 * d);
        cplx dy = (F(t0 + cplx{0, d}) - F(t0 - cplx{0, d})) / (2 * d);
        return std::abs(dx - dy / cplx{0, 1});
    };
    double r1 = cr_residual(1e-3), r2 = cr_residual(5e-4);
    REQUIRE(r1 < 1e-4);
    REQUIRE(r1 / r2 > 3.0); // O(d^2) vanishing residual
    REQUIRE(r1 / r2 < 5.0);
}

TEST_CASE("fused contour-side transforms") {
    // head: C_Sigma(t) e^{t Sigma} for the step: (e^{Sigma t} - 1)/t
    Structure th = heaviside();
    for (double Sigma : {1.0, 30.0}) {
        for (cplx t : {cplx{0, 0.7}, cplx{-0.5, 1.0}, cplx{-3, 0}}) {
            cplx expect = (std::exp(Sigma * t) - 1.0) / t;
            REQUIRE(std::abs(structure_head_transform(th, Sigma, t) - expect) <
                    1e-11 * std::max(1.0, std::abs(expect)));
        }
    }
    // no overflow where the naive product would blow up
    cplx big = structure_head_transform(th, 100.0, cplx{-7, 0});
    REQUIRE(std::abs(big - 1.0 / 7.0) < 1e-12);
    REQUIRE_THROWS_AS(structure_head_transform(th, 1.0, cplx{0.5, 0}),
                      precondition_error);

    // tail: (C - C_Sigma)(t) e^{t Sigma} for Theta e^{-sigma}:
    // integral_0^inf e^{-(Sigma+u)} e^{-u t} du = e^{-Sigma} / (1 + t)
    Structure de = decaying_exp();
    for (double Sigma : {2.0, 5.0}) {
        for (cplx t : {cplx{2, 0}, cplx{0, 3}, cplx{0, -1.2}}) {
            cplx expect = std::exp(-Sigma) / (1.0 + t);
            REQUIRE(std::abs(structure_tail_transform(de, Sigma, t) - expect) <
                    1e-12);
        }
    }
    REQUIRE_THROWS_AS(structure_tail_transform(de, 1.0, cplx{-0.5, 0}),
                      precondition_error);

    // axis values: closed-form boundary limit of the step transform
    for (double tau : {1.0, -1.0, 2.5, -2.5}) {
        cplx expect = cplx{0, -1} / tau; // -i (tau - i0)^{-1} off tau = 0
        REQUIRE(std::abs(structure_axis_value(th, tau) - expect) < 1e-13);
    }
}

TEST_CASE("boundary values by Richardson extrapolation") {
    CausalFunction expd =
        CausalFunction::from_structure(decaying_exp(), 0, 1);

    // spec ladder 0.1 -> 0.00625
    std::vector<double> ladder = {0.1, 0.05, 0.025, 0.0125, 0.00625};
    BoundaryValue bv = boundary_value(expd, 3.0, ladder);
    REQUIRE(bv.converged);
    REQUIRE(std::abs(bv.value - 1.0 / cplx{1, 3}) < 1e-5);
    REQUIRE(bv.observed_order == Catch::Approx(1.0).margin(0.35));

    // default ladder reaches ~1e-6 accuracy on tau in [-5, 5]
    for (double tau : {-5.0, -2.0, -0.5, 0.5, 2.0, 5.0}) {
        BoundaryValue b = boundary_value(expd, tau);
        REQUIRE(b.converged);
        REQUIRE(std::abs(b.value - 1.0 / cplx{1, tau}) < 1e-6);
    }

    REQUIRE_THROWS_AS(boundary_value(expd, 1.0, {0.1, 0.05}),
                      precondition_error);
}

TEST_CASE("linearity of the structural transform") {
    Structure a = monomial(1), b = decaying_exp();
    Structure sum;
    sum.pieces = a.pieces;
    for (auto p : b.pieces) {
        for (auto& c : p.coeffs) c *= cplx{2, -1};
        sum.pieces.push_back(p);
    }
    cplx t{0.8, 1.1};
    cplx lhs = structure_fl(sum, t);
    cplx rhs = structure_fl(a, t) + cplx{2, -1} * structure_fl(b, t);
    REQUIRE(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
}
