#pragma once

// Quadrature kernels shared by the transform and contour code.
//
// Everything here is deterministic: node sets depend only on the requested
// order and interval, and all reductions are sequential left-to-right, so a
// given call produces bit-identical results run to run.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

#include "weylab/errors.hpp"

namespace weylab {

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Gauss-Legendre rules
// ---------------------------------------------------------------------------

struct GLRule {
    std::vector<double> x; // nodes on (-1,1), ascending
    std::vector<double> w; // weights, sum = 2
};

namespace detail {

// Nodes via Newton iteration on P_n; standard construction, no tables.
inline GLRule make_gl_rule(int n) {
    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double pi = 3.14159265358979323846;
    for (int k = 0; k < (n + 1) / 2; ++k) {
        // Chebyshev-like initial guess for the k-th root (descending order).
        double x = std::cos(pi * (k + 0.75) / (n + 0.5));
        double p1 = 0, p2 = 0;
        for (int it = 0; it < 100; ++it) {
            p1 = 1.0;        // P_j(x)
            p2 = 0.0;        // P_{j-1}(x)
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
            }
            double dp = n * (x * p1 - p2) / (x * x - 1.0); // P_n'(x)
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one clean-up step, then stop
                p1 = 1.0;
                p2 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
                }
                break;
            }
        }
        double dp = n * (x * p1 - p2) / (x * x - 1.0);
        r.x[k] = -x;                 // ascending order: negative roots first
        r.x[n - 1 - k] = x;
        double wk = 2.0 / ((1.0 - x * x) * dp * dp);
        r.w[k] = wk;
        r.w[n - 1 - k] = wk;
    }
    return r;
}

} // namespace detail

// Cached rule lookup; thread-safe, rules are immutable once built.
inline const GLRule& gl_rule(int n) {
    static std::map<int, GLRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::make_gl_rule(n)).first;
    return it->second;
}

// Single-panel Gauss-Legendre on [a,b].
template <class F>
auto gl_integrate(F&& f, double a, double b, int n) -> decltype(f(a)) {
    const GLRule& r = gl_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    decltype(f(a)) acc{};
    for (int i = 0; i < n; ++i) acc += r.w[i] * f(mid + half * r.x[i]);
    return half * acc;
}

// ---------------------------------------------------------------------------
// Panel-doubling integrator
// ---------------------------------------------------------------------------
//
// Splits [a,b] into 1,2,4,... uniform panels with an n-node rule per panel
// and stops when two successive refinements agree to tol (relative to the
// running magnitude, floored at 1).  Throws accuracy_error at the panel cap.

struct DoublingResult {
    cplx value;
    double error_estimate;
    int panels;
};

template <class F>
DoublingResult doubling_integrate(F&& f, double a, double b, double tol,
                                  int nodes = 64, int max_panels = 4096) {
    auto eval = [&](int panels) {
        cplx acc{};
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p)
            acc += gl_integrate(f, a + p * h, a + (p + 1) * h, nodes);
        return acc;
    };
    cplx prev = eval(1);
    for (int panels = 2;; panels *= 2) {
        cplx cur = eval(panels);
        double err = std::abs(cur - prev);
        double scale = std::max(1.0, std::abs(cur));
        if (err <= tol * scale) return {cur, err, panels};
        if (panels >= max_panels)
            throw accuracy_error("panel-doubling quadrature did not converge",
                                 tol * scale, err);
        prev = cur;
    }
}

// ---------------------------------------------------------------------------
// Adaptive bisection integrator
// ---------------------------------------------------------------------------
//
// Local error from comparing an n-node rule with a 2n-node rule; panels are
// processed in a deterministic depth-first order.

namespace detail {

template <class F>
void adapt_rec(F& f, double a, double b, double tol_abs, int nodes, int depth,
               int max_depth, cplx& acc, double& err_acc) {
    cplx coarse = gl_integrate(f, a, b, nodes);
    cplx fine = gl_integrate(f, a, b, 2 * nodes);
    double err = std::abs(fine - coarse);
    if (err <= tol_abs || depth >= max_depth) {
        acc += fine;
        err_acc += err;
        return;
    }
    double mid = 0.5 * (a + b);
    adapt_rec(f, a, mid, tol_abs * 0.5, nodes, depth + 1, max_depth, acc, err_acc);
    adapt_rec(f, mid, b, tol_abs * 0.5, nodes, depth + 1, max_depth, acc, err_acc);
}

} // namespace detail

// tol is interpreted against max(1, |result|); throws accuracy_error if the
// accumulated local error estimate exceeds that after the depth cap.
template <class F>
cplx adaptive_integrate(F&& f, double a, double b, double tol, int nodes = 16,
                        int max_depth = 24) {
    if (!(b > a)) return cplx{};
    cplx acc{};
    double err_acc = 0;
    detail::adapt_rec(f, a, b, tol, nodes, 0, max_depth, acc, err_acc);
    double scale = std::max(1.0, std::abs(acc));
    if (err_acc > 10 * tol * scale)
        throw accuracy_error("adaptive quadrature did not converge", tol * scale,
                             err_acc);
    return acc;
}

// ---------------------------------------------------------------------------
// Oscillatory integrator
// ---------------------------------------------------------------------------
//
// For integrands with a known dominant frequency (e^{i tau Sigma} factors):
// uniform panels sized so a 16-node rule gives >= 10 points per period, then
// global panel doubling until tol.  The period cap keeps node spacing an
// order of magnitude under the oscillation scale from the start.

template <class F>
DoublingResult oscillatory_integrate(F&& f, double a, double b, double frequency,
                                     double tol, int max_panels = 1 << 18) {
    const double pi = 3.14159265358979323846;
    double period = (frequency > 0) ? 2.0 * pi / frequency : (b - a);
    // 16 nodes per panel; <= 1.6 periods per panel gives >= 10 points/period.
    double max_width = 1.6 * period;
    int min_panels = std::max(1, (int)std::ceil((b - a) / max_width));
    if (min_panels > max_panels)
        throw accuracy_error("oscillatory quadrature panel cap exceeded", tol,
                             1.0);
    auto eval = [&](int panels) {
        cplx acc{};
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p)
            acc += gl_integrate(f, a + p * h, a + (p + 1) * h, 16);
        return acc;
    };
    cplx prev = eval(min_panels);
    for (int panels = 2 * min_panels;; panels *= 2) {
        cplx cur = eval(panels);
        double err = std::abs(cur - prev);
        double scale = std::max(1.0, std::abs(cur));
        if (err <= tol * scale) return {cur, err, panels};
        if (panels >= max_panels)
            throw accuracy_error("oscillatory quadrature did not converge",
                                 tol * scale, err);
        prev = cur;
    }
}

// ---------------------------------------------------------------------------
// Composite Simpson on a uniform grid
// ---------------------------------------------------------------------------
//
// Used for L^1 norms of sampled integrands.  Requires an odd number of
// samples (even interval count).

inline double simpson_on_grid(const std::vector<double>& v, double step) {
    if (v.size() < 3 || v.size() % 2 == 0)
        throw precondition_error("simpson_on_grid needs an odd sample count >= 3");
    double acc = v.front() + v.back();
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        acc += v[i] * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * step / 3.0;
}

} // namespace weylab
