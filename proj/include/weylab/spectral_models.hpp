#pragma once

// Model manifolds and their exact spectral data.
//
// Two families are supported:
//   * flat tori R^d / L for a full-rank lattice L, with sqrt-eigenvalues
//     sigma = |xi| over the dual lattice L* = { xi : <xi, v> in 2*pi*Z },
//   * round spheres S^d with sqrt-eigenvalues sigma_k = sqrt(k*(k+d-1)) and
//     the standard harmonic-polynomial multiplicities.
//
// The torus enumeration is exhaustive over an integer coefficient box whose
// per-axis radius comes from Cauchy-Schwarz, so no dual vector within the
// requested radius can be missed.  When the relevant Gram matrix is a scalar
// multiple of an integer matrix, squared norms are compared as exact
// integers; otherwise values are grouped with a 1e-9 relative tolerance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "weylab/errors.hpp"
#include "weylab/parallel.hpp"

namespace weylab {

inline constexpr double two_pi = 6.28318530717958647692;

// ---------------------------------------------------------------------------
// Small dense linear algebra (row-major d x d, d is tiny)
// ---------------------------------------------------------------------------

namespace detail {

// Partial-pivot LU inverse; returns det via the pivots.  A is row-major.
inline std::vector<double> invert_matrix(std::vector<double> a, int d,
                                         double& det_out) {
    std::vector<double> inv(d * d, 0.0);
    for (int i = 0; i < d; ++i) inv[i * d + i] = 1.0;
    double det = 1.0;
    for (int c = 0; c < d; ++c) {
        int piv = c;
        for (int r = c + 1; r < d; ++r)
            if (std::abs(a[r * d + c]) > std::abs(a[piv * d + c])) piv = r;
        if (piv != c) {
            for (int j = 0; j < d; ++j) {
                std::swap(a[piv * d + j], a[c * d + j]);
                std::swap(inv[piv * d + j], inv[c * d + j]);
            }
            det = -det;
        }
        double p = a[c * d + c];
        det *= p;
        if (p == 0.0) {
            det_out = 0.0;
            return inv;
        }
        for (int j = 0; j < d; ++j) {
            a[c * d + j] /= p;
            inv[c * d + j] /= p;
        }
        for (int r = 0; r < d; ++r) {
            if (r == c) continue;
            double f = a[r * d + c];
            if (f == 0.0) continue;
            for (int j = 0; j < d; ++j) {
                a[r * d + j] -= f * a[c * d + j];
                inv[r * d + j] -= f * inv[c * d + j];
            }
        }
    }
    det_out = det;
    return inv;
}

inline double row_norm(const std::vector<double>& m, int d, int row) {
    double s = 0;
    for (int j = 0; j < d; ++j) s += m[row * d + j] * m[row * d + j];
    return std::sqrt(s);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Lattice
// ---------------------------------------------------------------------------

struct Lattice {
    int dim = 0;
    // Row i of `gens` is the i-th generator of L; row i of `dual` is the
    // i-th generator of L*, normalized so that gens * dual^T = 2*pi*I.
    std::vector<double> gens;
    std::vector<double> dual;
    double det_abs = 0; // |det gens| = covolume of L
};

inline Lattice make_lattice(int dim, const std::vector<double>& gens_row_major) {
    if (dim < 1) throw invalid_lattice("lattice dimension must be >= 1");
    if ((int)gens_row_major.size() != dim * dim)
        throw invalid_lattice("basis must supply dim*dim entries");
    Lattice l;
    l.dim = dim;
    l.gens = gens_row_major;
    double det = 0;
    std::vector<double> inv = detail::invert_matrix(l.gens, dim, det);
    // Hadamard-relative singularity test: |det| <= 1e-12 * prod of row norms.
    double hadamard = 1.0;
    for (int i = 0; i < dim; ++i) hadamard *= detail::row_norm(l.gens, dim, i);
    if (!(std::abs(det) > 1e-12 * std::max(hadamard, 1e-300)))
        throw invalid_lattice("basis is singular or numerically degenerate");
    l.det_abs = std::abs(det);
    // dual = 2*pi * inv(gens)^T  (rows of dual are the dual generators)
    l.dual.assign(dim * dim, 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            l.dual[i * dim + j] = two_pi * inv[j * dim + i];
    return l;
}

inline Lattice hypercubic_lattice(int dim, double a) {
    std::vector<double> g(dim * dim, 0.0);
    for (int i = 0; i < dim; ++i) g[i * dim + i] = a;
    return make_lattice(dim, g);
}

// ---------------------------------------------------------------------------
// ModelManifold
// ---------------------------------------------------------------------------

struct ModelManifold {
    enum class Kind { torus, sphere };
    Kind kind = Kind::torus;
    int dim = 0;       // manifold dimension d
    Lattice lattice;   // torus only
    double volume = 0; // Riemannian volume (covolume / surface area)
    std::string label;

    static ModelManifold torus(const Lattice& l) {
        ModelManifold m;
        m.kind = Kind::torus;
        m.dim = l.dim;
        m.lattice = l;
        m.volume = l.det_abs;
        m.label = "torus(d=" + std::to_string(l.dim) + ")";
        return m;
    }
    static ModelManifold sphere(int d) {
        if (d < 1) throw domain_error("sphere dimension must be >= 1");
        ModelManifold m;
        m.kind = Kind::sphere;
        m.dim = d;
        // surface area of the unit d-sphere: 2 pi^{(d+1)/2} / Gamma((d+1)/2)
        const double pi = two_pi / 2.0;
        m.volume = 2.0 * std::pow(pi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
        m.label = "sphere(d=" + std::to_string(d) + ")";
        return m;
    }
};

// Volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
    const double pi = two_pi / 2.0;
    return std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

struct SpectrumEntry {
    double sigma = 0;
    std::int64_t multiplicity = 0;
};

struct Spectrum {
    std::vector<SpectrumEntry> entries; // ascending sigma, deduplicated
    std::vector<std::int64_t> cumulative; // running multiplicity totals
    double sigma_max = 0;               // enumeration radius (inclusive)
    int dim = 1;                        // manifold dimension (for tail bounds)
    std::string label;

    std::int64_t total_count() const {
        return cumulative.empty() ? 0 : cumulative.back();
    }
    void rebuild_cumulative() {
        cumulative.resize(entries.size());
        std::int64_t acc = 0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            acc += entries[i].multiplicity;
            cumulative[i] = acc;
        }
    }
};

struct LengthSpectrum {
    std::vector<double> lengths; // ascending, deduplicated, all > 0
    double t_max = 0;
};

// ---------------------------------------------------------------------------
// Lattice point enumeration
// ---------------------------------------------------------------------------

namespace detail {

// Enumerates multiplicities of squared norms n^T G n over the integer box
// |n_i| <= box[i], where G is the Gram matrix of the generating rows.
// Returns (sigma, multiplicity) pairs for all norms <= radius, ascending.
//
// If G is a scalar multiple of an integer matrix the squared form is
// evaluated in exact integer arithmetic and grouping is exact; otherwise
// values are sorted and grouped with a 1e-9 relative tolerance on sigma.
inline std::vector<SpectrumEntry> enumerate_gram(const std::vector<double>& gram,
                                                 int d,
                                                 const std::vector<long>& box,
                                                 double radius,
                                                 unsigned threads) {
    const double r2 = radius * radius;

    // Integer detection: G = scale * (integer matrix)?
    double scale = gram[0];
    bool integral = scale > 0;
    double gmax = 0;
    for (double g : gram) gmax = std::max(gmax, std::abs(g));
    std::vector<long long> gint(d * d, 0);
    if (integral) {
        for (int i = 0; i < d * d && integral; ++i) {
            double q = gram[i] / scale;
            double rq = std::nearbyint(q);
            if (std::abs(q - rq) > 1e-12 * std::max(1.0, std::abs(q)) ||
                std::abs(rq) > 4e15)
                integral = false;
            else
                gint[i] = (long long)rq;
        }
    }

    // Total box size and slab split along the first axis.
    const long b0 = box[0];
    std::size_t n_slabs = (std::size_t)(2 * b0 + 1);

    if (integral) {
        // value = n^T Gint n (exact), sigma^2 = scale * value
        std::vector<std::map<long long, std::int64_t>> slab_counts(n_slabs);
        // generous by a relative epsilon; the sigma<=radius post-filter below
        // rejects any overshoot
        const long long vmax =
            (long long)std::floor(r2 / scale * (1.0 + 1e-12) + 1e-9);
        for_each_block(n_slabs, threads, [&](std::size_t slab) {
            std::map<long long, std::int64_t>& local = slab_counts[slab];
            std::vector<long> n(d, 0);
            n[0] = (long)slab - b0;
            // odometer over remaining axes
            for (int i = 1; i < d; ++i) n[i] = -box[i];
            for (;;) {
                long long v = 0;
                for (int i = 0; i < d; ++i) {
                    long long row = 0;
                    for (int j = 0; j < d; ++j) row += gint[i * d + j] * n[j];
                    v += row * n[i];
                }
                if (v <= vmax) ++local[v];
                // increment odometer (axes 1..d-1); axis 0 fixed per slab
                int axis = d - 1;
                for (; axis >= 1; --axis) {
                    if (n[axis] < box[axis]) {
                        ++n[axis];
                        break;
                    }
                    n[axis] = -box[axis];
                }
                if (axis < 1) break;
                if (d == 1) break;
            }
        });
        std::map<long long, std::int64_t> merged;
        for (auto& m : slab_counts)
            for (auto& kv : m) merged[kv.first] += kv.second;
        std::vector<SpectrumEntry> out;
        out.reserve(merged.size());
        for (auto& kv : merged) {
            double sigma = std::sqrt(scale * (double)kv.first);
            if (sigma <= radius * (1.0 + 1e-14) || kv.first == 0)
                out.push_back({sigma, kv.second});
        }
        return out;
    }

    // Float path: collect squared norms, sort, group.  Serial (used only for
    // generic non-integral bases at small scales).
    std::vector<double> vals;
    std::vector<long> n(d, -box[0]);
    for (int i = 0; i < d; ++i) n[i] = -box[i];
    for (;;) {
        double v = 0;
        for (int i = 0; i < d; ++i) {
            double row = 0;
            for (int j = 0; j < d; ++j) row += gram[i * d + j] * n[j];
            v += row * n[i];
        }
        if (v <= r2 * (1.0 + 1e-12)) vals.push_back(v);
        int axis = d - 1;
        for (; axis >= 0; --axis) {
            if (n[axis] < box[axis]) {
                ++n[axis];
                break;
            }
            n[axis] = -box[axis];
        }
        if (axis < 0) break;
    }
    std::sort(vals.begin(), vals.end());
    std::vector<SpectrumEntry> out;
    for (std::size_t i = 0; i < vals.size();) {
        double sigma0 = std::sqrt(std::max(0.0, vals[i]));
        double sum_sigma = 0;
        std::int64_t count = 0;
        std::size_t j = i;
        double cur = sigma0;
        for (; j < vals.size(); ++j) {
            double s = std::sqrt(std::max(0.0, vals[j]));
            if (s - cur > 1e-9 * std::max(1.0, s)) break;
            sum_sigma += s;
            ++count;
            cur = s;
        }
        out.push_back({sum_sigma / (double)count, count});
        i = j;
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Spectrum operations
// ---------------------------------------------------------------------------

// All sqrt-eigenvalues sigma = |xi|, xi in L*, with |xi| <= sigma_max.
inline Spectrum enumerate_torus_spectrum(const Lattice& l, double sigma_max,
                                         unsigned threads = 0) {
    if (!(sigma_max >= 0)) throw domain_error("sigma_max must be >= 0");
    const int d = l.dim;
    // xi = sum n_i dual_i  =>  n_i = <gens_i, xi> / (2 pi), so
    // |n_i| <= |gens_i| * sigma_max / (2 pi).  (Cauchy-Schwarz; exhaustive.)
    std::vector<long> box(d);
    for (int i = 0; i < d; ++i) {
        double bound = detail::row_norm(l.gens, d, i) * sigma_max / two_pi;
        box[i] = (long)std::floor(bound + 1e-9);
    }
    std::vector<double> gram(d * d, 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0;
            for (int k = 0; k < d; ++k)
                s += l.dual[i * d + k] * l.dual[j * d + k];
            gram[i * d + j] = s;
        }
    Spectrum sp;
    sp.entries = detail::enumerate_gram(gram, d, box, sigma_max, threads);
    sp.sigma_max = sigma_max;
    sp.dim = d;
    sp.label = "torus(d=" + std::to_string(d) + ")";
    sp.rebuild_cumulative();
    return sp;
}

// dim of the degree-k spherical harmonics on S^d:
//   H(k,d) = C(k+d, d) - C(k+d-2, d)
inline std::int64_t sphere_multiplicity(int k, int d) {
    if (k < 0) throw domain_error("harmonic degree must be >= 0");
    auto binom = [](long long n, long long r) -> __int128 {
        if (n < r || r < 0) return 0;
        // magnitude guard before exact evaluation (keeps __int128 exact)
        double lg = std::lgamma((double)n + 1) - std::lgamma((double)r + 1) -
                    std::lgamma((double)(n - r) + 1);
        if (lg > 87.0) // ln(6e37) < bits available in __int128
            throw domain_error("sphere multiplicity too large to represent");
        __int128 acc = 1;
        for (long long i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
        return acc;
    };
    __int128 h = binom(k + d, d) - binom(k + d - 2, d);
    if (h > (__int128)0x7fffffffffffffffLL)
        throw domain_error("sphere multiplicity overflows 64 bits");
    return (std::int64_t)h;
}

inline Spectrum enumerate_sphere_spectrum(int d, double sigma_max) {
    if (d < 1) throw domain_error("sphere dimension must be >= 1");
    if (!(sigma_max >= 0)) throw domain_error("sigma_max must be >= 0");
    Spectrum sp;
    for (int k = 0;; ++k) {
        double lam = (double)k * ((double)k + d - 1);
        double sigma = std::sqrt(lam);
        if (sigma > sigma_max) break;
        sp.entries.push_back({sigma, sphere_multiplicity(k, d)});
    }
    sp.sigma_max = sigma_max;
    sp.dim = d;
    sp.label = "sphere(d=" + std::to_string(d) + ")";
    sp.rebuild_cumulative();
    return sp;
}

// Geodesic length spectrum up to t_max.
//  - torus: |v| for v in L \ {0}
//  - sphere: all positive multiples of 2*pi (great circles traversed k times)
inline LengthSpectrum geodesic_length_spectrum(const ModelManifold& m,
                                               double t_max,
                                               unsigned threads = 0) {
    if (!(t_max >= 0)) throw domain_error("t_max must be >= 0");
    LengthSpectrum ls;
    ls.t_max = t_max;
    if (m.kind == ModelManifold::Kind::sphere) {
        for (int k = 1; k * two_pi <= t_max * (1.0 + 1e-14); ++k)
            ls.lengths.push_back(k * two_pi);
        return ls;
    }
    const Lattice& l = m.lattice;
    const int d = l.dim;
    // v = sum n_i gens_i  =>  n_i = <dual_i, v> / (2 pi)
    std::vector<long> box(d);
    for (int i = 0; i < d; ++i) {
        double bound = detail::row_norm(l.dual, d, i) * t_max / two_pi;
        box[i] = (long)std::floor(bound + 1e-9);
    }
    std::vector<double> gram(d * d, 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double s = 0;
            for (int k = 0; k < d; ++k)
                s += l.gens[i * d + k] * l.gens[j * d + k];
            gram[i * d + j] = s;
        }
    auto entries = detail::enumerate_gram(gram, d, box, t_max, threads);
    for (const auto& e : entries)
        if (e.sigma > 0) ls.lengths.push_back(e.sigma);
    return ls;
}

// Number of sqrt-eigenvalues <= sigma, counted with multiplicity.
inline std::int64_t counting_function(const Spectrum& sp, double sigma) {
    if (sigma > sp.sigma_max * (1.0 + 1e-12))
        throw incomplete_spectrum(
            "counting_function: sigma exceeds the enumerated radius");
    std::size_t lo = 0, hi = sp.entries.size();
    while (lo < hi) { // first entry with entry.sigma > sigma
        std::size_t mid = (lo + hi) / 2;
        if (sp.entries[mid].sigma <= sigma)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo == 0 ? 0 : sp.cumulative[lo - 1];
}

} // namespace weylab
