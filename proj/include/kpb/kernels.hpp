#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "kpb/field.hpp"
#include "kpb/grid.hpp"
#include "kpb/quadrature.hpp"

namespace kpb {

/// Physical parameters and quadrature controls for the kernel family
///   K*(x,y) = c0 int_0^inf r^{-1/4} e^{-r} cos(Theta) dr,
///   Theta   = (x + y^2/(4 eps)) sqrt(r/nu) - (pi/4) eps,
///   c0      = 1/(4 pi^{3/2} nu^{3/4}),
/// its x-derivatives, the rescaled K(x,y,t), and the full kernel S.
struct KernelEvaluator {
    double nu = 1.0;
    int eps = -1;
    double quad_rel_tol = 1e-9;
    double quad_cutoff = 40.0;  // truncation of the r-integral

    KernelEvaluator(double nu_, int eps_, double rel_tol = 1e-9, double cutoff = 40.0)
        : nu(nu_), eps(eps_), quad_rel_tol(rel_tol), quad_cutoff(cutoff) {
        if (!(nu > 0.0)) throw std::invalid_argument("KernelEvaluator: nu must be positive");
        if (eps != 1 && eps != -1)
            throw std::invalid_argument("KernelEvaluator: eps must be +1 or -1");
        if (!(quad_rel_tol > 0.0) || quad_rel_tol > 1e-3)
            throw std::invalid_argument("KernelEvaluator: quad_rel_tol out of range");
        if (std::exp(-quad_cutoff) >= quad_rel_tol / 100.0)
            throw std::invalid_argument("KernelEvaluator: quad_cutoff too small for tolerance");
    }

    double c0() const {
        return 1.0 / (4.0 * std::pow(std::numbers::pi, 1.5) * std::pow(nu, 0.75));
    }

    /// Linear symbol of (KPB): -nu xi^2 + i (xi^3 - eps eta^2 / xi).
    MultiplierSymbol full_symbol(double t) const {
        const double nu_ = nu;
        const double e = eps;
        return {[nu_, e, t](double xi, double eta) {
                    const double re = -nu_ * t * xi * xi;
                    const double im = t * (xi * xi * xi - e * eta * eta / xi);
                    return std::polar(std::exp(re), im);
                },
                SingularityPolicy::ForceZero};
    }

    /// Symbol of the auxiliary flow behind K: -nu xi^2 - i eps eta^2 / xi.
    MultiplierSymbol dissipative_symbol(double t) const {
        const double nu_ = nu;
        const double e = eps;
        return {[nu_, e, t](double xi, double eta) {
                    const double re = -nu_ * t * xi * xi;
                    const double im = -t * e * eta * eta / xi;
                    return std::polar(std::exp(re), im);
                },
                SingularityPolicy::ForceZero};
    }
};

/// d^l/dx^l K*(x, y), evaluated with the substitution s = sqrt(r):
///   2 c0 nu^{-l/2} int_0^smax s^{l+1/2} e^{-s^2} cos(a s + l pi/2 - eps pi/4) ds,
/// a = (x + y^2/(4 eps))/sqrt(nu). The substitution removes the r^{-1/4}
/// endpoint singularity; the Gaussian factor bounds the truncation a priori.
inline double kstar(const KernelEvaluator& ev, int l, double x, double y) {
    if (l < 0) throw std::invalid_argument("kstar: l must be >= 0");
    const double a = (x + y * y / (4.0 * ev.eps)) / std::sqrt(ev.nu);
    const double shift = l * std::numbers::pi / 2.0 - ev.eps * std::numbers::pi / 4.0;
    const double smax = std::sqrt(ev.quad_cutoff);
    const double pref = 2.0 * ev.c0() * std::pow(ev.nu, -0.5 * l);
    auto f = [&](double s) {
        return std::pow(s, l + 0.5) * std::exp(-s * s) * std::cos(a * s + shift);
    };
    // scale the absolute target by the integrand's envelope
    const double env = 0.5 * std::tgamma(0.5 * (l + 1.5));
    const double tol = ev.quad_rel_tol * env;
    return pref * quadrature::integrate(f, 0.0, smax, tol, std::abs(a));
}

/// d^l/dx^l K(x, y, t) = t^{-5/4 - l/2} (d^l K*)(x t^{-1/2}, y t^{-3/4}).
inline double kernel_K(const KernelEvaluator& ev, int l, double x, double y, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_K: t must be positive");
    return std::pow(t, -1.25 - 0.5 * l) *
           kstar(ev, l, x * std::pow(t, -0.5), y * std::pow(t, -0.75));
}

namespace detail {

/// Common 1D spectral form in xi (the eta-integral done in closed form):
///   (t^{-1/2}/(4 pi^{3/2})) int |xi|^{1/2} (i xi)^l W(xi)
///        e^{-nu t xi^2} e^{i(xi y^2/(4 t eps) - (pi/4) eps sgn xi + x xi)} dxi.
/// W == 1 gives K; W = e^{i t xi^3} gives S; W = e^{itxi^3} - sum_{n<=m}(itxi^3)^n/n!
/// gives the order-m Taylor remainder of S in K.
template <typename W>
double kernel_spectral_point(const KernelEvaluator& ev, int l, double x, double y, double t,
                             const W& w) {
    const double xicut = std::sqrt(ev.quad_cutoff / (ev.nu * t));
    const double yphase = y * y / (4.0 * t * ev.eps);
    // oscillation scale where the Gaussian envelope still matters
    const double freq = std::abs(x + yphase) + 12.0 / ev.nu;
    auto f = [&](double xi) {
        // integrand is Hermitian in xi; fold to [0, inf) and take 2 Re
        std::complex<double> v = std::pow(std::abs(xi), 0.5) *
                                 std::pow(std::complex<double>(0.0, xi), l) * w(xi) *
                                 std::exp(std::complex<double>(
                                     -ev.nu * t * xi * xi,
                                     xi * yphase - 0.25 * std::numbers::pi * ev.eps + x * xi));
        return v.real();
    };
    const double env = 0.5 * std::tgamma(0.5 * (l + 1.5)) * std::pow(ev.nu * t, -0.5 * (l + 1.5));
    const double tol = ev.quad_rel_tol * env;
    const double integral = 2.0 * quadrature::integrate(f, 0.0, xicut, tol, freq);
    return integral * std::pow(t, -0.5) / (4.0 * std::pow(std::numbers::pi, 1.5));
}

}  // namespace detail

/// Pointwise S(x, y, t) derivatives through the 1D xi-integral.
inline double kernel_S_point(const KernelEvaluator& ev, int l, double x, double y, double t) {
    return detail::kernel_spectral_point(ev, l, x, y, t, [t](double xi) {
        return std::polar(1.0, t * xi * xi * xi);
    });
}

/// Pointwise K(x, y, t) derivatives through the same reduction (independent
/// of the r-integral route; used for cross-validation).
inline double kernel_K_point(const KernelEvaluator& ev, int l, double x, double y, double t) {
    return detail::kernel_spectral_point(ev, l, x, y, t,
                                         [](double) { return std::complex<double>(1.0, 0.0); });
}

/// Pointwise d^l/dx^l [ S - sum_{n<=m} ((-t)^n/n!) dx^{3n} K ](x, y, t).
inline double kernel_taylor_remainder_point(const KernelEvaluator& ev, int l, int m, double x,
                                            double y, double t) {
    return detail::kernel_spectral_point(ev, l, x, y, t, [t, m](double xi) {
        const std::complex<double> z(0.0, t * xi * xi * xi);
        std::complex<double> sum = 0.0, term = 1.0;
        for (int n = 0; n <= m; ++n) {
            sum += term;
            term *= z / static_cast<double>(n + 1);
        }
        return std::exp(z) - sum;
    });
}

/// K(., y, t) sampled on an x-lattice by a single 1D inverse transform of
///   (t^{-1/2}/(4 pi^{3/2})) |xi|^{1/2} (i xi)^l e^{-nu t xi^2 + i xi y^2/(4 t eps) - i pi/4 eps sgn xi}.
inline std::vector<double> kernel_K_spectral(const KernelEvaluator& ev, double t, double y,
                                             int nx, double Lx, int l = 0) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_K_spectral: t must be positive");
    const double dxi = 2.0 * std::numbers::pi / Lx;
    const double yphase = y * y / (4.0 * t * ev.eps);
    std::vector<std::complex<double>> c(nx);
    for (int j = 0; j < nx; ++j) {
        const int m = SpectralGrid::mode(j, nx);
        const double xi = dxi * m;
        if (m == 0) {
            c[j] = 0.0;  // |xi|^{1/2} prefactor vanishes
            continue;
        }
        const double sgn = xi > 0.0 ? 1.0 : -1.0;
        c[j] = std::pow(std::abs(xi), 0.5) * std::pow(std::complex<double>(0.0, xi), l) *
               std::exp(std::complex<double>(-ev.nu * t * xi * xi,
                                             xi * yphase - 0.25 * std::numbers::pi * ev.eps * sgn));
        // series coefficient: integral weight dxi/(2 pi) folded with prefactor
        c[j] *= std::pow(t, -0.5) / (4.0 * std::pow(std::numbers::pi, 1.5)) * dxi;
        if (j % 2 != 0) c[j] *= -1.0;  // centered x-lattice phase
    }
    fft::PlanCache::instance().transform1d(c.data(), nx, +1);  // FFTW_BACKWARD
    std::vector<double> out(nx);
    for (int j = 0; j < nx; ++j) out[j] = c[j].real();
    return out;
}

/// S(.,.,t) as a grid field: series coefficients e^{t sigma(xi,eta)}/(Lx Ly),
/// force-zero on xi = 0. Convolution with u0 over the box then equals
/// apply_multiplier with e^{t sigma}.
inline Field kernel_S_field(const KernelEvaluator& ev, double t, const GridPtr& grid, int l = 0) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_S_field: t must be positive");
    const auto& g = *grid;
    const auto sym = ev.full_symbol(t);
    std::vector<std::complex<double>> c(g.size());
    const double norm = 1.0 / (g.Lx * g.Ly);
    for (int j = 0; j < g.nx; ++j) {
        const double xi = g.xi[j];
        const std::size_t base = static_cast<std::size_t>(j) * g.ny;
        for (int k = 0; k < g.ny; ++k)
            c[base + k] = xi == 0.0 ? 0.0
                                    : sym.fn(xi, g.eta[k]) *
                                          std::pow(std::complex<double>(0.0, xi), l) * norm;
    }
    return Field::from_spectral(grid, std::move(c));
}

/// Same for the dissipative kernel K.
inline Field kernel_K_field(const KernelEvaluator& ev, double t, const GridPtr& grid, int l = 0) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_K_field: t must be positive");
    const auto& g = *grid;
    const auto sym = ev.dissipative_symbol(t);
    std::vector<std::complex<double>> c(g.size());
    const double norm = 1.0 / (g.Lx * g.Ly);
    for (int j = 0; j < g.nx; ++j) {
        const double xi = g.xi[j];
        const std::size_t base = static_cast<std::size_t>(j) * g.ny;
        for (int k = 0; k < g.ny; ++k)
            c[base + k] = xi == 0.0 ? 0.0
                                    : sym.fn(xi, g.eta[k]) *
                                          std::pow(std::complex<double>(0.0, xi), l) * norm;
    }
    return Field::from_spectral(grid, std::move(c));
}

/// Explicit bound on || dx^l (S - sum_{n<=m} ((-t)^n/n!) dx^{3n} K)(t) ||_inf:
///   Gamma((l+3m)/2 + 9/4) / (4 pi^{3/2} nu^{(l+3m)/2 + 9/4} (m+1)!) t^{-7/4-(l+m)/2}.
inline double taylor_remainder_bound(const KernelEvaluator& ev, int l, int m, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("taylor_remainder_bound: t must be positive");
    const double a = 0.5 * (l + 3.0 * m) + 2.25;
    double fact = 1.0;
    for (int i = 2; i <= m + 1; ++i) fact *= i;
    return std::tgamma(a) / (4.0 * std::pow(std::numbers::pi, 1.5) * std::pow(ev.nu, a) * fact) *
           std::pow(t, -1.75 - 0.5 * (l + m));
}

/// M_n(y) = ((-1)^n / n!) int x^n u0(x, y) dx, per lattice row.
struct MomentProfile {
    int n = 0;
    std::vector<double> values;  // over the y-lattice
};

inline MomentProfile moment_profile(const Field& u0, int n) {
    if (n < 0) throw std::invalid_argument("moment_profile: n must be >= 0");
    const auto& g = *u0.grid();
    MomentProfile out;
    out.n = n;
    out.values.assign(g.ny, 0.0);
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    for (int j = 0; j < g.nx; ++j) {
        const double w = std::pow(g.x(j), n);
        const std::size_t base = static_cast<std::size_t>(j) * g.ny;
        for (int k = 0; k < g.ny; ++k) out.values[k] += w * u0.physical()[base + k];
    }
    for (double& v : out.values) v *= sign / fact * g.dx();
    return out;
}

/// y-convolution of a 1D profile q with dx^n K(t) over the periodic lattice:
/// the spectral product with the profile's series coefficients, scaled by Ly.
/// kind n = 1 with q = Q gives V; kind n with q = M_n gives script-K_n.
inline Field profile_field(const KernelEvaluator& ev, double t, int n,
                           const std::vector<double>& q, const GridPtr& grid) {
    const auto& g = *grid;
    if (static_cast<int>(q.size()) != g.ny)
        throw std::invalid_argument("profile_field: profile must live on the y-lattice");
    // 1D series coefficients of q on the centered y-lattice:
    // q_hat_n = (-1)^n / ny * DFT(q)_n
    std::vector<std::complex<double>> qc(g.ny);
    for (int k = 0; k < g.ny; ++k) qc[k] = q[k];
    fft::PlanCache::instance().transform1d(qc.data(), g.ny, -1);  // FFTW_FORWARD
    for (int k = 0; k < g.ny; ++k) {
        qc[k] /= static_cast<double>(g.ny);
        if (k % 2 != 0) qc[k] *= -1.0;
    }
    Field kern = kernel_K_field(ev, t, grid, n);
    std::vector<std::complex<double>> c = kern.spectral();
    for (int j = 0; j < g.nx; ++j) {
        const std::size_t base = static_cast<std::size_t>(j) * g.ny;
        for (int k = 0; k < g.ny; ++k) c[base + k] *= g.Ly * qc[k];
    }
    return Field::from_spectral(grid, std::move(c));
}

/// Sup of |f| over a rectangle by coarse scan plus shrinking refinement.
template <typename F>
SupResult scan_sup(const F& f, double x0, double x1, double y0, double y1, int nx = 41,
                   int ny = 33, int refine = 4) {
    double best = -1.0, bx = x0, by = y0;
    for (int k = 0; k < ny; ++k) {
        const double y = ny == 1 ? y0 : y0 + (y1 - y0) * k / (ny - 1);
        for (int j = 0; j < nx; ++j) {
            const double x = nx == 1 ? x0 : x0 + (x1 - x0) * j / (nx - 1);
            const double v = std::abs(f(x, y));
            if (v > best) {
                best = v;
                bx = x;
                by = y;
            }
        }
    }
    double sx = (x1 - x0) / std::max(nx - 1, 1), sy = (y1 - y0) / std::max(ny - 1, 1);
    for (int lvl = 0; lvl < refine; ++lvl) {
        double nbx = bx, nby = by;
        for (int a = -3; a <= 3; ++a)
            for (int b = -3; b <= 3; ++b) {
                const double px = std::clamp(bx + a * sx / 3.0, x0, x1);
                const double py = std::clamp(by + b * sy / 3.0, y0, y1);
                const double v = std::abs(f(px, py));
                if (v > best) {
                    best = v;
                    nbx = px;
                    nby = py;
                }
            }
        bx = nbx;
        by = nby;
        sx /= 3.0;
        sy /= 3.0;
    }
    return {best, bx, by};
}

/// || dx^l K*(.,.) ||_inf over the self-similar window, by scan + refinement.
inline SupResult kstar_sup(const KernelEvaluator& ev, int l) {
    auto f = [&](double x, double y) { return kstar(ev, l, x, y); };
    const double w = 10.0 * std::sqrt(ev.nu);
    return scan_sup(f, -w, w, 0.0, 12.0, 51, 25);
}

}  // namespace kpb
