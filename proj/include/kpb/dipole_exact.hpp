#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "kpb/kernels.hpp"
#include "kpb/quadrature.hpp"

namespace kpb {

// Exact linear evolution of the dipole data u0 = c x e^{-(x^2+y^2)} on the
// whole plane. The eta-integral against the Gaussian closes:
//   S(t)*u0 (x,y) = (1/pi) Re int_0^inf (-ic xi/4) e^{-xi^2/4 - nu t xi^2}
//                     e^{i(t xi^3 + x xi)} sqrt(pi/alpha) e^{-y^2/(4 alpha)} dxi,
//   alpha = 1/4 + i t eps / xi,
// and likewise for K(t)*u0 (drop the xi^3 phase) and for
//   script-K1 = dxK *_y M1 with M1(w) = -(c sqrt(pi)/2) e^{-w^2}:
//   (t^{-1/2}/(4 pi^{3/2})) (-c sqrt(pi)/2) 2 Re int_0^inf |xi|^{1/2} (i xi)^{1+l}
//     e^{-nu t xi^2 + i(x xi - pi eps/4)} sqrt(pi/(1-ia)) e^{i a y^2/(1-ia)} dxi,
//   a = xi/(4 t eps).
// These integrals never see the periodic box. The substitution xi = s^2
// turns the |xi|^{1/2}-type cusps at the origin into smooth integrands.

namespace dipole {

namespace detail {

inline std::complex<double> sconv_integrand(const KernelEvaluator& ev, double c, double x,
                                            double y, double t, bool disp, double xi) {
    if (xi == 0.0) return 0.0;
    const std::complex<double> alpha(0.25, t * ev.eps / xi);
    const double phase = (disp ? t * xi * xi * xi : 0.0) + x * xi;
    return std::complex<double>(0.0, -c * xi / 4.0) *
           std::exp(std::complex<double>(-0.25 * xi * xi - ev.nu * t * xi * xi, phase)) *
           std::sqrt(std::numbers::pi / alpha) * std::exp(-y * y / (4.0 * alpha));
}

}  // namespace detail

inline double sconv(const KernelEvaluator& ev, double c, double x, double y, double t,
                    bool with_dispersion = true) {
    const double xicut = std::min(8.0, std::sqrt(ev.quad_cutoff / std::max(ev.nu * t, 0.25)));
    const double smax = std::sqrt(xicut);
    auto f = [&](double s) {
        return 2.0 * s * detail::sconv_integrand(ev, c, x, y, t, with_dispersion, s * s).real();
    };
    // frequency in s of the phase x s^2 + t s^6 over the live range
    const double freq = 2.0 * std::abs(x) * smax + 6.0 * t * std::pow(smax, 5);
    const double tol = ev.quad_rel_tol * 0.1 * std::max(std::abs(c), 1e-300);
    return quadrature::integrate(f, 0.0, smax, tol, freq) / std::numbers::pi;
}

inline double kconv(const KernelEvaluator& ev, double c, double x, double y, double t) {
    return sconv(ev, c, x, y, t, false);
}

/// d^l/dx^l of script-K1(x, y, t) for the dipole's first moment profile.
inline double K1(const KernelEvaluator& ev, double c, double x, double y, double t, int l = 0) {
    const double smax = std::pow(ev.quad_cutoff / (ev.nu * t), 0.25);
    auto f = [&](double s) {
        const double xi = s * s;
        if (xi == 0.0) return 0.0;
        const std::complex<double> ia(0.0, xi / (4.0 * t * ev.eps));
        std::complex<double> v =
            std::pow(xi, 0.5) * std::pow(std::complex<double>(0.0, xi), 1 + l) *
            std::exp(std::complex<double>(-ev.nu * t * xi * xi,
                                          x * xi - 0.25 * std::numbers::pi * ev.eps)) *
            std::sqrt(std::numbers::pi / (1.0 - ia)) * std::exp(ia * (y * y) / (1.0 - ia));
        return 2.0 * s * v.real();
    };
    const double env = 0.5 * std::tgamma(0.5 * (l + 2.5)) * std::pow(ev.nu * t, -0.5 * (l + 2.5));
    const double freq = 2.0 * std::abs(x) * smax + 12.0 / ev.nu;
    const double integral =
        2.0 * quadrature::integrate(f, 0.0, smax, ev.quad_rel_tol * env * std::abs(c), freq);
    return integral * std::pow(t, -0.5) / (4.0 * std::pow(std::numbers::pi, 1.5)) *
           (-c * std::sqrt(std::numbers::pi) / 2.0);
}

/// S(t)*u0 on a whole x-row; one composite s-grid shared across the row.
inline std::vector<double> sconv_row(const KernelEvaluator& ev, double c, double t, double y,
                                     const std::vector<double>& xs) {
    const double xicut = std::min(8.0, std::sqrt(ev.quad_cutoff / std::max(ev.nu * t, 0.25)));
    const double smax = std::sqrt(xicut);
    double xmax = 1.0;
    for (double x : xs) xmax = std::max(xmax, std::abs(x));
    const double freq = 2.0 * xmax * smax + 6.0 * t * std::pow(smax, 5);
    int n = static_cast<int>(freq * smax / 0.15) + 256;
    n = std::min(n, 4'000'000);
    const double h = smax / n;
    // phase split off so the x-dependent factor is a pure e^{i x xi}
    std::vector<std::complex<double>> gv(n + 1);
    std::vector<double> xiv(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double s = i * h;
        xiv[i] = s * s;
        gv[i] = 2.0 * s * detail::sconv_integrand(ev, c, 0.0, y, t, true, s * s);
    }
    std::vector<double> out(xs.size());
    for (std::size_t p = 0; p < xs.size(); ++p) {
        const double x = xs[p];
        std::complex<double> acc = 0.5 * gv[0];
        for (int i = 1; i < n; ++i) acc += gv[i] * std::polar(1.0, x * xiv[i]);
        acc += 0.5 * gv[n] * std::polar(1.0, x * xiv[n]);
        out[p] = acc.real() * h / std::numbers::pi;
    }
    return out;
}

}  // namespace dipole

}  // namespace kpb
