#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "kpb/dipole_exact.hpp"
#include "kpb/evolution.hpp"
#include "kpb/field.hpp"
#include "kpb/kernels.hpp"

namespace kpb {

struct DecayFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    int samples = 0;
};

/// Least-squares slope of log(value) against log(t) on [t_lo, t_hi].
inline DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series, double t_lo,
                               double t_hi) {
    std::vector<double> lt, lv;
    for (const auto& [t, v] : series) {
        if (t < t_lo || t > t_hi) continue;
        if (!(v > 0.0)) throw NonPositiveValue("fit_decay_rate: non-positive value at t = " +
                                               std::to_string(t));
        lt.push_back(std::log(t));
        lv.push_back(std::log(v));
    }
    const int n = static_cast<int>(lt.size());
    if (n < 5) throw InsufficientSamples("fit_decay_rate: need at least 5 samples in the window");
    double mt = 0.0, mv = 0.0;
    for (int i = 0; i < n; ++i) {
        mt += lt[i];
        mv += lv[i];
    }
    mt /= n;
    mv /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lt[i] - mt) * (lt[i] - mt);
        sxy += (lt[i] - mt) * (lv[i] - mv);
    }
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = lv[i] - mv - slope * (lt[i] - mt);
        ss += r * r;
    }
    DecayFit fit;
    fit.slope = slope;
    fit.stderr_ = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.samples = n;
    return fit;
}

struct ExpansionRow {
    int l = 0, m = 0;
    double t = 0.0;
    double measured = 0.0;  // sup-norm of the order-m remainder of dx^l S(t)*u0
    double bound = 0.0;     // analytic kernel bound (kernel case only; 0 otherwise)
};

/// Measured || dx^l ( S(t)*u0 - sum_{n<=m} ((-t)^n/n!) dx^{3n} K(t)*u0 ) ||_inf
/// on the box, for each (l, m, t). Grid route: exact multipliers.
inline std::vector<ExpansionRow> verify_linear_expansion(const KernelEvaluator& ev,
                                                         const Field& u0,
                                                         const std::vector<double>& ts, int l_max,
                                                         int m_max) {
    require_zero_mass(u0, "verify_linear_expansion");
    std::vector<ExpansionRow> out;
    const auto grid = u0.grid();
    for (int l = 0; l <= l_max; ++l)
        for (int m = 0; m <= m_max; ++m)
            for (double t : ts) {
                // multiplier of the remainder acting on u0
                MultiplierSymbol rem{
                    [&ev, t, l, m](double xi, double eta) -> std::complex<double> {
                        if (xi == 0.0) return 0.0;
                        const std::complex<double> kfac = std::exp(std::complex<double>(
                            -ev.nu * t * xi * xi, -t * ev.eps * eta * eta / xi));
                        const std::complex<double> z(0.0, t * xi * xi * xi);
                        std::complex<double> sum = 0.0, term = 1.0;
                        for (int n = 0; n <= m; ++n) {
                            sum += term;
                            term *= z / static_cast<double>(n + 1);
                        }
                        return std::pow(std::complex<double>(0.0, xi), l) * kfac *
                               (std::exp(z) - sum);
                    },
                    SingularityPolicy::ForceZero};
                Field diff = apply_multiplier(u0, rem);
                ExpansionRow row;
                row.l = l;
                row.m = m;
                row.t = t;
                row.measured = refined_sup(diff).value;
                row.bound = 0.0;
                out.push_back(row);
            }
    return out;
}

struct ProfilePoint {
    double t = 0.0;
    double scaled_error = 0.0;   // t^{7/4} sup_{|y|<=L} |u - N0 dxK|
    double envelope_coeff = 0.0; // sup_{|y|>=1} |u - N0 dxK| / (y^2 t^{-13/4})
};

/// Pointwise N0 * dxK comparison against snapshot fields, on the y-window.
/// dxK is evaluated by quadrature (box-free); u by trigonometric interpolation.
inline std::vector<ProfilePoint> compare_profile(const KernelEvaluator& ev,
                                                 const std::map<double, Field>& snapshots,
                                                 double N0, double y_window) {
    std::vector<ProfilePoint> out;
    for (const auto& [t, u] : snapshots) {
        if (!(t > 0.0)) continue;
        const auto& g = *u.grid();
        if (y_window > 0.5 * g.Ly)
            throw std::invalid_argument("compare_profile: y-window exceeds the box");
        auto diff = [&](double x, double y) {
            return u.eval(x, y) - N0 * kernel_K(ev, 1, x, y, t);
        };
        // coarse scan on lattice columns restricted to the window, then refine
        double best = 0.0, bx = 0.0, by = 0.0;
        for (int k = 0; k < g.ny; ++k) {
            const double y = g.y(k);
            if (std::abs(y) > y_window) continue;
            for (int j = 0; j < g.nx; ++j) {
                const double v = std::abs(u.at(j, k) - N0 * kernel_K(ev, 1, g.x(j), y, t));
                if (v > best) {
                    best = v;
                    bx = g.x(j);
                    by = y;
                }
            }
        }
        double sx = g.dx(), sy = g.dy();
        for (int lvl = 0; lvl < 3; ++lvl) {
            double nbx = bx, nby = by;
            for (int a = -2; a <= 2; ++a)
                for (int b = -2; b <= 2; ++b) {
                    const double px = bx + a * sx / 2.5;
                    const double py = std::clamp(by + b * sy / 2.5, -y_window, y_window);
                    const double v = std::abs(diff(px, py));
                    if (v > best) {
                        best = v;
                        nbx = px;
                        nby = py;
                    }
                }
            bx = nbx;
            by = nby;
            sx /= 2.5;
            sy /= 2.5;
        }
        ProfilePoint pp;
        pp.t = t;
        pp.scaled_error = std::pow(t, 1.75) * best;
        // measured envelope coefficient of the y^2 t^{-13/4} term, |y| >= 1
        double env = 0.0;
        for (int k = 0; k < g.ny; ++k) {
            const double y = g.y(k);
            if (std::abs(y) < 1.0 || std::abs(y) > 0.45 * g.Ly) continue;
            for (int j = 0; j < g.nx; j += 2) {
                const double v = std::abs(u.at(j, k) - N0 * kernel_K(ev, 1, g.x(j), y, t));
                env = std::max(env, v / (y * y * std::pow(t, -3.25)));
            }
        }
        pp.envelope_coeff = env;
        out.push_back(pp);
    }
    return out;
}

/// liminf certificate of Corollary-1.4 type: min over [t_hi/2, t_hi] of
/// t^{7/4} ||u||_inf / ( Gamma(5/4)/(2^{5/2} pi^{3/2} nu^{5/4}) |N0| ).
inline double lower_bound_constant(double nu) {
    return std::tgamma(1.25) /
           (std::pow(2.0, 2.5) * std::pow(std::numbers::pi, 1.5) * std::pow(nu, 1.25));
}

inline double lower_bound_certificate(const std::vector<std::pair<double, double>>& sup_series,
                                      double N0, double nu) {
    if (std::abs(N0) < 1e-14)
        throw UndefinedMargin("lower_bound_certificate: |N0| below 1e-14");
    double t_hi = 0.0;
    for (const auto& [t, v] : sup_series) t_hi = std::max(t_hi, t);
    const double c = lower_bound_constant(nu) * std::abs(N0);
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [t, v] : sup_series)
        if (t >= 0.5 * t_hi) margin = std::min(margin, std::pow(t, 1.75) * v / c);
    return margin;
}

/// Duhamel check of Lemma-2.11 type. g is sampled at tau_j in [a, t]; the
/// left side is the trapezoid sum of dx S(t - tau) * g(tau), the right side
/// the singular-weight integral with piecewise-linear h, where
/// h = (||g||_2^2 + ||g_y||_2^2)^{1/2}.
inline double duhamel_bound_check(const KernelEvaluator& ev,
                                  const std::vector<std::pair<double, Field>>& g_series,
                                  double a, double t) {
    if (g_series.size() < 2) throw InsufficientSamples("duhamel_bound_check: need >= 2 samples");
    const auto grid = g_series.front().second.grid();
    std::vector<std::complex<double>> acc(grid->size(), 0.0);
    std::vector<double> h(g_series.size());
    for (std::size_t i = 0; i < g_series.size(); ++i) {
        const auto& [tau, gf] = g_series[i];
        const double l2 = gf.l2_norm_spectral();
        const double gy = detail::multiplier_l2(gf, [](double, double eta) { return eta; });
        h[i] = std::sqrt(l2 * l2 + gy * gy);
        const double w =
            (i == 0 ? 0.5 * (g_series[1].first - g_series[0].first)
             : i + 1 == g_series.size()
                 ? 0.5 * (g_series[i].first - g_series[i - 1].first)
                 : 0.5 * (g_series[i + 1].first - g_series[i - 1].first));
        // dx S(t - tau) * g(tau): exact multipliers; at tau = t it is dx g
        const double s = t - tau;
        const auto& c = gf.spectral();
        const auto& gr = *grid;
        for (int j = 0; j < gr.nx; ++j) {
            const double xi = gr.xi[j];
            const std::size_t base = static_cast<std::size_t>(j) * gr.ny;
            if (xi == 0.0) continue;
            for (int k = 0; k < gr.ny; ++k) {
                std::complex<double> m(0.0, xi);
                if (s > 0.0)
                    m *= std::exp(std::complex<double>(
                        -ev.nu * s * xi * xi,
                        s * (xi * xi * xi - ev.eps * gr.eta[k] * gr.eta[k] / xi)));
                acc[base + k] += w * m * c[base + k];
            }
        }
    }
    const double lhs = Field::from_spectral(grid, std::move(acc)).linf_norm();
    // right side: int_a^t (t - tau)^{-3/4} h(tau) dtau with h piecewise linear,
    // each panel integrated exactly against the singular weight
    double rhs_int = 0.0;
    for (std::size_t i = 0; i + 1 < g_series.size(); ++i) {
        const double t0 = g_series[i].first, t1 = g_series[i + 1].first;
        const double s0 = t - t0, s1 = t - t1;  // s decreasing, s1 >= 0
        auto anti0 = [&](double s) { return -4.0 * std::pow(s, 0.25); };
        auto anti1 = [&](double s) { return -(4.0 / 5.0) * std::pow(s, 1.25); };
        // h(tau) = h0 + (h1 - h0) (tau - t0)/(t1 - t0); tau = t - s
        const double dt01 = t1 - t0;
        const double A = h[i] + (h[i + 1] - h[i]) * (t - t0) / dt01;
        const double B = -(h[i + 1] - h[i]) / dt01;  // h = A + B s
        rhs_int += A * (anti0(s1) - anti0(s0)) + B * (anti1(s1) - anti1(s0));
    }
    const double rhs = rhs_int / (std::pow(2.0, 1.25) * std::pow(std::numbers::pi, 0.25) *
                                  std::pow(ev.nu, 0.75));
    if (lhs == 0.0 && rhs == 0.0) return 0.0;
    return lhs / rhs;
}

}  // namespace kpb
