#pragma once

#include <cmath>
#include <functional>

#include "kpb/errors.hpp"

namespace kpb::quadrature {

namespace detail {

template <typename F>
double simpson_ad(const F& f, double a, double c, double b, double fa, double fc, double fb,
                  double whole, double tol, int depth, double& err_acc) {
    const double ca = 0.5 * (a + c), cb = 0.5 * (c + b);
    const double fca = f(ca), fcb = f(cb);
    const double h = b - a;
    const double left = (h / 12.0) * (fa + 4.0 * fca + fc);
    const double right = (h / 12.0) * (fc + 4.0 * fcb + fb);
    const double err = (left + right - whole) / 15.0;
    if (std::abs(err) <= tol || depth >= 48) {
        if (depth >= 48) err_acc += std::abs(err);
        return left + right + err;
    }
    return simpson_ad(f, a, ca, c, fa, fca, fc, left, 0.5 * tol, depth + 1, err_acc) +
           simpson_ad(f, c, cb, b, fc, fcb, fb, right, 0.5 * tol, depth + 1, err_acc);
}

}  // namespace detail

/// Adaptive Simpson on [a, b]. `abs_tol` is the target for the whole
/// interval; `max_freq` seeds the initial panel width so that no panel sees
/// more than ~pi/4 of phase advance before adaptivity takes over.
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol, double max_freq = 0.0) {
    if (!(b > a)) return 0.0;
    int panels = 8;
    if (max_freq > 0.0) {
        const double limit = (b - a) * max_freq / (0.25 * 3.14159265358979323846);
        while (panels < limit && panels < (1 << 20)) panels *= 2;
    }
    const double h = (b - a) / panels;
    double total = 0.0, err_acc = 0.0;
    double x0 = a, f0 = f(a);
    for (int i = 0; i < panels; ++i) {
        const double x1 = a + (i + 1) * h;
        const double xm = 0.5 * (x0 + x1);
        const double fm = f(xm), f1 = f(x1);
        const double whole = (h / 6.0) * (f0 + 4.0 * fm + f1);
        total += detail::simpson_ad(f, x0, xm, x1, f0, fm, f1, whole, abs_tol / panels, 0, err_acc);
        x0 = x1;
        f0 = f1;
    }
    if (err_acc > 16.0 * abs_tol)
        throw QuadratureError("adaptive quadrature did not converge", err_acc);
    return total;
}

}  // namespace kpb::quadrature
