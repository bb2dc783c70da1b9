#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "kpb/errors.hpp"
#include "kpb/fft.hpp"
#include "kpb/grid.hpp"

namespace kpb {

enum class SingularityPolicy { ForceZero, FiniteValue, Error };

/// Fourier multiplier m(xi, eta) with a declared policy for the xi = 0 line,
/// where the KP symbols carry the eta^2/xi singularity.
struct MultiplierSymbol {
    std::function<std::complex<double>(double, double)> fn;
    SingularityPolicy policy = SingularityPolicy::FiniteValue;
};

inline constexpr double kZeroModeRelTol = 1e-12;

/// Real 2D state on a SpectralGrid. Physical samples and Fourier series
/// coefficients are both kept and always consistent; a Field never mutates
/// after construction, so values are safe to share across threads.
class Field {
public:
    Field() = default;

    static Field from_physical(GridPtr g, std::vector<double> phys) {
        Field f;
        f.grid_ = std::move(g);
        f.phys_ = std::move(phys);
        check_finite(f.phys_);
        fft::series_from_physical(f.phys_, f.spec_, f.grid_->nx, f.grid_->ny);
        return f;
    }

    /// Hermitian-symmetrizes the coefficients, then realizes the samples.
    static Field from_spectral(GridPtr g, std::vector<std::complex<double>> spec) {
        Field f;
        f.grid_ = std::move(g);
        f.spec_ = std::move(spec);
        hermitianize(f.spec_, f.grid_->nx, f.grid_->ny);
        std::vector<std::complex<double>> work;
        fft::physical_from_series(f.spec_, work, f.phys_, f.grid_->nx, f.grid_->ny);
        check_finite(f.phys_);
        return f;
    }

    static Field sample(GridPtr g, const std::function<double(double, double)>& fn) {
        std::vector<double> p(g->size());
        for (int j = 0; j < g->nx; ++j)
            for (int k = 0; k < g->ny; ++k)
                p[static_cast<std::size_t>(j) * g->ny + k] = fn(g->x(j), g->y(k));
        return from_physical(std::move(g), std::move(p));
    }

    static Field zero(GridPtr g) {
        std::vector<double> p(g->size(), 0.0);
        return from_physical(std::move(g), std::move(p));
    }

    const GridPtr& grid() const { return grid_; }
    const std::vector<double>& physical() const { return phys_; }
    const std::vector<std::complex<double>>& spectral() const { return spec_; }
    double at(int j, int k) const { return phys_[static_cast<std::size_t>(j) * grid_->ny + k]; }

    /// Trigonometric interpolation at an arbitrary point (direct mode sum).
    double eval(double x, double y) const {
        const auto& g = *grid_;
        std::complex<double> acc = 0.0;
        // separable sum: for each xi row, accumulate the eta sum first
        for (int j = 0; j < g.nx; ++j) {
            std::complex<double> row = 0.0;
            const std::size_t base = static_cast<std::size_t>(j) * g.ny;
            for (int k = 0; k < g.ny; ++k)
                row += spec_[base + k] * std::polar(1.0, g.eta[k] * y);
            acc += row * std::polar(1.0, g.xi[j] * x);
        }
        return acc.real();
    }

    double l2_norm() const {
        double s = 0.0;
        for (double v : phys_) s += v * v;
        return std::sqrt(s * grid_->dx() * grid_->dy());
    }

    double l2_norm_spectral() const {  // Parseval route, for cross-checks
        double s = 0.0;
        for (const auto& c : spec_) s += std::norm(c);
        return std::sqrt(s * grid_->Lx * grid_->Ly);
    }

    double linf_norm() const {
        double m = 0.0;
        for (double v : phys_) m = std::max(m, std::abs(v));
        return m;
    }

    double l1_norm() const {
        double s = 0.0;
        for (double v : phys_) s += std::abs(v);
        return s * grid_->dx() * grid_->dy();
    }

    /// || x f ||_L1 with box-centered x.
    double weighted_x_l1() const {
        const auto& g = *grid_;
        double s = 0.0;
        for (int j = 0; j < g.nx; ++j) {
            const double ax = std::abs(g.x(j));
            const std::size_t base = static_cast<std::size_t>(j) * g.ny;
            for (int k = 0; k < g.ny; ++k) s += ax * std::abs(phys_[base + k]);
        }
        return s * g.dx() * g.dy();
    }

    /// integral of x * f over the box
    double x_moment() const {
        const auto& g = *grid_;
        double s = 0.0;
        for (int j = 0; j < g.nx; ++j) {
            const double x = g.x(j);
            const std::size_t base = static_cast<std::size_t>(j) * g.ny;
            for (int k = 0; k < g.ny; ++k) s += x * phys_[base + k];
        }
        return s * g.dx() * g.dy();
    }

    double integral() const {
        double s = 0.0;
        for (double v : phys_) s += v;
        return s * grid_->dx() * grid_->dy();
    }

    /// Fraction of L2 mass inside the outer 10% frame of the box.
    double boundary_contamination() const {
        const auto& g = *grid_;
        double frame = 0.0, total = 0.0;
        for (int j = 0; j < g.nx; ++j) {
            const bool bx = std::abs(g.x(j)) >= 0.9 * (0.5 * g.Lx);
            const std::size_t base = static_cast<std::size_t>(j) * g.ny;
            for (int k = 0; k < g.ny; ++k) {
                const double v2 = phys_[base + k] * phys_[base + k];
                total += v2;
                if (bx || std::abs(g.y(k)) >= 0.9 * (0.5 * g.Ly)) frame += v2;
            }
        }
        return total > 0.0 ? frame / total : 0.0;
    }

    double max_zero_mode() const {
        double m = 0.0;
        for (int k = 0; k < grid_->ny; ++k) m = std::max(m, std::abs(spec_[k]));
        return m;
    }

    static void hermitianize(std::vector<std::complex<double>>& c, int nx, int ny) {
        for (int j = 0; j < nx; ++j) {
            const int jr = (nx - j) % nx;
            for (int k = 0; k < ny; ++k) {
                const int kr = (ny - k) % ny;
                if (j > jr || (j == jr && k > kr)) continue;
                auto& a = c[static_cast<std::size_t>(j) * ny + k];
                auto& b = c[static_cast<std::size_t>(jr) * ny + kr];
                const std::complex<double> avg = 0.5 * (a + std::conj(b));
                a = avg;
                b = std::conj(avg);
            }
        }
    }

private:
    static void check_finite(const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) throw std::invalid_argument("Field: non-finite sample");
    }

    GridPtr grid_;
    std::vector<double> phys_;
    std::vector<std::complex<double>> spec_;
};

inline Field apply_multiplier(const Field& f, const MultiplierSymbol& sym) {
    const auto& g = *f.grid();
    std::vector<std::complex<double>> c = f.spectral();
    const double tol = kZeroModeRelTol * std::max(f.l2_norm(), 1e-300);
    for (int j = 0; j < g.nx; ++j) {
        const double xi = g.xi[j];
        const std::size_t base = static_cast<std::size_t>(j) * g.ny;
        if (xi == 0.0) {
            switch (sym.policy) {
                case SingularityPolicy::ForceZero:
                    for (int k = 0; k < g.ny; ++k) c[base + k] = 0.0;
                    break;
                case SingularityPolicy::Error:
                    for (int k = 0; k < g.ny; ++k)
                        if (std::abs(c[base + k]) > tol)
                            throw ZeroModeViolation(
                                "apply_multiplier: nonzero xi=0 coefficient under 'error' policy");
                    for (int k = 0; k < g.ny; ++k) c[base + k] = 0.0;
                    break;
                case SingularityPolicy::FiniteValue:
                    for (int k = 0; k < g.ny; ++k) c[base + k] *= sym.fn(0.0, g.eta[k]);
                    break;
            }
            continue;
        }
        for (int k = 0; k < g.ny; ++k) c[base + k] *= sym.fn(xi, g.eta[k]);
    }
    return Field::from_spectral(f.grid(), std::move(c));
}

inline Field project_zero_mass(const Field& f) {
    std::vector<std::complex<double>> c = f.spectral();
    for (int k = 0; k < f.grid()->ny; ++k) c[k] = 0.0;
    return Field::from_spectral(f.grid(), std::move(c));
}

inline void require_zero_mass(const Field& f, const char* who) {
    const double tol = kZeroModeRelTol * std::max(f.l2_norm(), 1e-300);
    if (f.max_zero_mode() > tol)
        throw ZeroModeViolation(std::string(who) + ": field violates the zero-mass condition");
}

inline Field derivative_x(const Field& f, int order = 1) {
    MultiplierSymbol d{[order](double xi, double) {
                           return std::pow(std::complex<double>(0.0, xi), order);
                       },
                       SingularityPolicy::FiniteValue};
    return apply_multiplier(f, d);
}

inline Field derivative_y(const Field& f, int order = 1) {
    MultiplierSymbol d{[order](double, double eta) {
                           return std::pow(std::complex<double>(0.0, eta), order);
                       },
                       SingularityPolicy::FiniteValue};
    return apply_multiplier(f, d);
}

/// (i xi)^{-1} on the nonzero modes; requires zero mass within tolerance.
inline Field antiderivative_x(const Field& f) {
    require_zero_mass(f, "antiderivative_x");
    MultiplierSymbol inv{[](double xi, double) {
                             return 1.0 / std::complex<double>(0.0, xi);
                         },
                         SingularityPolicy::ForceZero};
    return apply_multiplier(f, inv);
}

/// Generalized 1/(q+1) truncation: zero every mode with |m| > n/(degree+1).
inline Field dealias(const Field& f, int degree) {
    if (degree < 2) throw std::invalid_argument("dealias: degree must be >= 2");
    const auto& g = *f.grid();
    const double cx = static_cast<double>(g.nx) / (degree + 1) + 1e-9;
    const double cy = static_cast<double>(g.ny) / (degree + 1) + 1e-9;
    std::vector<std::complex<double>> c = f.spectral();
    for (int j = 0; j < g.nx; ++j) {
        const bool kill_x = std::abs(SpectralGrid::mode(j, g.nx)) > cx;
        const std::size_t base = static_cast<std::size_t>(j) * g.ny;
        for (int k = 0; k < g.ny; ++k)
            if (kill_x || std::abs(SpectralGrid::mode(k, g.ny)) > cy) c[base + k] = 0.0;
    }
    return Field::from_spectral(f.grid(), std::move(c));
}

inline Field field_add(const Field& a, const Field& b, double wb = 1.0) {
    std::vector<double> p(a.physical().size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = a.physical()[i] + wb * b.physical()[i];
    return Field::from_physical(a.grid(), std::move(p));
}

inline Field field_scale(const Field& a, double s) {
    std::vector<double> p(a.physical().size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = s * a.physical()[i];
    return Field::from_physical(a.grid(), std::move(p));
}

/// Grid max followed by local trigonometric-interpolation refinement.
/// Returns {sup, x*, y*}.
struct SupResult {
    double value, x, y;
};

inline SupResult refined_sup(const Field& f, int zoom_levels = 3) {
    const auto& g = *f.grid();
    double best = 0.0;
    int bj = 0, bk = 0;
    for (int j = 0; j < g.nx; ++j)
        for (int k = 0; k < g.ny; ++k) {
            const double v = std::abs(f.at(j, k));
            if (v > best) {
                best = v;
                bj = j;
                bk = k;
            }
        }
    double x0 = g.x(bj), y0 = g.y(bk);
    double sx = g.dx(), sy = g.dy();
    for (int lvl = 0; lvl < zoom_levels; ++lvl) {
        double nx0 = x0, ny0 = y0;
        for (int a = -3; a <= 3; ++a)
            for (int b = -3; b <= 3; ++b) {
                const double px = x0 + a * sx / 3.0, py = y0 + b * sy / 3.0;
                const double v = std::abs(f.eval(px, py));
                if (v > best) {
                    best = v;
                    nx0 = px;
                    ny0 = py;
                }
            }
        x0 = nx0;
        y0 = ny0;
        sx /= 3.0;
        sy /= 3.0;
    }
    return {best, x0, y0};
}

}  // namespace kpb
