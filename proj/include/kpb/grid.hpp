#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace kpb {

/// Periodic box [-Lx/2, Lx/2) x [-Ly/2, Ly/2) with nx x ny collocation points
/// and the dual wavenumber lattices xi_m = 2*pi*m/Lx, m in [-nx/2, nx/2).
/// Wavenumbers are stored in FFT order (0, 1, ..., nx/2-1, -nx/2, ..., -1).
struct SpectralGrid {
    int nx, ny;
    double Lx, Ly;
    std::vector<double> xi;   // size nx
    std::vector<double> eta;  // size ny

    double dx() const { return Lx / nx; }
    double dy() const { return Ly / ny; }
    double x(int j) const { return -0.5 * Lx + dx() * j; }
    double y(int k) const { return -0.5 * Ly + dy() * k; }
    // signed mode index for FFT slot j
    static int mode(int j, int n) { return j < n / 2 ? j : j - n; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

inline GridPtr make_grid(int nx, int ny, double Lx, double Ly) {
    if (nx < 8 || ny < 8) throw std::invalid_argument("make_grid: mode counts must be >= 8");
    if (nx % 2 != 0 || ny % 2 != 0) throw std::invalid_argument("make_grid: mode counts must be even");
    if (!(Lx > 0.0) || !(Ly > 0.0)) throw std::invalid_argument("make_grid: box lengths must be positive");
    auto g = std::make_shared<SpectralGrid>();
    g->nx = nx;
    g->ny = ny;
    g->Lx = Lx;
    g->Ly = Ly;
    g->xi.resize(nx);
    g->eta.resize(ny);
    const double fx = 2.0 * std::numbers::pi / Lx;
    const double fy = 2.0 * std::numbers::pi / Ly;
    for (int j = 0; j < nx; ++j) g->xi[j] = fx * SpectralGrid::mode(j, nx);
    for (int k = 0; k < ny; ++k) g->eta[k] = fy * SpectralGrid::mode(k, ny);
    return g;
}

}  // namespace kpb
