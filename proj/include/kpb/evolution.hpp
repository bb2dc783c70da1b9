#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kpb/field.hpp"
#include "kpb/kernels.hpp"

namespace kpb {

struct SimConfig {
    int p = 2;
    double nu = 1.0;
    int eps = -1;
    int nx = 128, ny = 128;
    double Lx = 64.0 * std::numbers::pi;
    double Ly = 64.0 * std::numbers::pi;
    double dt = 5e-4;
    double t_end = 64.0;
    std::vector<double> snapshots;
    std::uint64_t seed = 1;
    std::string init_kind = "gaussian-dipole";
    double init_amplitude = 0.1;
    std::string output_dir = "out";
    double cfl_safety = 0.9;
    double smallness_budget = 1.0;  // cap on B(u0)
    bool nonlinear = true;

    int dealias_degree() const { return p + 1; }

    void validate() const {
        if (p < 1) throw std::invalid_argument("config: p must be a positive integer");
        if (!(nu > 0.0)) throw std::invalid_argument("config: nu must be positive");
        if (eps != 1 && eps != -1) throw std::invalid_argument("config: eps must be +1 or -1");
        if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
        if (t_end < 0.0) throw std::invalid_argument("config: t_end must be >= 0");
        if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
            throw std::invalid_argument("config: cfl_safety must be in (0, 1]");
        for (std::size_t i = 0; i < snapshots.size(); ++i) {
            if (snapshots[i] < 0.0 || snapshots[i] > t_end)
                throw std::invalid_argument("config: snapshot times must lie in [0, t_end]");
            if (i > 0 && snapshots[i] < snapshots[i - 1])
                throw std::invalid_argument("config: snapshot times must be sorted");
        }
    }

    KernelEvaluator evaluator() const { return KernelEvaluator(nu, eps); }
    GridPtr make_grid_() const { return make_grid(nx, ny, Lx, Ly); }
};

struct DiagnosticsRecord {
    double t = 0.0;
    double linf_norm = 0.0;
    double l2_norm = 0.0;
    double l2_ux = 0.0, l2_uy = 0.0, l2_uxx = 0.0, l2_uxy = 0.0, l2_uxxx = 0.0;
    double B_of_u = 0.0;
    double H_of_t = 0.0;
    double N0_partial = 0.0;
    double E0 = 0.0;
    double balance_residual = 0.0;
    double boundary_contamination = 0.0;
};

inline const char* diagnostics_header() {
    return "t,linf_norm,l2_norm,l2_ux,l2_uy,l2_uxx,l2_uxy,l2_uxxx,B_of_u,H_of_t,"
           "N0_partial,E0,balance_residual,boundary_contamination";
}

struct DiagnosticsSeries {
    std::vector<DiagnosticsRecord> records;
    std::vector<double> U_accumulator;  // int_0^t U(w, tau) dtau over the y-lattice
    std::vector<double> M1;             // first moment profile of u0
    double E0 = 0.0;
    double B0 = 0.0;
    double x_moment0 = 0.0;  // int x u0
};

struct SimulationResult {
    DiagnosticsSeries series;
    std::map<double, Field> snapshots;
    Field final_state;
};

namespace detail {

/// Spectral L2 norm of m(xi,eta) * f without realizing the field.
inline double multiplier_l2(const Field& f, const std::function<double(double, double)>& mag) {
    const auto& g = *f.grid();
    double s = 0.0;
    for (int j = 0; j < g.nx; ++j) {
        const double xi = g.xi[j];
        const std::size_t base = static_cast<std::size_t>(j) * g.ny;
        for (int k = 0; k < g.ny; ++k) {
            const double m = mag(xi, g.eta[k]);
            s += m * m * std::norm(f.spectral()[base + k]);
        }
    }
    return std::sqrt(s * g.Lx * g.Ly);
}

}  // namespace detail

/// B(u) = ||u||_{H^1}^2 + ||dx^2 u||_2^2 + ||dx^{-1} dy u||_2^2.
inline double b_functional(const Field& u) {
    const double l2 = u.l2_norm_spectral();
    const double ux = detail::multiplier_l2(u, [](double xi, double) { return xi; });
    const double uy = detail::multiplier_l2(u, [](double, double eta) { return eta; });
    const double uxx = detail::multiplier_l2(u, [](double xi, double) { return xi * xi; });
    const double vy = detail::multiplier_l2(
        u, [](double xi, double eta) { return xi == 0.0 ? 0.0 : eta / std::abs(xi); });
    return l2 * l2 + ux * ux + uy * uy + uxx * uxx + vy * vy;
}

/// E0 = sqrt(B(u0)) + ||u0||_L1 + ||x u0||_L1 + ||dx^{-1} u0||_2^2.
inline double e0_functional(const Field& u0) {
    const double anti = detail::multiplier_l2(
        u0, [](double xi, double) { return xi == 0.0 ? 0.0 : 1.0 / std::abs(xi); });
    return std::sqrt(b_functional(u0)) + u0.l1_norm() + u0.weighted_x_l1() + anti * anti;
}

inline Field make_initial_data(const std::string& kind, const GridPtr& grid, double amplitude,
                               std::uint64_t seed, double smallness_budget = 1.0) {
    Field u0;
    if (kind == "gaussian-dipole") {
        u0 = Field::sample(grid, [amplitude](double x, double y) {
            return amplitude * x * std::exp(-(x * x + y * y));
        });
    } else if (kind == "random-zero-mass") {
        const auto& g = *grid;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        std::vector<std::complex<double>> c(g.size(), 0.0);
        for (int j = 0; j < g.nx; ++j) {
            const double xi = g.xi[j];
            const std::size_t base = static_cast<std::size_t>(j) * g.ny;
            for (int k = 0; k < g.ny; ++k) {
                // smooth band-limited spectrum, deterministic mode order
                const double eta = g.eta[k];
                const double amp = std::exp(-0.5 * (xi * xi + eta * eta));
                c[base + k] = std::polar(amp, phase(rng));
            }
        }
        u0 = Field::from_spectral(grid, std::move(c));
        const double m = u0.linf_norm();
        u0 = field_scale(u0, m > 0.0 ? amplitude / m : 0.0);
    } else {
        throw std::invalid_argument("make_initial_data: unknown kind '" + kind + "'");
    }
    u0 = project_zero_mass(u0);
    const double B = b_functional(u0);
    if (B > smallness_budget)
        throw std::invalid_argument("make_initial_data: B(u0) = " + std::to_string(B) +
                                    " exceeds the smallness budget " +
                                    std::to_string(smallness_budget));
    return u0;
}

/// Exact multiplier evolution e^{t sigma} u0 with force-zero at xi = 0.
enum class SemigroupKind { FullS, DissipativeK };

inline Field apply_semigroup(const KernelEvaluator& ev, const Field& u0, double t,
                             SemigroupKind which = SemigroupKind::FullS) {
    require_zero_mass(u0, "apply_semigroup");
    if (t < 0.0) throw std::invalid_argument("apply_semigroup: t must be >= 0");
    if (t == 0.0) return project_zero_mass(u0);
    return apply_multiplier(u0, which == SemigroupKind::FullS ? ev.full_symbol(t)
                                                              : ev.dissipative_symbol(t));
}

/// -(1/(p+1)) dx (u^{p+1}) with the degree-(p+1) product dealiased. The dx
/// multiplier kills the xi = 0 modes identically, so the result is an exact
/// discrete x-derivative.
inline Field nonlinear_term(const Field& u, int p) {
    const double linf = u.linf_norm();
    if (linf > 0.0 && (p + 1) * std::log(linf) > 700.0)
        throw DivergenceError("nonlinear_term: u^{p+1} overflows", 0.0);
    std::vector<double> pw(u.physical().size());
    for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = std::pow(u.physical()[i], p + 1);
    Field up = Field::from_physical(u.grid(), std::move(pw));
    up = dealias(up, p + 1);
    Field out = derivative_x(up);
    return field_scale(out, -1.0 / (p + 1));
}

/// Fourth-order exponential integrator (Cox--Matthews ETDRK4, phi-functions
/// evaluated by series for small |z| and directly otherwise). The linear
/// symbol is applied exactly; only the nonlinear stages carry dt error.
class EtdRk4 {
public:
    EtdRk4(const SimConfig& cfg, const GridPtr& grid) : cfg_(cfg), grid_(grid) {
        const auto& g = *grid;
        const std::size_t n = g.size();
        E_.resize(n);
        E2_.resize(n);
        Q_.resize(n);
        f1_.resize(n);
        f2_.resize(n);
        f3_.resize(n);
        for (int j = 0; j < g.nx; ++j) {
            const double xi = g.xi[j];
            const std::size_t base = static_cast<std::size_t>(j) * g.ny;
            for (int k = 0; k < g.ny; ++k) {
                std::complex<double> L = 0.0;
                if (xi != 0.0)
                    L = std::complex<double>(-cfg.nu * xi * xi,
                                             xi * xi * xi - cfg.eps * g.eta[k] * g.eta[k] / xi);
                const std::complex<double> z = L * cfg.dt;
                E_[base + k] = std::exp(z);
                E2_[base + k] = std::exp(0.5 * z);
                Q_[base + k] = cfg.dt * 0.5 * phi(1, 0.5 * z);
                const auto p1 = phi(1, z), p2 = phi(2, z), p3 = phi(3, z);
                f1_[base + k] = cfg.dt * (p1 - 3.0 * p2 + 4.0 * p3);
                f2_[base + k] = cfg.dt * (p2 - 2.0 * p3);
                f3_[base + k] = cfg.dt * (4.0 * p3 - p2);
            }
        }
    }

    static std::complex<double> phi(int k, std::complex<double> z) {
        if (std::abs(z) >= 0.5) {
            const std::complex<double> ez = std::exp(z);
            if (k == 1) return (ez - 1.0) / z;
            if (k == 2) return (ez - 1.0 - z) / (z * z);
            return (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
        }
        // phi_k(z) = sum_{j>=0} z^j / (j+k)!
        std::complex<double> acc = 0.0, zp = 1.0;
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        for (int j = 0; j < 19; ++j) {
            acc += zp / fact;
            zp *= z;
            fact *= (j + k + 1);
        }
        return acc;
    }

    Field step(const Field& u) const {
        const auto& c = u.spectral();
        const Field n1 = nonlinear_term(u, cfg_.p);
        std::vector<std::complex<double>> a(c.size()), b(c.size()), d(c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            a[i] = E2_[i] * c[i] + Q_[i] * n1.spectral()[i];
        const Field fa = Field::from_spectral(grid_, a);
        const Field n2 = nonlinear_term(fa, cfg_.p);
        for (std::size_t i = 0; i < c.size(); ++i)
            b[i] = E2_[i] * c[i] + Q_[i] * n2.spectral()[i];
        const Field fb = Field::from_spectral(grid_, b);
        const Field n3 = nonlinear_term(fb, cfg_.p);
        for (std::size_t i = 0; i < c.size(); ++i)
            d[i] = E2_[i] * fa.spectral()[i] + Q_[i] * (2.0 * n3.spectral()[i] - n1.spectral()[i]);
        const Field fd = Field::from_spectral(grid_, d);
        const Field n4 = nonlinear_term(fd, cfg_.p);
        std::vector<std::complex<double>> out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            out[i] = E_[i] * c[i] + f1_[i] * n1.spectral()[i] +
                     2.0 * f2_[i] * (n2.spectral()[i] + n3.spectral()[i]) +
                     f3_[i] * n4.spectral()[i];
        // re-enforce the zero-mass condition against round-off
        for (int k = 0; k < grid_->ny; ++k) out[k] = 0.0;
        return Field::from_spectral(grid_, std::move(out));
    }

    /// Purely linear step (used by the reduction test of the scheme).
    Field step_linear(const Field& u) const {
        std::vector<std::complex<double>> out(u.spectral().size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = E_[i] * u.spectral()[i];
        for (int k = 0; k < grid_->ny; ++k) out[k] = 0.0;
        return Field::from_spectral(grid_, std::move(out));
    }

private:
    SimConfig cfg_;
    GridPtr grid_;
    std::vector<std::complex<double>> E_, E2_, Q_, f1_, f2_, f3_;
};

inline Field step(const Field& state, double dt, const SimConfig& cfg) {
    require_zero_mass(state, "step");
    SimConfig c = cfg;
    c.dt = dt;
    EtdRk4 scheme(c, state.grid());
    return cfg.nonlinear ? scheme.step(state) : scheme.step_linear(state);
}

/// Advance to t_end recording diagnostics each step, snapshots at the
/// requested times (snapped to the step grid), and the N0 / U accumulators
/// by the trapezoid rule in tau.
inline SimulationResult run_simulation(const SimConfig& cfg, const Field& u0) {
    cfg.validate();
    require_zero_mass(u0, "run_simulation");
    const auto grid = u0.grid();
    const auto& g = *grid;
    SimulationResult res;
    DiagnosticsSeries& series = res.series;

    series.B0 = b_functional(u0);
    series.E0 = e0_functional(u0);
    series.x_moment0 = u0.x_moment();
    series.M1 = moment_profile(u0, 1).values;
    series.U_accumulator.assign(g.ny, 0.0);

    const double linf0 = u0.linf_norm();
    const double l2sq0 = std::pow(u0.l2_norm(), 2);

    auto u_row_integral = [&](const Field& u, std::vector<double>& out) {
        // U(w, t) = -(1/(p+1)) int u^{p+1}(z, w, t) dz
        out.assign(g.ny, 0.0);
        for (int j = 0; j < g.nx; ++j) {
            const std::size_t base = static_cast<std::size_t>(j) * g.ny;
            for (int k = 0; k < g.ny; ++k)
                out[k] += std::pow(u.physical()[base + k], cfg.p + 1);
        }
        for (double& v : out) v *= -g.dx() / (cfg.p + 1);
    };

    std::vector<double> U_prev(g.ny, 0.0), U_now(g.ny, 0.0);
    u_row_integral(u0, U_prev);

    double ux_l2sq_prev = 0.0;
    double ux_integral = 0.0;  // int_0^t ||u_x||_2^2 dtau (trapezoid)
    double H = 0.0;
    double max_balance = 0.0;

    auto record = [&](const Field& u, double t, bool first) {
        DiagnosticsRecord r;
        r.t = t;
        r.linf_norm = u.linf_norm();
        r.l2_norm = u.l2_norm_spectral();
        r.l2_ux = detail::multiplier_l2(u, [](double xi, double) { return xi; });
        r.l2_uy = detail::multiplier_l2(u, [](double, double eta) { return eta; });
        r.l2_uxx = detail::multiplier_l2(u, [](double xi, double) { return xi * xi; });
        r.l2_uxy = detail::multiplier_l2(u, [](double xi, double eta) { return xi * eta; });
        r.l2_uxxx =
            detail::multiplier_l2(u, [](double xi, double) { return xi * xi * xi; });
        r.B_of_u = b_functional(u);
        if (!first) ux_integral += 0.5 * cfg.dt * (ux_l2sq_prev + r.l2_ux * r.l2_ux);
        ux_l2sq_prev = r.l2_ux * r.l2_ux;
        H = std::max(H, std::pow(1.0 + t, 1.75) * r.linf_norm);
        r.H_of_t = H;
        r.E0 = series.E0;
        const double bal =
            std::abs(r.l2_norm * r.l2_norm - l2sq0 + 2.0 * cfg.nu * ux_integral) / l2sq0;
        max_balance = std::max(max_balance, bal);
        r.balance_residual = max_balance;
        r.boundary_contamination = u.boundary_contamination();
        return r;
    };

    double I_nl = 0.0;  // int_0^t int u^{p+1} dx dy dtau
    double nl_prev = 0.0;
    {
        double s = 0.0;
        for (double v : u0.physical()) s += std::pow(v, cfg.p + 1);
        nl_prev = s * g.dx() * g.dy();
    }

    DiagnosticsRecord r0 = record(u0, 0.0, true);
    r0.N0_partial = -series.x_moment0;
    series.records.push_back(r0);

    auto want_snapshot = [&](double t) -> std::optional<double> {
        for (double ts : cfg.snapshots)
            if (std::abs(t - ts) <= 0.5 * cfg.dt && !res.snapshots.count(ts)) return ts;
        return std::nullopt;
    };
    if (auto ts = want_snapshot(0.0)) res.snapshots.emplace(*ts, u0);

    const long nsteps = std::lround(cfg.t_end / cfg.dt);
    EtdRk4 scheme(cfg, grid);
    Field u = u0;
    for (long n = 1; n <= nsteps; ++n) {
        const double t = n * cfg.dt;
        u = cfg.nonlinear ? scheme.step(u) : scheme.step_linear(u);
        if (u.linf_norm() > 10.0 * std::max(linf0, 1e-300))
            throw DivergenceError("run_simulation: ||u||_inf exceeded 10x its initial value",
                                  (n - 1) * cfg.dt);

        double s = 0.0;
        for (double v : u.physical()) s += std::pow(v, cfg.p + 1);
        const double nl_now = s * g.dx() * g.dy();
        I_nl += 0.5 * cfg.dt * (nl_prev + nl_now);
        nl_prev = nl_now;

        u_row_integral(u, U_now);
        for (int k = 0; k < g.ny; ++k)
            series.U_accumulator[k] += 0.5 * cfg.dt * (U_prev[k] + U_now[k]);
        std::swap(U_prev, U_now);

        DiagnosticsRecord r = record(u, t, false);
        r.N0_partial = -series.x_moment0 - I_nl / (cfg.p + 1);
        series.records.push_back(r);

        if (auto ts = want_snapshot(t)) res.snapshots.emplace(*ts, u);
    }
    res.final_state = u;
    return res;
}

/// max over checkpoints of |  ||u(t)||_2^2 - ||u0||_2^2 + 2 nu int_0^t ||u_x||_2^2  | / ||u0||_2^2.
inline double energy_balance_check(const DiagnosticsSeries& series, double nu) {
    if (series.records.empty()) return 0.0;
    const double l2sq0 = std::pow(series.records.front().l2_norm, 2);
    double integral = 0.0, res = 0.0;
    for (std::size_t i = 1; i < series.records.size(); ++i) {
        const auto& a = series.records[i - 1];
        const auto& b = series.records[i];
        integral += 0.5 * (b.t - a.t) * (a.l2_ux * a.l2_ux + b.l2_ux * b.l2_ux);
        res = std::max(res,
                       std::abs(b.l2_norm * b.l2_norm - l2sq0 + 2.0 * nu * integral) / l2sq0);
    }
    return res;
}

/// Q(w) = M1(w) + int_0^T U(w, tau) dtau, and its lattice integral (= N0).
struct AmplitudeFunctionQ {
    std::vector<double> values;
    double integral_of_Q = 0.0;
};

inline AmplitudeFunctionQ assemble_q(const DiagnosticsSeries& series, double dy) {
    AmplitudeFunctionQ q;
    q.values.resize(series.M1.size());
    for (std::size_t k = 0; k < q.values.size(); ++k)
        q.values[k] = series.M1[k] + series.U_accumulator[k];
    for (double v : q.values) q.integral_of_Q += v;
    q.integral_of_Q *= dy;
    return q;
}

}  // namespace kpb
