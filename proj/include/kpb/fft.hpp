#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace kpb::fft {

// FFTW plans are grid-global and reused; creation is serialized (FFTW's
// planner is not thread-safe), execution on distinct buffers is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    // In-place c2c transform of an nx-by-ny row-major array.
    void transform(std::complex<double>* data, int nx, int ny, int sign) {
        fftw_plan p = plan(nx, ny, sign);
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }

    void transform1d(std::complex<double>* data, int n, int sign) {
        fftw_plan p = plan(n, 0, sign);
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }

    fftw_plan plan(int nx, int ny, int sign) {
        std::scoped_lock lk(mu_);
        auto key = std::tuple{nx, ny, sign};
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        // FFTW_ESTIMATE: deterministic plans, and planning does not touch the
        // caller's buffer contents.
        std::vector<std::complex<double>> scratch(static_cast<std::size_t>(nx) *
                                                  (ny > 0 ? ny : 1));
        auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan p = ny > 0 ? fftw_plan_dft_2d(nx, ny, ptr, ptr, sign, FFTW_ESTIMATE)
                             : fftw_plan_dft_1d(nx, ptr, ptr, sign, FFTW_ESTIMATE);
        plans_.emplace(key, p);
        return p;
    }

    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

// Physical samples on the centered lattice x_j = -Lx/2 + j dx  <->  Fourier
// series coefficients c_{m,n} with f = sum c e^{i(xi_m x + eta_n y)}.
// The box-centered origin contributes the (-1)^{m+n} phase.

inline void series_from_physical(const std::vector<double>& phys,
                                 std::vector<std::complex<double>>& spec, int nx, int ny) {
    spec.resize(phys.size());
    for (std::size_t i = 0; i < phys.size(); ++i) spec[i] = phys[i];
    PlanCache::instance().transform(spec.data(), nx, ny, FFTW_FORWARD);
    const double norm = 1.0 / (static_cast<double>(nx) * ny);
    for (int j = 0; j < nx; ++j)
        for (int k = 0; k < ny; ++k) {
            const double s = ((j + k) % 2 == 0) ? norm : -norm;
            spec[static_cast<std::size_t>(j) * ny + k] *= s;
        }
}

// Returns the (complex) collocation values; real fields take the real part.
inline void physical_from_series(const std::vector<std::complex<double>>& spec,
                                 std::vector<std::complex<double>>& work,
                                 std::vector<double>& phys, int nx, int ny) {
    work = spec;
    for (int j = 0; j < nx; ++j)
        for (int k = 0; k < ny; ++k)
            if ((j + k) % 2 != 0) work[static_cast<std::size_t>(j) * ny + k] *= -1.0;
    PlanCache::instance().transform(work.data(), nx, ny, FFTW_BACKWARD);
    phys.resize(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) phys[i] = work[i].real();
}

}  // namespace kpb::fft
