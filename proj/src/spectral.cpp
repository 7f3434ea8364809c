#include "lam/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace lam {
namespace spectral {

namespace {

// One cached plan pair (r2c/c2r) per grid size, executed under a mutex
// through internal buffers. FFTW_ESTIMATE keeps plan choice deterministic.
struct Workspace1D {
    int n;
    double* real;
    fftw_complex* cplx;
    fftw_plan fwd, bwd;
    std::mutex mtx;

    explicit Workspace1D(int n_) : n(n_) {
        real = fftw_alloc_real(n);
        cplx = fftw_alloc_complex(n / 2 + 1);
        fwd = fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
    }
    ~Workspace1D() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(cplx);
    }
};

struct Workspace2D {
    int nx, ny;
    double* real;
    fftw_complex* cplx;
    fftw_plan fwd, bwd;
    std::mutex mtx;

    Workspace2D(int nx_, int ny_) : nx(nx_), ny(ny_) {
        real = fftw_alloc_real(static_cast<size_t>(nx) * ny);
        cplx = fftw_alloc_complex(static_cast<size_t>(ny) * (nx / 2 + 1));
        // Row-major data with x fastest: FFTW dims are (ny, nx).
        fwd = fftw_plan_dft_r2c_2d(ny, nx, real, cplx, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(ny, nx, cplx, real, FFTW_ESTIMATE);
    }
    ~Workspace2D() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(cplx);
    }
};

Workspace1D& ws1(int n) {
    static std::mutex cache_mtx;
    static std::map<int, std::unique_ptr<Workspace1D>> cache;
    std::lock_guard<std::mutex> lk(cache_mtx);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Workspace1D>(n);
    return *slot;
}

Workspace2D& ws2(int nx, int ny) {
    static std::mutex cache_mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<Workspace2D>> cache;
    std::lock_guard<std::mutex> lk(cache_mtx);
    auto& slot = cache[{nx, ny}];
    if (!slot) slot = std::make_unique<Workspace2D>(nx, ny);
    return *slot;
}

inline double wavenumber(int i, int n) { return i <= n / 2 ? i : i - n; }

// Applies op(k, re, im) to every retained mode of the 1D spectrum.
template <class Op>
void transform_1d(std::span<const double> in, std::span<double> out, Op&& op) {
    const int n = static_cast<int>(in.size());
    if (out.size() != in.size()) throw std::invalid_argument("spectral: size mismatch");
    auto& w = ws1(n);
    std::lock_guard<std::mutex> lk(w.mtx);
    std::memcpy(w.real, in.data(), n * sizeof(double));
    fftw_execute(w.fwd);
    const double inv = 1.0 / n;
    for (int i = 0; i <= n / 2; i++) {
        double re = w.cplx[i][0] * inv, im = w.cplx[i][1] * inv;
        op(static_cast<double>(i), re, im);
        w.cplx[i][0] = re;
        w.cplx[i][1] = im;
    }
    fftw_execute(w.bwd);
    std::memcpy(out.data(), w.real, n * sizeof(double));
}

template <class Op>
void transform_2d(std::span<const double> in, std::span<double> out, int nx, int ny, Op&& op) {
    if (in.size() != static_cast<size_t>(nx) * ny || out.size() != in.size())
        throw std::invalid_argument("spectral: size mismatch");
    auto& w = ws2(nx, ny);
    std::lock_guard<std::mutex> lk(w.mtx);
    std::memcpy(w.real, in.data(), in.size() * sizeof(double));
    fftw_execute(w.fwd);
    const double inv = 1.0 / (static_cast<double>(nx) * ny);
    const int nxh = nx / 2 + 1;
    for (int iy = 0; iy < ny; iy++) {
        const double ky = wavenumber(iy, ny);
        for (int ix = 0; ix < nxh; ix++) {
            const double kx = ix;
            double re = w.cplx[iy * nxh + ix][0] * inv;
            double im = w.cplx[iy * nxh + ix][1] * inv;
            op(kx, ky, re, im);
            w.cplx[iy * nxh + ix][0] = re;
            w.cplx[iy * nxh + ix][1] = im;
        }
    }
    fftw_execute(w.bwd);
    std::memcpy(out.data(), w.real, out.size() * sizeof(double));
}

// (ik)^order as a complex multiplier acting on (re,im) in place.
inline void mul_ik_power(double k, int order, bool is_nyquist, double& re, double& im) {
    if (order == 0) return;
    // Nyquist mode has no well-defined sign for odd derivatives.
    if (is_nyquist && (order % 2 == 1)) {
        re = im = 0.0;
        return;
    }
    std::complex<double> z(re, im);
    std::complex<double> ik(0.0, k);
    std::complex<double> f = 1.0;
    for (int p = 0; p < order; p++) f *= ik;
    z *= f;
    re = z.real();
    im = z.imag();
}

} // namespace

void derivative_1d(std::span<const double> in, std::span<double> out, int order) {
    const int n = static_cast<int>(in.size());
    transform_1d(in, out, [&](double k, double& re, double& im) {
        mul_ik_power(k, order, static_cast<int>(k) == n / 2 && n % 2 == 0, re, im);
    });
}

void derivative_2d(std::span<const double> in, std::span<double> out,
                   int nx, int ny, int axis, int order) {
    transform_2d(in, out, nx, ny, [&](double kx, double ky, double& re, double& im) {
        if (axis == 0)
            mul_ik_power(kx, order, static_cast<int>(kx) == nx / 2 && nx % 2 == 0, re, im);
        else
            mul_ik_power(ky, order, std::abs(ky) == ny / 2 && ny % 2 == 0, re, im);
    });
}

void apply_symbol_1d(std::span<const double> in, std::span<double> out,
                     const std::function<double(double)>& symbol) {
    transform_1d(in, out, [&](double k, double& re, double& im) {
        double s = symbol(k);
        re *= s;
        im *= s;
    });
}

void apply_symbol_2d(std::span<const double> in, std::span<double> out,
                     int nx, int ny, const std::function<double(double, double)>& symbol) {
    transform_2d(in, out, nx, ny, [&](double kx, double ky, double& re, double& im) {
        double s = symbol(kx, ky);
        re *= s;
        im *= s;
    });
}

void dealias_1d(std::span<double> data) {
    const int n = static_cast<int>(data.size());
    const int cut = n / 3;
    transform_1d(data, data, [&](double k, double& re, double& im) {
        if (std::abs(k) > cut) re = im = 0.0;
    });
}

void dealias_2d(std::span<double> data, int nx, int ny) {
    const int cx = nx / 3, cy = ny / 3;
    transform_2d(data, data, nx, ny, [&](double kx, double ky, double& re, double& im) {
        if (std::abs(kx) > cx || std::abs(ky) > cy) re = im = 0.0;
    });
}

double tail_fraction_1d(std::span<const double> data) {
    const int n = static_cast<int>(data.size());
    const int cut = n / 3;
    double total = 0.0, tail = 0.0;
    std::vector<double> tmp(data.size());
    transform_1d(data, tmp, [&](double k, double& re, double& im) {
        double e = re * re + im * im;
        total += e;
        if (std::abs(k) > 2 * cut / 3) tail += e;
    });
    return total > 0.0 ? tail / total : 0.0;
}

double tail_fraction_2d(std::span<const double> data, int nx, int ny) {
    const int cx = nx / 3, cy = ny / 3;
    double total = 0.0, tail = 0.0;
    std::vector<double> tmp(data.size());
    transform_2d(data, tmp, nx, ny, [&](double kx, double ky, double& re, double& im) {
        double e = re * re + im * im;
        total += e;
        if (std::abs(kx) > 2 * cx / 3 || std::abs(ky) > 2 * cy / 3) tail += e;
    });
    return total > 0.0 ? tail / total : 0.0;
}

void poisson_1d(std::span<const double> f, std::span<double> u) {
    transform_1d(f, u, [](double k, double& re, double& im) {
        if (k == 0.0) {
            re = im = 0.0;
        } else {
            re /= -k * k;
            im /= -k * k;
        }
    });
}

void poisson_2d(std::span<const double> f, std::span<double> u, int nx, int ny) {
    transform_2d(f, u, nx, ny, [](double kx, double ky, double& re, double& im) {
        double k2 = kx * kx + ky * ky;
        if (k2 == 0.0) {
            re = im = 0.0;
        } else {
            re /= -k2;
            im /= -k2;
        }
    });
}

void helmholtz_1d(std::span<const double> m, std::span<double> u, double eps) {
    transform_1d(m, u, [eps](double k, double& re, double& im) {
        double s = 1.0 / (1.0 + eps * eps * k * k);
        re *= s;
        im *= s;
    });
}

void helmholtz_2d(std::span<const double> m, std::span<double> u, int nx, int ny, double eps) {
    transform_2d(m, u, nx, ny, [eps](double kx, double ky, double& re, double& im) {
        double s = 1.0 / (1.0 + eps * eps * (kx * kx + ky * ky));
        re *= s;
        im *= s;
    });
}

void leray_2d(std::span<double> ux, std::span<double> uy, int nx, int ny) {
    // u - k (k.u)/|k|^2 in spectral space, applied to both components.
    const size_t nn = static_cast<size_t>(nx) * ny;
    if (ux.size() != nn || uy.size() != nn) throw std::invalid_argument("leray_2d: size mismatch");
    auto& w = ws2(nx, ny);
    std::lock_guard<std::mutex> lk(w.mtx);
    const int nxh = nx / 2 + 1;
    std::vector<std::complex<double>> hx(static_cast<size_t>(ny) * nxh), hy(hx.size());

    std::memcpy(w.real, ux.data(), nn * sizeof(double));
    fftw_execute(w.fwd);
    for (size_t i = 0; i < hx.size(); i++) hx[i] = {w.cplx[i][0], w.cplx[i][1]};
    std::memcpy(w.real, uy.data(), nn * sizeof(double));
    fftw_execute(w.fwd);
    for (size_t i = 0; i < hy.size(); i++) hy[i] = {w.cplx[i][0], w.cplx[i][1]};

    const double inv = 1.0 / (static_cast<double>(nx) * ny);
    for (int iy = 0; iy < ny; iy++) {
        const double ky = wavenumber(iy, ny);
        for (int ix = 0; ix < nxh; ix++) {
            const double kx = ix;
            const double k2 = kx * kx + ky * ky;
            size_t idx = static_cast<size_t>(iy) * nxh + ix;
            if (k2 > 0.0) {
                std::complex<double> kdotu = kx * hx[idx] + ky * hy[idx];
                hx[idx] -= kx * kdotu / k2;
                hy[idx] -= ky * kdotu / k2;
            }
            hx[idx] *= inv;
            hy[idx] *= inv;
        }
    }

    for (size_t i = 0; i < hx.size(); i++) {
        w.cplx[i][0] = hx[i].real();
        w.cplx[i][1] = hx[i].imag();
    }
    fftw_execute(w.bwd);
    std::memcpy(ux.data(), w.real, nn * sizeof(double));
    for (size_t i = 0; i < hy.size(); i++) {
        w.cplx[i][0] = hy[i].real();
        w.cplx[i][1] = hy[i].imag();
    }
    fftw_execute(w.bwd);
    std::memcpy(uy.data(), w.real, nn * sizeof(double));
}

} // namespace spectral
} // namespace lam
