#pragma once

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <vector>

#include "qxi/errors.hpp"
#include "qxi/grid.hpp"

namespace qxi {

// One step of the order-lowering convolution P_R -> P_S. The kernel is the
// normalized Gaussian exp(-((x-x')^2+(p-p')^2)/(R-S)) / (pi (R-S)), i.e.
// variance (R-S)/2 per quadrature.
struct SmoothingJob {
    double source_order = 0.0;
    double target_order = 0.0;

    SmoothingJob(double r, double s) : source_order(r), target_order(s) {
        if (s > r)
            throw TransformError(
                "deconvolution unsupported: target order must not exceed the source order");
    }
    double width() const { return source_order - target_order; }  // R - S
    double kernel_variance() const { return width() / 2.0; }
    bool is_identity() const { return width() == 0.0; }
};

enum class ConvolutionBackend { spectral, direct_sum };

namespace detail {

// Sampled 1D kernel: exp(-(d*delta)^2 / t) for |d| <= radius, truncated where
// the tap falls below 1e-16 of the peak, renormalized to unit sum so the
// discrete convolution preserves field mass exactly.
struct Kernel1D {
    int radius = 0;
    std::vector<double> w;  // size 2*radius + 1, centered

    Kernel1D(double t, double delta) {
        const double cutoff = std::sqrt(t * std::log(1e16));
        radius = static_cast<int>(std::ceil(cutoff / delta));
        w.resize(2 * radius + 1);
        double sum = 0.0;
        for (int d = -radius; d <= radius; ++d) {
            const double u = d * delta;
            w[d + radius] = std::exp(-u * u / t);
            sum += w[d + radius];
        }
        for (double& v : w) v /= sum;
    }
};

inline void separable_pass_x(const std::vector<double>& in, std::vector<double>& out, int nx,
                             int np, const Kernel1D& k) {
    for (int j = 0; j < np; ++j) {
        const double* row = in.data() + static_cast<std::size_t>(j) * nx;
        double* orow = out.data() + static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const int dlo = std::max(-k.radius, i - (nx - 1));
            const int dhi = std::min(k.radius, i);
            double acc = 0.0;
            for (int d = dlo; d <= dhi; ++d) acc += k.w[d + k.radius] * row[i - d];
            orow[i] = acc;
        }
    }
}

inline void separable_pass_p(const std::vector<double>& in, std::vector<double>& out, int nx,
                             int np, const Kernel1D& k) {
    for (int j = 0; j < np; ++j) {
        const int dlo = std::max(-k.radius, j - (np - 1));
        const int dhi = std::min(k.radius, j);
        double* orow = out.data() + static_cast<std::size_t>(j) * nx;
        std::memset(orow, 0, sizeof(double) * nx);
        for (int d = dlo; d <= dhi; ++d) {
            const double wk = k.w[d + k.radius];
            const double* row = in.data() + static_cast<std::size_t>(j - d) * nx;
            for (int i = 0; i < nx; ++i) orow[i] += wk * row[i];
        }
    }
}

inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

struct FftwReal {
    double* p = nullptr;
    explicit FftwReal(std::size_t n) : p(static_cast<double*>(fftw_malloc(n * sizeof(double)))) {}
    ~FftwReal() { fftw_free(p); }
    FftwReal(const FftwReal&) = delete;
    FftwReal& operator=(const FftwReal&) = delete;
};

struct FftwCplx {
    fftw_complex* p = nullptr;
    explicit FftwCplx(std::size_t n)
        : p(static_cast<fftw_complex*>(fftw_malloc(n * sizeof(fftw_complex)))) {}
    ~FftwCplx() { fftw_free(p); }
    FftwCplx(const FftwCplx&) = delete;
    FftwCplx& operator=(const FftwCplx&) = delete;
};

inline int next_fast_size(int n) {
    for (int m = n;; ++m) {
        int v = m;
        while (v % 2 == 0) v /= 2;
        while (v % 3 == 0) v /= 3;
        while (v % 5 == 0) v /= 5;
        if (v == 1) return m;
    }
}

// Real spectrum of the zero-padded, wrap-stored symmetric kernel:
// khat[m] = w[0] + 2 sum_d w[d] cos(2 pi m d / M).
inline std::vector<double> kernel_spectrum(const Kernel1D& k, int M) {
    std::vector<double> s(static_cast<std::size_t>(M));
    const double f = 2.0 * std::numbers::pi / M;
    for (int m = 0; m < M; ++m) {
        double acc = k.w[k.radius];
        for (int d = 1; d <= k.radius; ++d)
            acc += 2.0 * k.w[k.radius + d] * std::cos(f * m * d);
        s[m] = acc;
    }
    return s;
}

// Linear convolution with the separable kernel via one padded 2D transform
// pair. Padding of at least one kernel radius per axis keeps the circular
// wrap out of the restored window.
inline std::vector<double> spectral_convolve(const std::vector<double>& in, int nx, int np,
                                             const Kernel1D& kx, const Kernel1D& kp) {
    const int Mc = next_fast_size(nx + kx.radius);
    const int Mr = next_fast_size(np + kp.radius);
    const std::size_t real_n = static_cast<std::size_t>(Mr) * Mc;
    const std::size_t cplx_n = static_cast<std::size_t>(Mr) * (Mc / 2 + 1);

    FftwReal buf(real_n);
    FftwCplx spec(cplx_n);
    std::memset(buf.p, 0, real_n * sizeof(double));
    for (int j = 0; j < np; ++j)
        std::memcpy(buf.p + static_cast<std::size_t>(j) * Mc,
                    in.data() + static_cast<std::size_t>(j) * nx, sizeof(double) * nx);

    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fwd = fftw_plan_dft_r2c_2d(Mr, Mc, buf.p, spec.p, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_2d(Mr, Mc, spec.p, buf.p, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);

    const std::vector<double> sx = kernel_spectrum(kx, Mc);
    const std::vector<double> sp = kernel_spectrum(kp, Mr);
    const double inv = 1.0 / static_cast<double>(real_n);
    for (int jr = 0; jr < Mr; ++jr) {
        const double a = sp[jr] * inv;
        fftw_complex* row = spec.p + static_cast<std::size_t>(jr) * (Mc / 2 + 1);
        for (int jc = 0; jc <= Mc / 2; ++jc) {
            const double g = a * sx[jc];
            row[jc][0] *= g;
            row[jc][1] *= g;
        }
    }
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }

    std::vector<double> out(static_cast<std::size_t>(nx) * np);
    for (int j = 0; j < np; ++j)
        std::memcpy(out.data() + static_cast<std::size_t>(j) * nx,
                    buf.p + static_cast<std::size_t>(j) * Mc, sizeof(double) * nx);
    return out;
}

inline void check_edge_envelope(const ScalarField2D& f) {
    const GridGeometry& g = f.geometry;
    double edge = 0.0;
    for (int i = 0; i < g.nx; ++i)
        edge = std::max({edge, std::abs(f.at(i, 0)), std::abs(f.at(i, g.np - 1))});
    for (int j = 0; j < g.np; ++j)
        edge = std::max({edge, std::abs(f.at(0, j)), std::abs(f.at(g.nx - 1, j))});
    if (edge > 1e-9)
        throw TransformError("window too small for smoothing: envelope at the window edge is " +
                             std::to_string(edge));
}

// Shared by smooth() and the loss channel: convolve with the Gaussian of
// per-axis variance t/2, order bookkeeping left to the caller.
inline std::vector<double> convolve_gaussian(const ScalarField2D& f, double t,
                                             ConvolutionBackend backend) {
    const Kernel1D kx(t, f.geometry.dx());
    const Kernel1D kp(t, f.geometry.dp());
    if (backend == ConvolutionBackend::spectral)
        return spectral_convolve(f.values, f.geometry.nx, f.geometry.np, kx, kp);
    std::vector<double> tmp(f.values.size()), out(f.values.size());
    separable_pass_x(f.values, tmp, f.geometry.nx, f.geometry.np, kx);
    separable_pass_p(tmp, out, f.geometry.nx, f.geometry.np, kp);
    return out;
}

// Catmull-Rom interpolation at fractional index coordinates, zero outside.
inline double bicubic_sample(const ScalarField2D& f, double qi, double qj) {
    const int nx = f.geometry.nx, np = f.geometry.np;
    const int i0 = static_cast<int>(std::floor(qi));
    const int j0 = static_cast<int>(std::floor(qj));
    if (i0 < -2 || i0 > nx || j0 < -2 || j0 > np) return 0.0;
    const double fx = qi - i0, fy = qj - j0;
    auto wts = [](double u, double w[4]) {
        w[0] = ((-0.5 * u + 1.0) * u - 0.5) * u;
        w[1] = (1.5 * u - 2.5) * u * u + 1.0;
        w[2] = ((-1.5 * u + 2.0) * u + 0.5) * u;
        w[3] = 0.5 * u * u * (u - 1.0);
    };
    double wx[4], wy[4];
    wts(fx, wx);
    wts(fy, wy);
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
        const int j = j0 - 1 + b;
        if (j < 0 || j >= np || wy[b] == 0.0) continue;
        double rowacc = 0.0;
        for (int a = 0; a < 4; ++a) {
            const int i = i0 - 1 + a;
            if (i < 0 || i >= nx || wx[a] == 0.0) continue;
            rowacc += wx[a] * f.at(i, j);
        }
        acc += wy[b] * rowacc;
    }
    return acc;
}

}  // namespace detail

// Map a field of order R to order S <= R by Gaussian convolution. The output
// keeps the input window; mass is conserved to quadrature accuracy provided
// the state has decayed at the window edge (checked).
inline ScalarField2D smooth(const ScalarField2D& field, double target_order,
                            ConvolutionBackend backend = ConvolutionBackend::spectral) {
    if (field.order.derived)
        throw TransformError("cannot smooth a derived field: it has no distribution order");
    SmoothingJob job(field.order.s, target_order);
    if (job.is_identity()) return field;
    detail::check_edge_envelope(field);
    ScalarField2D out(field.geometry, DistributionOrder::of(target_order),
                      detail::convolve_gaussian(field, job.width(), backend));
    return out;
}

// Beam-splitter loss with intensity transmissivity eta: contract coordinates
// by sqrt(eta), then smooth with per-axis kernel variance (1-eta)/2. eta = 1
// is the identity.
inline ScalarField2D loss_channel(const ScalarField2D& field, double eta,
                                  ConvolutionBackend backend = ConvolutionBackend::spectral) {
    if (!field.order.is_wigner())
        throw TransformError("loss channel requires a Wigner-order field");
    if (!(eta > 0.0) || eta > 1.0)
        throw TransformError("transmissivity must lie in (0, 1]");
    if (eta == 1.0) return field;
    detail::check_edge_envelope(field);

    const GridGeometry& g = field.geometry;
    const double se = std::sqrt(eta);
    ScalarField2D scaled(g, DistributionOrder::wigner());
    for (int j = 0; j < g.np; ++j) {
        const double qj = (g.p(j) / se - g.pmin) / g.dp();
        for (int i = 0; i < g.nx; ++i) {
            const double qi = (g.x(i) / se - g.xmin) / g.dx();
            scaled.at(i, j) = detail::bicubic_sample(field, qi, qj) / eta;
        }
    }
    return ScalarField2D(g, DistributionOrder::wigner(),
                         detail::convolve_gaussian(scaled, 1.0 - eta, backend));
}

}  // namespace qxi
