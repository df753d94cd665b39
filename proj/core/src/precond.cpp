#include "tvct/precond.hpp"

#include <cmath>
#include <random>

#include "tvct/diffops.hpp"
#include "tvct/fft.hpp"

namespace tvct {

namespace {

double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Peak pixel of the discrete point function: for even n the lower right of
// the middle four entries, for odd n the center pixel.
int impulse_index(int n) { return n / 2; }

std::vector<double> impulse_response(const RadonOp& op) {
    Image delta(op.image_geom);
    const int q = impulse_index(op.image_geom.n);
    delta.at(q, q) = 1.0;
    return adjoint(forward(delta, op), op).data;
}

// Recenter so the impulse site moves to (0,0), then enforce both transpose
// symmetry (from the source) and circular point symmetry, which makes the
// DFT of the kernel real and the implied convolution operator symmetric.
std::vector<double> recenter_and_symmetrize(const std::vector<double>& k, int n, int q) {
    std::vector<double> shifted(k.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            shifted[static_cast<std::size_t>(i) * n + j] =
                k[static_cast<std::size_t>((i + q) % n) * n + (j + q) % n];
    std::vector<double> sym(k.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int ri = (n - i) % n;
            const int rj = (n - j) % n;
            sym[static_cast<std::size_t>(i) * n + j] =
                0.5 * (shifted[static_cast<std::size_t>(i) * n + j] +
                       shifted[static_cast<std::size_t>(ri) * n + rj]);
        }
    return sym;
}

std::vector<double> real_symbol_2d(const std::vector<double>& kernel, int n) {
    auto spec = fft::dft2(kernel, n);
    std::vector<double> out(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) out[i] = spec[i].real();
    return out;
}

std::vector<double> circ_symmetrize(std::vector<double> k) {
    const std::size_t p = k.size();
    std::vector<double> out(p);
    for (std::size_t i = 0; i < p; ++i) out[i] = 0.5 * (k[i] + k[(p - i) % p]);
    return out;
}

std::vector<double> real_symbol_1d(const std::vector<double>& k) {
    fft::cvec buf(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) buf[i] = k[i];
    auto spec = fft::dft1(buf);
    std::vector<double> out(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) out[i] = spec[i].real();
    return out;
}

// Largest generalized eigenvalue of Mtilde^{-1} A via power iteration,
// evaluated through the Rayleigh quotient <Ax,x>/<Mx,x>.
double generalized_power_iteration(
    const std::function<std::vector<double>(const std::vector<double>&)>& apply_A,
    const std::function<std::vector<double>(const std::vector<double>&)>& apply_M,
    const std::function<std::vector<double>(const std::vector<double>&)>& solve_M,
    std::size_t dim, int iters, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> x(dim);
    for (auto& xi : x) xi = dist(rng);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        double nrm = std::sqrt(vec_dot(x, x));
        if (!(nrm > 0)) throw std::runtime_error("calibrate: power iteration collapsed");
        for (auto& xi : x) xi /= nrm;
        auto ax = apply_A(x);
        auto mx = apply_M(x);
        const double denom = vec_dot(mx, x);
        if (!(denom > 0)) throw std::runtime_error("calibrate: preconditioner not positive definite");
        lambda = vec_dot(ax, x) / denom;
        if (!std::isfinite(lambda)) throw std::runtime_error("calibrate: divergent iteration");
        x = solve_M(ax);
    }
    return lambda;
}

void require_calibrated(const PrecondSpec& spec) {
    if (!spec.calibrated) throw std::logic_error("preconditioner used before calibration");
}

std::vector<double> divide_symbol(const std::vector<double>& sym) {
    double peak = 0.0;
    for (double s : sym) peak = std::max(peak, std::abs(s));
    std::vector<double> inv(sym.size());
    for (std::size_t i = 0; i < sym.size(); ++i) {
        if (!(std::abs(sym[i]) > 1e-14 * peak))
            throw std::runtime_error("singular circulant symbol");
        inv[i] = 1.0 / sym[i];
    }
    return inv;
}

}  // namespace

FrequencyTables make_frequency_tables(int n, double eps) {
    if (n < 2) throw std::invalid_argument("make_frequency_tables: n must be >= 2");
    if (!(eps > 0)) throw std::invalid_argument("make_frequency_tables: eps must be > 0");
    FrequencyTables t;
    t.lap_symbol = dft_laplacian_symbol(n);
    t.radial.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        const double di = std::min(i, n - i);
        for (int j = 0; j < n; ++j) {
            const double dj = std::min(j, n - j);
            t.radial[static_cast<std::size_t>(i) * n + j] =
                std::sqrt(di * di + dj * dj + eps * eps);
        }
    }
    return t;
}

PrecondSpec make_precond(PrecondKind kind, double alpha, double beta, double eps) {
    if (alpha < 0 || beta < 0 || !(alpha + beta > 0))
        throw std::invalid_argument("make_precond: need alpha, beta >= 0 with alpha + beta > 0");
    if (!(eps > 0)) throw std::invalid_argument("make_precond: eps must be > 0");
    PrecondSpec spec;
    spec.kind = kind;
    spec.alpha = alpha;
    spec.beta = beta;
    spec.eps = eps;
    return spec;
}

double richardson_constant(
    const std::function<std::vector<double>(const std::vector<double>&)>& op_T,
    std::size_t dim, int iters, std::uint64_t seed) {
    return 1.05 * power_iteration(op_T, dim, iters, seed);
}

Image apply_quadratic_operator(const RadonOp& op, double alpha, double beta, const Image& u) {
    Image out(u.geom);
    if (alpha != 0.0) {
        out = adjoint(forward(u, op), op);
        out *= alpha;
    }
    if (beta != 0.0) {
        Image lap = laplacian_h(u);
        lap *= -beta;
        out += lap;
    }
    return out;
}

std::vector<double> impulse_kernel(const RadonOp& op) {
    const int n = op.image_geom.n;
    std::vector<double> raw = impulse_response(op);
    // transpose symmetrization of the raw response
    std::vector<double> k(raw.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            k[static_cast<std::size_t>(i) * n + j] =
                0.5 * (raw[static_cast<std::size_t>(i) * n + j] +
                       raw[static_cast<std::size_t>(j) * n + i]);
    return recenter_and_symmetrize(k, n, impulse_index(n));
}

std::vector<double> circulant_kernel(const RadonOp& op) {
    const int n = op.image_geom.n;
    std::vector<double> raw = impulse_response(op);
    const int q = impulse_index(n);
    const std::size_t p = raw.size();
    const std::size_t shift = static_cast<std::size_t>(q) * n + q;
    std::vector<double> recentered(p);
    for (std::size_t i = 0; i < p; ++i) recentered[i] = raw[(i + shift) % p];
    return circ_symmetrize(std::move(recentered));
}

PrecondSpec calibrate(PrecondSpec spec, const RadonOp& op, int iters, std::uint64_t seed) {
    const int n = op.image_geom.n;
    const double h = op.image_geom.h;
    const std::size_t dim = static_cast<std::size_t>(n) * n;
    spec.n = n;
    spec.h = h;
    spec.beta_lap = spec.beta / (h * h);
    spec.tables = make_frequency_tables(n, spec.eps);

    auto apply_RR = [&op](const std::vector<double>& x) {
        Image u(op.image_geom);
        u.data = x;
        return adjoint(forward(u, op), op).data;
    };
    auto apply_T = [&](const std::vector<double>& x) {
        Image u(op.image_geom);
        u.data = x;
        return apply_quadratic_operator(op, spec.alpha, spec.beta, u).data;
    };

    switch (spec.kind) {
        case PrecondKind::Richardson: {
            spec.richardson_m = richardson_constant(apply_T, dim, iters, seed);
            spec.c = std::max(spec.richardson_m, 1.0);
            break;
        }
        case PrecondKind::InverseNorm: {
            const auto& radial = spec.tables.radial;
            auto apply_M1 = [&](const std::vector<double>& x) {
                std::vector<double> inv(radial.size());
                for (std::size_t i = 0; i < radial.size(); ++i) inv[i] = 1.0 / radial[i];
                return fft::apply_symbol(x, inv, n);
            };
            auto solve_M1 = [&](const std::vector<double>& x) {
                return fft::apply_symbol(x, radial, n);
            };
            const double lam =
                generalized_power_iteration(apply_RR, apply_M1, solve_M1, dim, iters, seed);
            spec.c = std::max(1.05 * lam, 1.0);
            break;
        }
        case PrecondKind::Impulse: {
            std::vector<double> kernel = impulse_kernel(op);
            spec.impulse_symbol = real_symbol_2d(kernel, n);
            // R*R smooths, so the response spectrum is positive for sane
            // geometries; the floor keeps the convolution operator positive
            // definite under severe angular undersampling.
            double peak = 0.0;
            for (double s : spec.impulse_symbol) peak = std::max(peak, s);
            if (!(peak > 0)) throw std::runtime_error("calibrate: impulse response vanished");
            for (double& s : spec.impulse_symbol) s = std::max(s, 1e-8 * peak);
            auto apply_M1 = [&](const std::vector<double>& x) {
                return fft::apply_symbol(x, spec.impulse_symbol, n);
            };
            std::vector<double> inv_symbol(spec.impulse_symbol.size());
            for (std::size_t i = 0; i < inv_symbol.size(); ++i)
                inv_symbol[i] = 1.0 / spec.impulse_symbol[i];
            auto solve_M1 = [&](const std::vector<double>& x) {
                return fft::apply_symbol(x, inv_symbol, n);
            };
            const double lam =
                generalized_power_iteration(apply_RR, apply_M1, solve_M1, dim, iters, seed);
            spec.c = std::max(1.05 * lam, 1.0);
            break;
        }
        case PrecondKind::Circulant: {
            std::vector<double> k = circulant_kernel(op);
            // companion kernel from the PSD Laplacian -laplacian_h, built the same way
            Image delta(op.image_geom);
            const int q = impulse_index(n);
            delta.at(q, q) = 1.0;
            Image lap = laplacian_h(delta);
            lap *= -1.0;
            const std::size_t shift = static_cast<std::size_t>(q) * n + q;
            std::vector<double> lap_rec(dim);
            for (std::size_t i = 0; i < dim; ++i) lap_rec[i] = lap.data[(i + shift) % dim];
            std::vector<double> lapk = circ_symmetrize(std::move(lap_rec));

            std::vector<double> combined(dim);
            for (std::size_t i = 0; i < dim; ++i)
                combined[i] = spec.alpha * k[i] + spec.beta * lapk[i];
            spec.circ_symbol = real_symbol_1d(combined);
            auto inv_symbol = divide_symbol(spec.circ_symbol);
            auto apply_M = [&](const std::vector<double>& x) {
                fft::cvec buf(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i];
                auto s = fft::dft1(buf);
                for (std::size_t i = 0; i < s.size(); ++i) s[i] *= spec.circ_symbol[i];
                auto b = fft::idft1(s);
                std::vector<double> out(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) out[i] = b[i].real();
                return out;
            };
            auto solve_M = [&](const std::vector<double>& x) {
                fft::cvec buf(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i];
                auto s = fft::dft1(buf);
                for (std::size_t i = 0; i < s.size(); ++i) s[i] *= inv_symbol[i];
                auto b = fft::idft1(s);
                std::vector<double> out(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) out[i] = b[i].real();
                return out;
            };
            const double lam =
                generalized_power_iteration(apply_T, apply_M, solve_M, dim, iters, seed);
            spec.c = std::max(1.05 * lam, 1.0);
            break;
        }
    }
    spec.calibrated = true;
    return spec;
}

Image inv_norm_apply(const Image& y, const PrecondSpec& spec, const FrequencyTables& tables) {
    require_calibrated(spec);
    const int n = y.geom.n;
    std::vector<double> mult(tables.radial.size());
    for (std::size_t i = 0; i < mult.size(); ++i) {
        const double r = tables.radial[i];
        mult[i] = r / (spec.alpha * spec.c + spec.beta_lap * tables.lap_symbol[i] * r);
    }
    Image out(y.geom);
    out.data = fft::apply_symbol(y.data, mult, n);
    return out;
}

Image nonneg_variant_apply(const Image& y, const PrecondSpec& spec,
                           const FrequencyTables& tables, double sigma, double tau, double c) {
    const int n = y.geom.n;
    const double inv_h2 = 1.0 / (spec.h * spec.h);
    std::vector<double> mult(tables.radial.size());
    for (std::size_t i = 0; i < mult.size(); ++i) {
        const double r = tables.radial[i];
        mult[i] = r / (r + c * sigma * sigma +
                       sigma * sigma * tau * tau * inv_h2 * tables.lap_symbol[i] * r);
    }
    Image out(y.geom);
    out.data = fft::apply_symbol(y.data, mult, n);
    return out;
}

Image apply_precond_inv(const PrecondSpec& spec, const Image& y) {
    require_calibrated(spec);
    if (y.geom.n != spec.n) throw std::invalid_argument("apply_precond_inv: geometry mismatch");
    switch (spec.kind) {
        case PrecondKind::Richardson: {
            Image out = y;
            out *= 1.0 / spec.richardson_m;
            return out;
        }
        case PrecondKind::InverseNorm:
            return inv_norm_apply(y, spec, spec.tables);
        case PrecondKind::Impulse: {
            std::vector<double> mult(spec.impulse_symbol.size());
            for (std::size_t i = 0; i < mult.size(); ++i)
                mult[i] = 1.0 / (spec.alpha * spec.c * spec.impulse_symbol[i] +
                                 spec.beta_lap * spec.tables.lap_symbol[i]);
            Image out(y.geom);
            out.data = fft::apply_symbol(y.data, mult, spec.n);
            return out;
        }
        case PrecondKind::Circulant: {
            fft::cvec buf(y.data.size());
            for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = y.data[i];
            auto s = fft::dft1(buf);
            for (std::size_t i = 0; i < s.size(); ++i) s[i] /= spec.c * spec.circ_symbol[i];
            auto b = fft::idft1(s);
            Image out(y.geom);
            for (std::size_t i = 0; i < b.size(); ++i) out.data[i] = b[i].real();
            return out;
        }
    }
    throw std::logic_error("apply_precond_inv: unknown kind");
}

Image apply_precond_fwd(const PrecondSpec& spec, const Image& y) {
    require_calibrated(spec);
    if (y.geom.n != spec.n) throw std::invalid_argument("apply_precond_fwd: geometry mismatch");
    switch (spec.kind) {
        case PrecondKind::Richardson: {
            Image out = y;
            out *= spec.richardson_m;
            return out;
        }
        case PrecondKind::InverseNorm: {
            std::vector<double> mult(spec.tables.radial.size());
            for (std::size_t i = 0; i < mult.size(); ++i)
                mult[i] = spec.alpha * spec.c / spec.tables.radial[i] +
                          spec.beta_lap * spec.tables.lap_symbol[i];
            Image out(y.geom);
            out.data = fft::apply_symbol(y.data, mult, spec.n);
            return out;
        }
        case PrecondKind::Impulse: {
            std::vector<double> mult(spec.impulse_symbol.size());
            for (std::size_t i = 0; i < mult.size(); ++i)
                mult[i] = spec.alpha * spec.c * spec.impulse_symbol[i] +
                          spec.beta_lap * spec.tables.lap_symbol[i];
            Image out(y.geom);
            out.data = fft::apply_symbol(y.data, mult, spec.n);
            return out;
        }
        case PrecondKind::Circulant: {
            fft::cvec buf(y.data.size());
            for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = y.data[i];
            auto s = fft::dft1(buf);
            for (std::size_t i = 0; i < s.size(); ++i) s[i] *= spec.c * spec.circ_symbol[i];
            auto b = fft::idft1(s);
            Image out(y.geom);
            for (std::size_t i = 0; i < b.size(); ++i) out.data[i] = b[i].real();
            return out;
        }
    }
    throw std::logic_error("apply_precond_fwd: unknown kind");
}

}  // namespace tvct
