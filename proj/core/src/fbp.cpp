#include "tvct/fbp.hpp"

#include <cmath>
#include <numbers>

#include "tvct/fft.hpp"

namespace tvct {

namespace {

int next_pow2(int v) {
    int p = 1;
    while (p < v) p *= 2;
    return p;
}

}  // namespace

Sinogram filter_sinogram(const Sinogram& v, FilterKind kind) {
    const int m = v.geom.m_det;
    const int len = 2 * next_pow2(m);
    const double d_omega = 2.0 * std::numbers::pi / (len * v.geom.delta_s);
    const double omega_max = std::numbers::pi / v.geom.delta_s;

    std::vector<double> mult(static_cast<std::size_t>(len));
    for (int idx = 0; idx < len; ++idx) {
        const int tw = (idx <= len / 2) ? idx : idx - len;
        const double omega = std::abs(tw) * d_omega;
        double window = 1.0;
        if (kind == FilterKind::SheppLogan && omega > 0.0) {
            const double arg = omega * std::numbers::pi / (2.0 * omega_max);
            window = std::sin(arg) / arg;
        }
        mult[idx] = omega / (2.0 * std::numbers::pi) * window;
    }

    Sinogram out(v.geom);
    fft::cvec row(static_cast<std::size_t>(len));
    for (int l = 0; l < v.geom.n_angles(); ++l) {
        for (int idx = 0; idx < len; ++idx)
            row[idx] = (idx < m) ? v.at(l, idx) : 0.0;
        fft::cvec spec = fft::dft1(row);
        for (int idx = 0; idx < len; ++idx) spec[idx] *= mult[idx];
        fft::cvec back = fft::idft1(spec);
        for (int k = 0; k < m; ++k) out.at(l, k) = back[k].real();
    }
    return out;
}

Image fbp_reconstruct(const Sinogram& v, const RadonOp& op, FilterKind kind) {
    if (!(v.geom == op.sino_geom)) throw std::invalid_argument("fbp_reconstruct: geometry mismatch");
    Image u = adjoint(filter_sinogram(v, kind), op);
    const double h = op.image_geom.h;
    u *= std::numbers::pi / v.geom.n_angles() * h * h / v.geom.delta_s;
    return u;
}

}  // namespace tvct
