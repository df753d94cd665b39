#include "tvct/radon.hpp"

#include <cmath>
#include <random>

namespace tvct {

ProjectedBin project_offset(int i, int j, int l, const RadonOp& op) {
    const ImageGeom& ig = op.image_geom;
    const SinoGeom& sg = op.sino_geom;
    if (i < 0 || i >= ig.n || j < 0 || j >= ig.n || l < 0 || l >= sg.n_angles())
        throw std::invalid_argument("project_offset: index out of range");
    const double s = ig.x(i) * std::cos(sg.angles[l]) + ig.y(j) * std::sin(sg.angles[l]);
    const double sigma = s / sg.delta_s - 0.5;
    const double fl = std::floor(sigma);
    ProjectedBin pb;
    pb.lower = static_cast<int>(fl) + sg.m_det / 2;
    pb.w_lo = 1.0 - (sigma - fl);
    pb.off_detector = (pb.lower + 1 < 0) || (pb.lower > sg.m_det - 1);
    return pb;
}

Sinogram forward(const Image& u, const RadonOp& op) {
    if (!(u.geom == op.image_geom)) throw std::invalid_argument("forward: geometry mismatch");
    const int n = u.geom.n;
    const SinoGeom& sg = op.sino_geom;
    const int m = sg.m_det;
    Sinogram v(sg);
    for (int l = 0; l < sg.n_angles(); ++l) {
        const double c = std::cos(sg.angles[l]) / sg.delta_s;
        const double s = std::sin(sg.angles[l]) / sg.delta_s;
        double* row = v.data.data() + static_cast<std::size_t>(l) * m;
        for (int i = 0; i < n; ++i) {
            const double sx = u.geom.x(i) * c - 0.5;
            for (int j = 0; j < n; ++j) {
                const double sigma = sx + u.geom.y(j) * s;
                const double fl = std::floor(sigma);
                const int k = static_cast<int>(fl) + m / 2;
                const double w_hi = sigma - fl;
                const double val = u.at(i, j);
                if (k >= 0 && k < m) row[k] += (1.0 - w_hi) * val;
                if (k + 1 >= 0 && k + 1 < m) row[k + 1] += w_hi * val;
            }
        }
    }
    if (op.scale != 1.0) v *= op.scale;
    return v;
}

Image adjoint(const Sinogram& v, const RadonOp& op) {
    if (!(v.geom == op.sino_geom)) throw std::invalid_argument("adjoint: geometry mismatch");
    const int n = op.image_geom.n;
    const int m = v.geom.m_det;
    Image u(op.image_geom);
    for (int l = 0; l < v.geom.n_angles(); ++l) {
        const double c = std::cos(v.geom.angles[l]) / v.geom.delta_s;
        const double s = std::sin(v.geom.angles[l]) / v.geom.delta_s;
        const double* row = v.data.data() + static_cast<std::size_t>(l) * m;
        for (int i = 0; i < n; ++i) {
            const double sx = op.image_geom.x(i) * c - 0.5;
            for (int j = 0; j < n; ++j) {
                const double sigma = sx + op.image_geom.y(j) * s;
                const double fl = std::floor(sigma);
                const int k = static_cast<int>(fl) + m / 2;
                const double w_hi = sigma - fl;
                double acc = 0.0;
                if (k >= 0 && k < m) acc += (1.0 - w_hi) * row[k];
                if (k + 1 >= 0 && k + 1 < m) acc += w_hi * row[k + 1];
                u.at(i, j) += acc;
            }
        }
    }
    if (op.scale != 1.0) u *= op.scale;
    return u;
}

double norm_bound(const RadonOp& op) {
    if (!(op.sino_geom.delta_s < op.image_geom.h * std::sqrt(2.0)))
        throw std::invalid_argument("norm_bound: bound inapplicable (requires delta_s < h*sqrt(2))");
    const double n = op.image_geom.n;
    const double N = op.sino_geom.n_angles();
    return std::sqrt(2.0 * N * (std::sqrt(2.0) * n + 1.0)) * op.scale;
}

double power_iteration(const std::function<std::vector<double>(const std::vector<double>&)>& apply,
                       std::size_t dim, int iters, std::uint64_t seed) {
    if (iters < 1) throw std::invalid_argument("power_iteration: iters must be >= 1");
    if (dim == 0) throw std::invalid_argument("power_iteration: empty operator");
    std::vector<double> x(dim);
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (auto& xi : x) xi = dist(rng);
        double nrm = 0.0;
        for (double xi : x) nrm += xi * xi;
        if (nrm > 0.0) break;
        if (attempt == 1) throw std::runtime_error("power_iteration: zero start vector");
    }
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        double nrm = 0.0;
        for (double xi : x) nrm += xi * xi;
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) return lambda;  // operator annihilated the iterate
        for (auto& xi : x) xi /= nrm;
        std::vector<double> ax = apply(x);
        double dot = 0.0;
        for (std::size_t i = 0; i < dim; ++i) dot += x[i] * ax[i];
        lambda = dot;
        x = std::move(ax);
    }
    return lambda;
}

double estimate_norm(const RadonOp& op, int iters, std::uint64_t seed) {
    const std::size_t dim = static_cast<std::size_t>(op.image_geom.n) * op.image_geom.n;
    auto normal_op = [&op](const std::vector<double>& x) {
        Image u(op.image_geom);
        u.data = x;
        return adjoint(forward(u, op), op).data;
    };
    const double lam = power_iteration(normal_op, dim, iters, seed);
    return std::sqrt(std::max(lam, 0.0));
}

RescaledOp rescale_to_unit(const RadonOp& op) {
    const double beta = norm_bound(op);
    RescaledOp r;
    r.op = op;
    r.op.scale = op.scale / beta;
    r.beta = beta;
    return r;
}

}  // namespace tvct
