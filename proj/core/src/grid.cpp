#include "tvct/grid.hpp"

#include <cmath>
#include <numbers>

namespace tvct {

namespace {

void check_same(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("geometry mismatch");
}

}  // namespace

SinoGeom uniform_sino_geom(int n_angles, int m_det, double delta_s) {
    if (n_angles < 1) throw std::invalid_argument("uniform_sino_geom: n_angles must be >= 1");
    std::vector<double> angles(static_cast<std::size_t>(n_angles));
    for (int l = 0; l < n_angles; ++l) angles[l] = std::numbers::pi * l / n_angles;
    return SinoGeom(std::move(angles), m_det, delta_s);
}

Image& Image::operator+=(const Image& o) {
    check_same(data.size(), o.data.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
}
Image& Image::operator-=(const Image& o) {
    check_same(data.size(), o.data.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
    return *this;
}
Image& Image::operator*=(double a) {
    for (double& v : data) v *= a;
    return *this;
}

Sinogram& Sinogram::operator+=(const Sinogram& o) {
    check_same(data.size(), o.data.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
    return *this;
}
Sinogram& Sinogram::operator-=(const Sinogram& o) {
    check_same(data.size(), o.data.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
    return *this;
}
Sinogram& Sinogram::operator*=(double a) {
    for (double& v : data) v *= a;
    return *this;
}

GradientField& GradientField::operator+=(const GradientField& o) {
    check_same(x.size(), o.x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += o.x[i];
        y[i] += o.y[i];
    }
    return *this;
}
GradientField& GradientField::operator-=(const GradientField& o) {
    check_same(x.size(), o.x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] -= o.x[i];
        y[i] -= o.y[i];
    }
    return *this;
}
GradientField& GradientField::operator*=(double a) {
    for (double& v : x) v *= a;
    for (double& v : y) v *= a;
    return *this;
}

std::size_t ConstraintMask::count() const {
    std::size_t c = 0;
    for (auto m : mask) c += (m != 0);
    return c;
}

double ConstraintMask::max_threshold() const {
    double m = 0.0;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) m = std::max(m, thresholds[i]);
    return m;
}

double inner_image(const Image& a, const Image& b) {
    if (!(a.geom == b.geom)) throw std::invalid_argument("inner_image: geometry mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

double inner_sino(const Sinogram& a, const Sinogram& b) {
    if (!(a.geom == b.geom)) throw std::invalid_argument("inner_sino: geometry mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

double inner_grad(const GradientField& p, const GradientField& q) {
    if (!(p.geom == q.geom)) throw std::invalid_argument("inner_grad: geometry mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.x.size(); ++i) s += p.x[i] * q.x[i] + p.y[i] * q.y[i];
    return s;
}

double norm_image(const Image& a) { return std::sqrt(inner_image(a, a)); }
double norm_sino(const Sinogram& a) { return std::sqrt(inner_sino(a, a)); }
double norm_grad(const GradientField& p) { return std::sqrt(inner_grad(p, p)); }

double one_norm_iso(const GradientField& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.x.size(); ++i) s += std::hypot(q.x[i], q.y[i]);
    return s;
}

}  // namespace tvct
