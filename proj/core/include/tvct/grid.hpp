#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tvct {

/// Square pixel grid centered around the origin. Pixel (i,j) (1-based in
/// the documentation, 0-based in code) sits at
///   x = h*(i - (n-1)/2),  y = h*(j - (n-1)/2),   i,j = 0..n-1,
/// so that i indexes the x-direction and j the y-direction.
struct ImageGeom {
    int n = 0;       // pixels per side
    double h = 1.0;  // grid spacing

    ImageGeom() = default;
    ImageGeom(int n_, double h_) : n(n_), h(h_) {
        if (n < 2) throw std::invalid_argument("ImageGeom: n must be >= 2");
        if (!(h > 0)) throw std::invalid_argument("ImageGeom: h must be > 0");
    }

    double x(int i) const { return h * (i - 0.5 * (n - 1)); }
    double y(int j) const { return h * (j - 0.5 * (n - 1)); }

    friend bool operator==(const ImageGeom& a, const ImageGeom& b) {
        return a.n == b.n && a.h == b.h;
    }
};

/// Parallel-beam sinogram geometry: N angles, M_det evenly spaced detector
/// bins of width delta_s. M_det is even and the center of rotation lies
/// exactly between the two middle bins, i.e. bin k (0-based) is centered at
///   s_k = delta_s * (k - (M_det-1)/2).
struct SinoGeom {
    std::vector<double> angles;  // radians, strictly increasing, span < pi
    int m_det = 0;
    double delta_s = 1.0;

    SinoGeom() = default;
    SinoGeom(std::vector<double> angles_, int m_det_, double delta_s_)
        : angles(std::move(angles_)), m_det(m_det_), delta_s(delta_s_) {
        if (angles.empty()) throw std::invalid_argument("SinoGeom: need at least one angle");
        if (m_det < 2 || m_det % 2 != 0)
            throw std::invalid_argument("SinoGeom: m_det must be even and >= 2");
        if (!(delta_s > 0)) throw std::invalid_argument("SinoGeom: delta_s must be > 0");
        for (std::size_t l = 1; l < angles.size(); ++l)
            if (!(angles[l] > angles[l - 1]))
                throw std::invalid_argument("SinoGeom: angles must be strictly increasing");
        if (angles.back() - angles.front() >= 3.15)
            throw std::invalid_argument("SinoGeom: angles must lie within one half-turn");
    }

    int n_angles() const { return static_cast<int>(angles.size()); }
    double s(int k) const { return delta_s * (k - 0.5 * (m_det - 1)); }

    friend bool operator==(const SinoGeom& a, const SinoGeom& b) {
        return a.angles == b.angles && a.m_det == b.m_det && a.delta_s == b.delta_s;
    }
};

/// N angles uniformly covering [0, pi).
SinoGeom uniform_sino_geom(int n_angles, int m_det, double delta_s);

/// n x n image of attenuation values.
struct Image {
    ImageGeom geom;
    std::vector<double> data;  // row-major, index i*n + j

    Image() = default;
    explicit Image(const ImageGeom& g) : geom(g), data(static_cast<std::size_t>(g.n) * g.n, 0.0) {}

    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * geom.n + j]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * geom.n + j]; }
    std::size_t size() const { return data.size(); }

    Image& operator+=(const Image& o);
    Image& operator-=(const Image& o);
    Image& operator*=(double a);
};

/// N x M_det array of line-integral data.
struct Sinogram {
    SinoGeom geom;
    std::vector<double> data;  // row-major, index l*m_det + k

    Sinogram() = default;
    explicit Sinogram(const SinoGeom& g)
        : geom(g), data(static_cast<std::size_t>(g.n_angles()) * g.m_det, 0.0) {}

    double& at(int l, int k) { return data[static_cast<std::size_t>(l) * geom.m_det + k]; }
    double at(int l, int k) const { return data[static_cast<std::size_t>(l) * geom.m_det + k]; }
    std::size_t size() const { return data.size(); }

    Sinogram& operator+=(const Sinogram& o);
    Sinogram& operator-=(const Sinogram& o);
    Sinogram& operator*=(double a);
};

/// Per-pixel 2-vector field; range of grad_h, domain of div_h.
struct GradientField {
    ImageGeom geom;
    std::vector<double> x, y;  // each row-major n*n

    GradientField() = default;
    explicit GradientField(const ImageGeom& g)
        : geom(g),
          x(static_cast<std::size_t>(g.n) * g.n, 0.0),
          y(static_cast<std::size_t>(g.n) * g.n, 0.0) {}

    double& at_x(int i, int j) { return x[static_cast<std::size_t>(i) * geom.n + j]; }
    double at_x(int i, int j) const { return x[static_cast<std::size_t>(i) * geom.n + j]; }
    double& at_y(int i, int j) { return y[static_cast<std::size_t>(i) * geom.n + j]; }
    double at_y(int i, int j) const { return y[static_cast<std::size_t>(i) * geom.n + j]; }

    GradientField& operator+=(const GradientField& o);
    GradientField& operator-=(const GradientField& o);
    GradientField& operator*=(double a);
};

/// Boolean sinogram-shaped mask D0 plus per-entry thresholds C.
/// Threshold values are meaningful only where the mask is set.
struct ConstraintMask {
    SinoGeom geom;
    std::vector<std::uint8_t> mask;
    std::vector<double> thresholds;

    ConstraintMask() = default;
    explicit ConstraintMask(const SinoGeom& g)
        : geom(g),
          mask(static_cast<std::size_t>(g.n_angles()) * g.m_det, 0),
          thresholds(static_cast<std::size_t>(g.n_angles()) * g.m_det, 0.0) {}

    bool in_mask(int l, int k) const {
        return mask[static_cast<std::size_t>(l) * geom.m_det + k] != 0;
    }
    std::size_t count() const;
    bool empty() const { return count() == 0; }
    double max_threshold() const;
};

double inner_image(const Image& a, const Image& b);
double inner_sino(const Sinogram& a, const Sinogram& b);
double inner_grad(const GradientField& p, const GradientField& q);

double norm_image(const Image& a);
double norm_sino(const Sinogram& a);
double norm_grad(const GradientField& p);

/// Isotropic one-norm: sum over pixels of the Euclidean length of the
/// per-pixel 2-vector; the discrete TV value of a gradient field.
double one_norm_iso(const GradientField& q);

}  // namespace tvct
