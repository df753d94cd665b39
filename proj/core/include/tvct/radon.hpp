#pragma once

#include <functional>

#include "tvct/grid.hpp"

namespace tvct {

/// Matrix-free discrete Radon transform pairing one image geometry with one
/// sinogram geometry. `scale` multiplies both forward and adjoint, which is
/// how operator rescaling by 1/beta is realized.
struct RadonOp {
    ImageGeom image_geom;
    SinoGeom sino_geom;
    double scale = 1.0;

    RadonOp() = default;
    RadonOp(const ImageGeom& ig, const SinoGeom& sg, double scale_ = 1.0)
        : image_geom(ig), sino_geom(sg), scale(scale_) {
        if (!(scale > 0)) throw std::invalid_argument("RadonOp: scale must be > 0");
    }
};

/// Where pixel (i,j) projects on the detector at angle index l.
/// `lower` is the 0-based index of the lower of the two bins sharing the
/// pixel's mass and `w_lo` its interpolation weight; the neighbour
/// `lower+1` receives 1 - w_lo. With sigma = s/delta_s - 1/2 the lower bin
/// is floor(sigma) + m_det/2, which places s = 0 exactly between the two
/// middle bins, and w_lo = 1 - (sigma - floor(sigma)) so that
/// interpolating linear data reproduces it exactly.
/// `off_detector` is set when neither bin exists; the entry contributes
/// nothing (forward) and receives nothing (adjoint).
struct ProjectedBin {
    int lower = 0;
    double w_lo = 0.0;
    bool off_detector = false;
};

ProjectedBin project_offset(int i, int j, int l, const RadonOp& op);

/// Splatting forward projection: each pixel's value is split between the
/// two nearest bins per angle. Conserves per-angle mass when no pixel
/// projects off the detector.
Sinogram forward(const Image& u, const RadonOp& op);

/// Interpolating backprojection; the exact numerical adjoint of forward.
Image adjoint(const Sinogram& v, const RadonOp& op);

/// Norm bound sqrt(2 N (sqrt(2) n + 1)) * scale, valid for delta_s < h*sqrt(2).
/// Throws "bound inapplicable" otherwise.
double norm_bound(const RadonOp& op);

/// Largest-eigenvalue estimate of a symmetric PSD operator on R^dim by
/// power iteration with a seeded random start. The returned Rayleigh
/// quotient is nondecreasing in the iteration count.
double power_iteration(const std::function<std::vector<double>(const std::vector<double>&)>& apply,
                       std::size_t dim, int iters, std::uint64_t seed);

/// Power-iteration estimate of ||R_h|| (square root of the largest
/// eigenvalue of R*R).
double estimate_norm(const RadonOp& op, int iters = 100, std::uint64_t seed = 7);

struct RescaledOp {
    RadonOp op;
    double beta = 1.0;
};

/// Divide the operator scale by beta = norm_bound(op), so the rescaled
/// operator has norm at most 1. The caller is responsible for rescaling the
/// data by 1/beta, lambda by 1/beta^2 and constraint thresholds by 1/beta.
RescaledOp rescale_to_unit(const RadonOp& op);

}  // namespace tvct
