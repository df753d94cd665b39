#pragma once

#include <cstdint>
#include <optional>

#include "tvct/grid.hpp"
#include "tvct/radon.hpp"

namespace tvct {

/// One additive ellipse in the unit square [-1,1]^2: semi-axes (a,b),
/// center (x0,y0), rotation phi in degrees, additive value.
struct PhantomEllipse {
    double value, a, b, x0, y0, phi_deg;
};

/// The ten-ellipse head phantom parameter set (contrast-enhanced variant);
/// tissue values stay within [0,1].
const std::vector<PhantomEllipse>& shepp_logan_ellipses();

/// Dense inclusion overwriting a region of the phantom. Coordinates in the
/// same unit square as the ellipses.
struct MetalRegion {
    bool is_ellipse = false;
    double cx = 0.3, cy = -0.25;
    double half_w = 0.0625, half_h = 0.0625;  // side n/16 on the default grid
    double value = 3.0;
};

struct PhantomSpec {
    int n = 64;
    double h = 1.0;
    std::vector<PhantomEllipse> ellipses = shepp_logan_ellipses();
    std::optional<MetalRegion> metal;
};

/// Sum of indicator ellipses on an n x n grid mapped onto [-1,1]^2.
/// Does not apply the metal inclusion; see insert_metal.
Image shepp_logan(const PhantomSpec& spec);

/// Overwrite the metal region with its value. Throws when the region does
/// not fit the grid.
Image insert_metal(const Image& u, const MetalRegion& region);

/// Pixel indicator (1 inside) of the metal region; the exclusion mask for
/// artifact metrics.
std::vector<std::uint8_t> metal_region_mask(const MetalRegion& region, const ImageGeom& geom);

struct CappedSinogram {
    Sinogram data;
    ConstraintMask mask;
};

/// Replace entries above `cap` by cap; the mask marks replaced entries and
/// carries thresholds C = c_fraction * capped value there.
CappedSinogram cap_sinogram(const Sinogram& v, double cap, double c_fraction = 0.8);

/// Additive i.i.d. Gaussian noise with standard deviation pct * std(v).
Sinogram add_noise(const Sinogram& v, double pct, std::uint64_t seed);

struct MetalMaskEstimate {
    ConstraintMask mask;
    bool empty_detection = false;
};

/// Metal-trace heuristic: FBP reconstruct, binarize at image_threshold,
/// dilate by dilation_px (square element), forward-project the binary
/// image, mark sinogram entries with projection > 0.5 and set thresholds to
/// c_fraction * v there.
MetalMaskEstimate estimate_metal_mask(const Sinogram& v, const RadonOp& op,
                                      double image_threshold, int dilation_px,
                                      double c_fraction = 0.8);

/// RMSE over pixels outside the excluded region (empty exclude = all pixels).
double masked_rmse(const Image& a, const Image& b, const std::vector<std::uint8_t>& exclude);

}  // namespace tvct
