#pragma once

#include "tvct/grid.hpp"

namespace tvct {

/// Fan-beam acquisition geometry: point source at distance d from the
/// center of rotation, source angles phis (one per exposure), signed fan
/// angles alphas (one per detector element, increasing).
struct FanGeom {
    double d = 1.0;
    std::vector<double> alphas;
    std::vector<double> phis;

    FanGeom() = default;
    FanGeom(double d_, std::vector<double> alphas_, std::vector<double> phis_)
        : d(d_), alphas(std::move(alphas_)), phis(std::move(phis_)) {
        if (!(d > 0)) throw std::invalid_argument("FanGeom: d must be > 0");
        if (alphas.size() < 2 || phis.size() < 2)
            throw std::invalid_argument("FanGeom: need at least 2 detectors and 2 exposures");
        for (std::size_t i = 1; i < alphas.size(); ++i)
            if (!(alphas[i] > alphas[i - 1]))
                throw std::invalid_argument("FanGeom: alphas must be strictly increasing");
        if (std::abs(alphas.front()) >= 1.5707963267948966 ||
            std::abs(alphas.back()) >= 1.5707963267948966)
            throw std::invalid_argument("FanGeom: |alpha| must be < pi/2");
        for (std::size_t i = 1; i < phis.size(); ++i)
            if (!(phis[i] > phis[i - 1]))
                throw std::invalid_argument("FanGeom: phis must be strictly increasing");
        if (phis.back() - phis.front() >= 2.0 * 3.14159265358979323846)
            throw std::invalid_argument("FanGeom: phis must span less than one full turn");
    }
};

struct FanCoords {
    double alpha = 0.0;
    double phi = 0.0;
};

/// Inverse beam-coordinate transform: the parallel beam (s, theta)
/// corresponds to the fan beam (arcsin(s/d), theta + pi/2 - arcsin(s/d)).
FanCoords fan_to_para_coords(double s, double theta, double d);

struct RebinResult {
    Sinogram sino;
    /// true where the target bin was interpolated from fan data; false
    /// entries were set to 0 (fan coverage did not reach them).
    std::vector<std::uint8_t> covered;
};

/// Resample fan-beam data (rows = exposures phi, columns = detectors alpha)
/// onto a parallel-beam grid by bilinear interpolation at the transformed
/// coordinates. phi interpolates periodically across the 2 pi seam; alpha
/// is never extrapolated, out-of-range targets are flagged uncovered.
RebinResult rebin_fan2para(const std::vector<double>& fan_data, const FanGeom& fan,
                           const SinoGeom& target);

}  // namespace tvct
