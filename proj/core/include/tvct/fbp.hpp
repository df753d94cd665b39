#pragma once

#include "tvct/grid.hpp"
#include "tvct/radon.hpp"

namespace tvct {

enum class FilterKind { RamLak, SheppLogan };

/// Frequency-domain filtering of each angle's row: DFT along s, multiply by
/// |omega|/(2 pi) (Ram-Lak) or |omega| sinc(omega pi / (2 omega_max))/(2 pi)
/// (Shepp-Logan), inverse DFT, real part. Rows are zero-padded to twice the
/// next power of two to reduce circular wraparound. DC gain is zero.
Sinogram filter_sinogram(const Sinogram& v, FilterKind kind);

/// Filtered backprojection: adjoint(filter_sinogram(v)) with angular
/// quadrature weight pi/N over the half-turn, plus the h^2/delta_s factor
/// that converts the pixel-sum convention of the discrete operator back to
/// line-integral units (equal to 1 in the shipped h = delta_s = 1 setups).
Image fbp_reconstruct(const Sinogram& v, const RadonOp& op, FilterKind kind);

}  // namespace tvct
