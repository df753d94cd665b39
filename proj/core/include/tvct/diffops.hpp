#pragma once

#include <array>

#include "tvct/grid.hpp"

namespace tvct {

/// 3x3 stencil of the periodic Laplacian convolution kernel kappa_Delta.
/// periodic_laplacian(u) computes the circular convolution u * kappa_Delta,
/// which is the positive semi-definite operator -Delta_p.
constexpr std::array<std::array<double, 3>, 3> kLaplacianKernel{
    {{0.0, -1.0, 0.0}, {-1.0, 4.0, -1.0}, {0.0, -1.0, 0.0}}};

/// Forward differences with spacing h, Neumann at the right/bottom boundary:
/// (d/dx u)_{i,j} = (u_{i+1,j} - u_{i,j})/h for i < n-1, zero at i = n-1,
/// and analogously in j.
GradientField grad_h(const Image& u);

/// Negative adjoint of grad_h: backward differences with Dirichlet boundary,
/// scaled by 1/h. Satisfies <grad_h u, p> = <u, -div_h p> exactly.
Image div_h(const GradientField& p);

/// Discrete Laplacian div_h(grad_h(u)). Sign convention: -laplacian_h is
/// positive semi-definite, so the solver operators use -beta * laplacian_h.
Image laplacian_h(const Image& u);

/// Circular 2-D convolution of u with kLaplacianKernel (i.e. -Delta_p u),
/// evaluated by DFT diagonalization with the symbol from
/// dft_laplacian_symbol. Positive semi-definite and dominates -laplacian_h.
Image periodic_laplacian(const Image& u);

/// DFT symbol of kappa_Delta on an n x n grid:
/// entry (i,j) = 4 sin^2(pi i / n) + 4 sin^2(pi j / n), zero only at (0,0).
std::vector<double> dft_laplacian_symbol(int n);

}  // namespace tvct
