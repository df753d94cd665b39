#pragma once

#include <complex>
#include <vector>

namespace tvct::fft {

using cvec = std::vector<std::complex<double>>;

/// Unnormalized forward 2-D DFT of real row-major n x n data.
cvec dft2(const std::vector<double>& u, int n);

/// Inverse 2-D DFT (normalized by 1/n^2); returns the real part.
std::vector<double> idft2(const cvec& spectrum, int n);

/// Unnormalized forward / normalized inverse 1-D DFT, any length.
cvec dft1(const cvec& v);
cvec idft1(const cvec& v);

/// Real part of idft2(dft2(u) .* symbol) for a real n x n symbol table.
/// One round trip through the frequency domain; the workhorse behind the
/// FFT preconditioners and the periodic Laplacian.
std::vector<double> apply_symbol(const std::vector<double>& u,
                                 const std::vector<double>& symbol, int n);

}  // namespace tvct::fft
