#pragma once

#include "tvct/grid.hpp"
#include "tvct/radon.hpp"

namespace tvct {

enum class PrecondKind { Richardson, InverseNorm, Impulse, Circulant };

/// Per-geometry frequency tables:
///   lap_symbol   DFT symbol of the periodic Laplacian stencil,
///   radial       smoothed norm ||x||_eps = sqrt(d^2 + eps^2) with the
///                wrapped index distance d, strictly positive (eps at DC).
struct FrequencyTables {
    std::vector<double> lap_symbol;
    std::vector<double> radial;
};

FrequencyTables make_frequency_tables(int n, double eps);

/// One preconditioner M for the operator T = alpha R*R - beta Laplacian.
/// Construct with make_precond, then calibrate against a concrete RadonOp
/// before applying. Kernels and tables are computed once and cached here.
struct PrecondSpec {
    PrecondKind kind = PrecondKind::Richardson;
    double alpha = 1.0;
    double beta = 1.0;
    double eps = 1.0;
    double c = 0.0;  // calibration constant, >= 1 once calibrated
    bool calibrated = false;

    int n = 0;
    double h = 1.0;
    double beta_lap = 0.0;  // beta / h^2, the weight in front of the periodic symbol
    FrequencyTables tables;
    std::vector<double> impulse_symbol;   // n x n, real DFT of the impulse kernel
    std::vector<double> circ_symbol;      // n^2, real 1-D DFT of alpha*k + beta*lap kernel
    double richardson_m = 0.0;
};

PrecondSpec make_precond(PrecondKind kind, double alpha, double beta, double eps = 1.0);

/// Richardson constant m = 1.05 * power-iteration estimate of ||T|| for a
/// generic symmetric PSD operator.
double richardson_constant(
    const std::function<std::vector<double>(const std::vector<double>&)>& op_T,
    std::size_t dim, int iters = 200, std::uint64_t seed = 11);

/// alpha * R*R u - beta * laplacian_h(u); the operator the preconditioners
/// approximate.
Image apply_quadratic_operator(const RadonOp& op, double alpha, double beta, const Image& u);

/// Fill in the calibration constant c (and kernels) so that M - T >= 0 holds
/// for T = alpha R*R - beta Laplacian of the given operator:
/// inverse-norm and impulse calibrate c against R*R via power iteration on
/// Mtilde^{-1} R*R, the circulant kind against the whole T, Richardson sets
/// m = 1.05 ||T||.
PrecondSpec calibrate(PrecondSpec spec, const RadonOp& op, int iters = 200,
                      std::uint64_t seed = 11);

/// y -> M^{-1} y for a calibrated spec.
Image apply_precond_inv(const PrecondSpec& spec, const Image& y);

/// y -> M y (the implied forward operator); used by feasibility checks.
Image apply_precond_fwd(const PrecondSpec& spec, const Image& y);

/// Inverse-norm preconditioner solve
///   u = F^{-1}( F(y) ||x||_eps / (alpha c + beta F(kappa) ||x||_eps) ).
Image inv_norm_apply(const Image& y, const PrecondSpec& spec, const FrequencyTables& tables);

/// Symmetrized impulse response of R*R, recentered so the peak sits at index
/// (0,0) and circularly point-symmetric (real DFT). n even uses the lower
/// right of the middle four pixels as impulse site; n odd the center pixel.
std::vector<double> impulse_kernel(const RadonOp& op);

/// Length-n^2 circulant kernel for R*R: flattened impulse response,
/// recentered and symmetrized k_i = (k_i + k_{(n^2 - i) mod n^2})/2.
std::vector<double> circulant_kernel(const RadonOp& op);

/// Identity-augmented inverse-norm solve for T = id + sigma^2 K*K:
///   u = F^{-1}( F(y) ||x|| / (||x|| + c sigma^2 + (sigma tau)^2 F(kappa) ||x||) ).
Image nonneg_variant_apply(const Image& y, const PrecondSpec& spec,
                           const FrequencyTables& tables, double sigma, double tau, double c);

}  // namespace tvct
