#pragma once

#include <array>
#include <optional>

#include "tvct/grid.hpp"

namespace tvct {

/// How the sinogram data enters the fidelity term and what happens on the
/// constrained region D0.
enum class FidelityKind {
    Soft,          // quadratic fit off D0, inequality constraint on D0
    Ignore,        // quadratic fit off D0, D0 dropped entirely
    FitEverywhere, // quadratic fit on all of D, plus the constraint on D0
    Hard,          // equality R u = u0 off D0, inequality on D0
    WeightedSoft,  // weighted quadratic fit off D0, inequality on D0
};

struct DataFidelityVariant {
    FidelityKind kind = FidelityKind::Soft;
    std::optional<Sinogram> weights;  // positive entries; WeightedSoft only

    static DataFidelityVariant soft() { return {FidelityKind::Soft, std::nullopt}; }
    static DataFidelityVariant ignore() { return {FidelityKind::Ignore, std::nullopt}; }
    static DataFidelityVariant fit_everywhere() { return {FidelityKind::FitEverywhere, std::nullopt}; }
    static DataFidelityVariant hard() { return {FidelityKind::Hard, std::nullopt}; }
    static DataFidelityVariant weighted(Sinogram w) {
        return {FidelityKind::WeightedSoft, std::move(w)};
    }
};

// Scalar resolvents of the pointwise conjugate functionals. The step
// parameter is called tau here; Chambolle-Pock passes its dual step and the
// Douglas-Rachford variants pass sigma, the role is identical.

/// Resolvent of xi -> xi^2/2 + xi*u0: (v - tau*u0)/(1 + tau).
double resolvent_quad_data(double v, double u0, double tau);

/// Resolvent of the conjugate of the indicator {z >= C}: min(v - tau*C, 0).
double resolvent_ineq_dual(double v, double C, double tau);

/// Resolvent of the conjugate of the zero functional: always 0.
double resolvent_ignore(double v);

/// Resolvent for the quadratic-plus-inequality conjugate:
/// (v - tau*a)/(1+tau) if v >= C(1+tau) - a, else v - tau*C.
double resolvent_quad_plus_ineq(double v, double a, double C, double tau);

/// Resolvent of the conjugate of the equality indicator {z = u0}: v - sigma*u0.
double resolvent_hard_eq(double v, double u0, double sigma);

/// Weighted data resolvent (v - tau*u0)/(1 + tau/omega); omega > 0.
double resolvent_weighted_quad(double v, double u0, double tau, double omega);

/// Pointwise resolvent of the indicator of [d, inf): max(y, d).
double resolvent_nonneg(double y, double d);

/// Soft thresholding of a 2-vector: 0 if |u| <= tau, else (1 - tau/|u|) u.
std::array<double, 2> soft_threshold_2d(const std::array<double, 2>& u, double tau);

/// Pointwise Euclidean shrink of each 2-vector onto the radius-lam ball:
/// w / max(1, |w|/lam).
GradientField project_linf_ball(const GradientField& w, double lam);

/// Entrywise application of the scalar resolvent selected by the variant:
/// off-mask entries get the fidelity resolvent, on-mask entries the
/// constraint (or ignore/zero) resolvent with the mask's per-entry C.
Sinogram apply_data_resolvent(const Sinogram& vbar, const Sinogram& u0,
                              const ConstraintMask& mask, const DataFidelityVariant& variant,
                              double tau);

}  // namespace tvct
