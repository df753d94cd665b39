#pragma once

#include <functional>
#include <optional>
#include <string>

#include "tvct/grid.hpp"
#include "tvct/precond.hpp"
#include "tvct/prox.hpp"
#include "tvct/radon.hpp"

namespace tvct {

/// One reconstruction problem: data, constraint mask (may be all-false),
/// regularization weight, fidelity variant, optional non-negativity, and the
/// internal gradient scaling tau_grad (the solved problem is independent of
/// tau_grad; the TV dual radius is lambda/tau_grad).
struct ProblemSpec {
    RadonOp op;
    Sinogram u0;
    ConstraintMask mask;
    double lambda = 1.0;
    DataFidelityVariant variant = DataFidelityVariant::soft();
    bool nonneg = false;
    double tau_grad = 1.0;
};

struct TraceRecord {
    int iter = 0;
    double objective = 0.0;
    double violation = 0.0;
    double rel_change = 0.0;
};

struct ConvergenceTrace {
    std::vector<TraceRecord> records;
};

struct SolverParams {
    double sigma = 1.0;
    double tau_step = 0.0;  // Chambolle-Pock dual step; <= 0 selects both steps
                            // as 0.99 / sqrt(||R||^2 + tau_grad^2 * 8/h^2)
    double mu = 1.0;        // Douglas-Rachford relaxation, >= 1
    double nu = 0.0;        // quadratic dual weight (PDRQ2 only), >= 0
    int max_iter = 500;
    double tol = 1e-6;      // relative-change stopping threshold
    double admm_mu = 1.0;   // ADMM penalty
    int pcg_iters = 2;      // inner PCG iterations per ADMM step
    int trace_every = 1;    // 0 disables the trace (and its extra forward apply)
};

struct SolveResult {
    Image image;
    ConvergenceTrace trace;
    int iterations = 0;
};

enum class PdrqSplitting { PDRQ1, PDRQ2, PDRQ3 };

/// Variant-aware objective: masked (or full, or weighted) quadratic data
/// term plus lambda * TV. Hard constraints carry no data term. The reported
/// TV weight is the problem's lambda, independent of tau_grad.
double objective(const Image& u, const ProblemSpec& prob);

/// max over D0 of max(0, C - (R_h u)); zero for an empty mask.
double constraint_violation(const Image& u, const ProblemSpec& prob);

/// Chambolle-Pock primal-dual iteration. Fails upfront when
/// sigma * tau_step * (||R||^2 + tau_grad^2 * 8/h^2) >= 1.
SolveResult chambolle_pock(const ProblemSpec& prob, const SolverParams& params,
                           const Image& init);

/// Preconditioned Douglas-Rachford with quadratic splitting.
/// PDRQ1 keeps the whole fidelity in the resolvent (any variant, constraints
/// allowed; preconditioner for alpha = sigma^2/mu, beta = (sigma tau)^2/mu).
/// PDRQ2 moves the quadratic into the linear-quadratic part (unconstrained
/// soft fitting only; alpha = sigma, beta = (sigma tau)^2/(mu + sigma nu)).
/// PDRQ3 moves the quadratic into the dual weighting S (soft variant;
/// same preconditioner shape as PDRQ1).
SolveResult pdrq(const ProblemSpec& prob, const SolverParams& params,
                 const PrecondSpec& precond, PdrqSplitting splitting, const Image& init);

/// PDRQ1-style iteration with the additional non-negativity resolvent
/// max(., 0) and the identity-augmented inverse-norm preconditioner.
/// Returns the projected iterate, which is non-negative by construction.
SolveResult pdrq_nonneg(const ProblemSpec& prob, const SolverParams& params,
                        const PrecondSpec& precond, const Image& init);

/// ADMM for the unconstrained problem with an inner preconditioned CG solve
/// of (R*R - tau^2 Laplacian) u = rhs per outer iteration.
SolveResult admm(const ProblemSpec& prob, const SolverParams& params,
                 const PrecondSpec& precond, const Image& init);

struct PcgResult {
    Image x;
    int iterations = 0;
    bool breakdown = false;
};

/// Standard preconditioned conjugate gradient for a symmetric PSD operator.
/// Stops at `iters` iterations or relative residual below tol; a
/// non-positive curvature direction ends the solve with the current iterate
/// and the breakdown flag set.
PcgResult pcg(const std::function<Image(const Image&)>& apply_A, const Image& b,
              const std::function<Image(const Image&)>& precond_inv, const Image& init,
              int iters, double tol);

/// Expected preconditioner coefficients (alpha, beta) for a splitting with
/// the given parameters; pdrq validates its PrecondSpec against these.
std::pair<double, double> pdrq_precond_coefficients(PdrqSplitting splitting,
                                                    const SolverParams& params,
                                                    double tau_grad);

}  // namespace tvct
