#include "tvct/solvers.hpp"

#include <cmath>

#include "tvct/diffops.hpp"

namespace tvct {

namespace {

void check_problem(const ProblemSpec& prob, const Image& init) {
    if (!(prob.u0.geom == prob.op.sino_geom))
        throw std::invalid_argument("solver: data/operator geometry mismatch");
    if (!(prob.mask.geom == prob.op.sino_geom))
        throw std::invalid_argument("solver: mask/operator geometry mismatch");
    if (!(init.geom == prob.op.image_geom))
        throw std::invalid_argument("solver: init/operator geometry mismatch");
    if (!(prob.lambda > 0)) throw std::invalid_argument("solver: lambda must be > 0");
    if (!(prob.tau_grad > 0)) throw std::invalid_argument("solver: tau_grad must be > 0");
}

double data_term(const Sinogram& Ru, const ProblemSpec& prob) {
    double s = 0.0;
    switch (prob.variant.kind) {
        case FidelityKind::Soft:
        case FidelityKind::Ignore:
            for (std::size_t i = 0; i < Ru.data.size(); ++i)
                if (!prob.mask.mask[i]) {
                    const double d = Ru.data[i] - prob.u0.data[i];
                    s += d * d;
                }
            return 0.5 * s;
        case FidelityKind::FitEverywhere:
            for (std::size_t i = 0; i < Ru.data.size(); ++i) {
                const double d = Ru.data[i] - prob.u0.data[i];
                s += d * d;
            }
            return 0.5 * s;
        case FidelityKind::Hard:
            return 0.0;
        case FidelityKind::WeightedSoft:
            for (std::size_t i = 0; i < Ru.data.size(); ++i)
                if (!prob.mask.mask[i]) {
                    const double d = Ru.data[i] - prob.u0.data[i];
                    s += prob.variant.weights->data[i] * d * d;
                }
            return 0.5 * s;
    }
    return 0.0;
}

double violation_from(const Sinogram& Ru, const ConstraintMask& mask) {
    double v = 0.0;
    for (std::size_t i = 0; i < Ru.data.size(); ++i)
        if (mask.mask[i]) v = std::max(v, mask.thresholds[i] - Ru.data[i]);
    return std::max(v, 0.0);
}

double objective_from(const Sinogram& Ru, const Image& u, const ProblemSpec& prob) {
    return data_term(Ru, prob) + prob.lambda * one_norm_iso(grad_h(u));
}

double rel_change(const Image& u_new, const Image& u_old) {
    double dn = 0.0, on = 0.0;
    for (std::size_t i = 0; i < u_new.data.size(); ++i) {
        const double d = u_new.data[i] - u_old.data[i];
        dn += d * d;
        on += u_old.data[i] * u_old.data[i];
    }
    return std::sqrt(dn) / std::max(std::sqrt(on), 1.0);
}

struct Tracer {
    const ProblemSpec& prob;
    int every;
    ConvergenceTrace trace;

    Tracer(const ProblemSpec& p, int every_) : prob(p), every(every_) {}

    bool due(int iter, bool final) const {
        return every > 0 && (final || iter % every == 0);
    }
    void record(int iter, const Image& u, const Sinogram* Ru, double rc) {
        Sinogram own;
        if (!Ru) {
            own = forward(u, prob.op);
            Ru = &own;
        }
        trace.records.push_back(
            {iter, objective_from(*Ru, u, prob), violation_from(*Ru, prob.mask), rc});
    }
};

// ||K||^2 upper bound for the Chambolle-Pock step condition. Uses the
// analytic operator bound when applicable, a safety-padded power-iteration
// estimate otherwise.
double cp_norm_sq_bound(const ProblemSpec& prob) {
    double rb;
    try {
        rb = norm_bound(prob.op);
    } catch (const std::invalid_argument&) {
        rb = 1.05 * estimate_norm(prob.op, 100, 19);
    }
    const double h = prob.op.image_geom.h;
    return rb * rb + prob.tau_grad * prob.tau_grad * 8.0 / (h * h);
}

void validate_pdrq_precond(const PrecondSpec& precond, double alpha, double beta) {
    if (!precond.calibrated) throw std::invalid_argument("pdrq: preconditioner not calibrated");
    const double ra = std::abs(precond.alpha - alpha) / std::max(alpha, 1e-300);
    const double rbb = std::abs(precond.beta - beta) / std::max(beta, 1e-300);
    if (ra > 1e-9 || rbb > 1e-9)
        throw std::invalid_argument("pdrq: preconditioner calibrated for different (alpha, beta)");
}

}  // namespace

std::pair<double, double> pdrq_precond_coefficients(PdrqSplitting splitting,
                                                    const SolverParams& params,
                                                    double tau_grad) {
    const double s = params.sigma;
    const double st = s * tau_grad;
    switch (splitting) {
        case PdrqSplitting::PDRQ2:
            return {s, st * st / (params.mu + s * params.nu)};
        case PdrqSplitting::PDRQ1:
        case PdrqSplitting::PDRQ3:
            return {s * s / params.mu, st * st / params.mu};
    }
    throw std::logic_error("unknown splitting");
}

double objective(const Image& u, const ProblemSpec& prob) {
    return objective_from(forward(u, prob.op), u, prob);
}

double constraint_violation(const Image& u, const ProblemSpec& prob) {
    return violation_from(forward(u, prob.op), prob.mask);
}

SolveResult chambolle_pock(const ProblemSpec& prob, const SolverParams& params,
                           const Image& init) {
    check_problem(prob, init);
    const double tg = prob.tau_grad;
    const double bound = cp_norm_sq_bound(prob);
    double sigma = params.sigma;
    double tau = params.tau_step;
    if (tau <= 0) sigma = tau = 0.99 / std::sqrt(bound);
    if (!(sigma > 0) || !(tau > 0) || !(sigma * tau * bound < 1.0))
        throw std::invalid_argument("chambolle_pock: step condition sigma*tau*||K||^2 < 1 violated");
    const double lam_tilde = prob.lambda / tg;

    Image u = init;
    Image ubar = u;
    GradientField w(prob.op.image_geom);
    Sinogram v(prob.op.sino_geom);

    Tracer tracer(prob, params.trace_every);
    if (tracer.due(0, false)) tracer.record(0, u, nullptr, 0.0);

    int k = 0;
    for (; k < params.max_iter;) {
        ++k;
        GradientField gbar = grad_h(ubar);
        gbar *= tau * tg;
        gbar += w;
        Sinogram vbar = forward(ubar, prob.op);
        vbar *= tau;
        vbar += v;

        w = project_linf_ball(gbar, lam_tilde);
        v = apply_data_resolvent(vbar, prob.u0, prob.mask, prob.variant, tau);

        Image u_new = div_h(w);
        u_new *= sigma * tg;
        Image rv = adjoint(v, prob.op);
        rv *= sigma;
        u_new -= rv;
        u_new += u;

        const double rc = rel_change(u_new, u);
        ubar = u_new;
        ubar *= 2.0;
        ubar -= u;
        u = u_new;

        const bool stop = rc < params.tol || k == params.max_iter;
        if (tracer.due(k, stop)) tracer.record(k, u, nullptr, rc);
        if (rc < params.tol) break;
    }
    return {std::move(u), std::move(tracer.trace), k};
}

SolveResult pdrq(const ProblemSpec& prob, const SolverParams& params,
                 const PrecondSpec& precond, PdrqSplitting splitting, const Image& init) {
    check_problem(prob, init);
    if (!(params.mu >= 1.0)) throw std::invalid_argument("pdrq: mu must be >= 1");
    if (params.nu < 0) throw std::invalid_argument("pdrq: nu must be >= 0");
    if (splitting != PdrqSplitting::PDRQ2 && params.nu != 0.0)
        throw std::invalid_argument("pdrq: nu is only meaningful for PDRQ2");
    const auto [alpha, beta] = pdrq_precond_coefficients(splitting, params, prob.tau_grad);
    validate_pdrq_precond(precond, alpha, beta);

    if (splitting == PdrqSplitting::PDRQ2) {
        if (!prob.mask.empty())
            throw std::invalid_argument("pdrq: PDRQ2 handles the unconstrained problem only");
        if (prob.variant.kind == FidelityKind::Hard ||
            prob.variant.kind == FidelityKind::WeightedSoft)
            throw std::invalid_argument("pdrq: PDRQ2 supports plain quadratic fitting only");
    }
    if (splitting == PdrqSplitting::PDRQ3 && prob.variant.kind != FidelityKind::Soft)
        throw std::invalid_argument("pdrq: PDRQ3 is derived for the soft variant");

    const double sg = params.sigma;
    const double tg = prob.tau_grad;
    const double mu = params.mu;

    Tracer tracer(prob, params.trace_every);
    Image u = init;
    int k = 0;

    if (splitting == PdrqSplitting::PDRQ2) {
        const double denom = mu + sg * params.nu;
        GradientField v(prob.op.image_geom), vbar(prob.op.image_geom);
        if (tracer.due(0, false)) tracer.record(0, u, nullptr, 0.0);
        for (; k < params.max_iter;) {
            ++k;
            // b - T u with T = sigma R*R + (sigma tau)^2/(mu+sigma nu) (-Lap)
            GradientField dir = vbar;
            if (mu != 1.0) {
                GradientField vv = v;
                vv *= (mu - 1.0);
                dir += vv;
            }
            GradientField gu = grad_h(u);
            gu *= sg * tg;
            dir += gu;
            Image u_tmp = div_h(dir);
            u_tmp *= sg * tg / denom;
            Sinogram Ru = forward(u, prob.op);
            Sinogram resid = prob.u0;
            resid -= Ru;
            Image rr = adjoint(resid, prob.op);
            rr *= sg;
            u_tmp += rr;

            Image u_new = apply_precond_inv(precond, u_tmp);
            u_new += u;

            GradientField v_new = grad_h(u_new);
            v_new *= sg * tg;
            v_new += vbar;
            if (mu != 1.0) {
                GradientField vv = v;
                vv *= (mu - 1.0);
                v_new += vv;
            }
            v_new *= 1.0 / denom;

            GradientField refl = v_new;
            refl *= 2.0;
            refl -= vbar;
            GradientField proj = project_linf_ball(refl, prob.lambda / tg);
            vbar += proj;
            vbar -= v_new;
            v = std::move(v_new);

            const double rc = rel_change(u_new, u);
            u = std::move(u_new);
            const bool stop = rc < params.tol || k == params.max_iter;
            if (tracer.due(k, stop)) tracer.record(k, u, nullptr, rc);
            if (rc < params.tol) break;
        }
        return {std::move(u), std::move(tracer.trace), k};
    }

    // PDRQ1 / PDRQ3: dual pair (v1 on sinograms, v2 on gradient fields).
    const bool weighted_dual = (splitting == PdrqSplitting::PDRQ3);
    Sinogram v1(prob.op.sino_geom), v1bar(prob.op.sino_geom);
    GradientField v2(prob.op.image_geom), v2bar(prob.op.image_geom);

    // PDRQ3 dual weights 1/(mu + sigma) off D0 (where the quadratic moved
    // into S) and 1/mu on D0.
    auto weight1 = [&](std::size_t idx) {
        if (!weighted_dual) return 1.0 / mu;
        return prob.mask.mask[idx] ? 1.0 / mu : 1.0 / (mu + sg);
    };

    if (tracer.due(0, false)) tracer.record(0, u, nullptr, 0.0);
    for (; k < params.max_iter;) {
        ++k;
        Sinogram Ru = forward(u, prob.op);
        Sinogram s1(prob.op.sino_geom);
        for (std::size_t i = 0; i < s1.data.size(); ++i) {
            double t = v1bar.data[i] + (mu - 1.0) * v1.data[i] + sg * Ru.data[i];
            if (weighted_dual && !prob.mask.mask[i]) t -= sg * prob.u0.data[i];
            s1.data[i] = weight1(i) * t;
        }
        GradientField s2 = grad_h(u);
        s2 *= sg * tg;
        s2 += v2bar;
        if (mu != 1.0) {
            GradientField vv = v2;
            vv *= (mu - 1.0);
            s2 += vv;
        }
        s2 *= 1.0 / mu;

        Image u_tmp = adjoint(s1, prob.op);
        Image d2 = div_h(s2);
        d2 *= tg;
        u_tmp -= d2;
        u_tmp *= -sg;

        Image u_new = apply_precond_inv(precond, u_tmp);
        u_new += u;

        Sinogram Ru_new = forward(u_new, prob.op);
        Sinogram v1_new(prob.op.sino_geom);
        for (std::size_t i = 0; i < v1_new.data.size(); ++i) {
            double t = v1bar.data[i] + (mu - 1.0) * v1.data[i] + sg * Ru_new.data[i];
            if (weighted_dual && !prob.mask.mask[i]) t -= sg * prob.u0.data[i];
            v1_new.data[i] = weight1(i) * t;
        }
        GradientField v2_new = grad_h(u_new);
        v2_new *= sg * tg;
        v2_new += v2bar;
        if (mu != 1.0) {
            GradientField vv = v2;
            vv *= (mu - 1.0);
            v2_new += vv;
        }
        v2_new *= 1.0 / mu;

        Sinogram refl1 = v1_new;
        refl1 *= 2.0;
        refl1 -= v1bar;
        Sinogram res1(prob.op.sino_geom);
        if (!weighted_dual) {
            res1 = apply_data_resolvent(refl1, prob.u0, prob.mask, prob.variant, sg);
        } else {
            // remaining dual functional: zero off D0, inequality branch on D0
            for (std::size_t i = 0; i < res1.data.size(); ++i)
                res1.data[i] = prob.mask.mask[i]
                                   ? resolvent_ineq_dual(refl1.data[i], prob.mask.thresholds[i], sg)
                                   : refl1.data[i];
        }
        v1bar += res1;
        v1bar -= v1_new;
        v1 = std::move(v1_new);

        GradientField refl2 = v2_new;
        refl2 *= 2.0;
        refl2 -= v2bar;
        GradientField proj = project_linf_ball(refl2, prob.lambda / tg);
        v2bar += proj;
        v2bar -= v2_new;
        v2 = std::move(v2_new);

        const double rc = rel_change(u_new, u);
        u = std::move(u_new);
        const bool stop = rc < params.tol || k == params.max_iter;
        if (tracer.due(k, stop)) tracer.record(k, u, &Ru_new, rc);
        if (rc < params.tol) break;
    }
    return {std::move(u), std::move(tracer.trace), k};
}

SolveResult pdrq_nonneg(const ProblemSpec& prob, const SolverParams& params,
                        const PrecondSpec& precond, const Image& init) {
    check_problem(prob, init);
    if (!prob.nonneg) throw std::invalid_argument("pdrq_nonneg: problem does not request nonneg");
    if (prob.variant.kind != FidelityKind::Soft)
        throw std::invalid_argument("pdrq_nonneg: soft variant only");
    if (precond.kind != PrecondKind::InverseNorm)
        throw std::invalid_argument("pdrq_nonneg: uses the inverse-norm preconditioner");
    const double sg = params.sigma;
    const double tg = prob.tau_grad;
    validate_pdrq_precond(precond, sg * sg, sg * sg * tg * tg);

    Image u = init;
    Image ubar = init;
    Image proj_u = init;
    for (double& x : proj_u.data) x = std::max(x, 0.0);
    Sinogram v1bar(prob.op.sino_geom);
    GradientField v2bar(prob.op.image_geom);

    Tracer tracer(prob, params.trace_every);
    if (tracer.due(0, false)) tracer.record(0, proj_u, nullptr, 0.0);

    int k = 0;
    for (; k < params.max_iter;) {
        ++k;
        Sinogram s1 = forward(u, prob.op);
        s1 *= sg;
        s1 += v1bar;
        GradientField s2 = grad_h(u);
        s2 *= sg * tg;
        s2 += v2bar;

        Image u_tmp = adjoint(s1, prob.op);
        Image d2 = div_h(s2);
        d2 *= tg;
        u_tmp -= d2;
        u_tmp *= -sg;
        u_tmp += ubar;
        u_tmp -= u;

        Image u_new =
            nonneg_variant_apply(u_tmp, precond, precond.tables, sg, tg, precond.c);
        u_new += u;

        Sinogram Ru_new = forward(u_new, prob.op);
        Sinogram v1_new = Ru_new;
        v1_new *= sg;
        v1_new += v1bar;
        GradientField v2_new = grad_h(u_new);
        v2_new *= sg * tg;
        v2_new += v2bar;

        Sinogram refl1 = v1_new;
        refl1 *= 2.0;
        refl1 -= v1bar;
        Sinogram res1 = apply_data_resolvent(refl1, prob.u0, prob.mask, prob.variant, sg);
        v1bar += res1;
        v1bar -= v1_new;

        GradientField refl2 = v2_new;
        refl2 *= 2.0;
        refl2 -= v2bar;
        GradientField proj2 = project_linf_ball(refl2, prob.lambda / tg);
        v2bar += proj2;
        v2bar -= v2_new;

        // non-negativity resolvent on the reflected primal iterate
        for (std::size_t i = 0; i < proj_u.data.size(); ++i)
            proj_u.data[i] = std::max(2.0 * u_new.data[i] - ubar.data[i], 0.0);
        ubar += proj_u;
        ubar -= u_new;

        const double rc = rel_change(u_new, u);
        u = std::move(u_new);
        const bool stop = rc < params.tol || k == params.max_iter;
        if (tracer.due(k, stop)) tracer.record(k, proj_u, nullptr, rc);
        if (rc < params.tol) break;
    }
    return {std::move(proj_u), std::move(tracer.trace), k};
}

PcgResult pcg(const std::function<Image(const Image&)>& apply_A, const Image& b,
              const std::function<Image(const Image&)>& precond_inv, const Image& init,
              int iters, double tol) {
    PcgResult res;
    res.x = init;
    Image r = b;
    r -= apply_A(res.x);
    const double bnorm = std::max(norm_image(b), 1e-300);
    Image z = precond_inv ? precond_inv(r) : r;
    Image p = z;
    double rz = inner_image(r, z);
    for (int i = 0; i < iters; ++i) {
        if (norm_image(r) / bnorm < tol) break;
        Image Ap = apply_A(p);
        const double pAp = inner_image(p, Ap);
        if (!(pAp > 0)) {
            res.breakdown = true;
            return res;
        }
        const double a = rz / pAp;
        Image ap = p;
        ap *= a;
        res.x += ap;
        Ap *= a;
        r -= Ap;
        z = precond_inv ? precond_inv(r) : r;
        const double rz_new = inner_image(r, z);
        Image pnext = z;
        Image pb = p;
        pb *= rz_new / rz;
        pnext += pb;
        p = std::move(pnext);
        rz = rz_new;
        res.iterations = i + 1;
    }
    return res;
}

SolveResult admm(const ProblemSpec& prob, const SolverParams& params, const PrecondSpec& precond,
                 const Image& init) {
    check_problem(prob, init);
    if (!prob.mask.empty() || prob.variant.kind != FidelityKind::Soft)
        throw std::invalid_argument("admm: variant implemented for the unconstrained problem only");
    if (!(params.admm_mu > 0)) throw std::invalid_argument("admm: penalty mu must be > 0");
    if (params.pcg_iters < 1) throw std::invalid_argument("admm: need at least one PCG iteration");
    const double tg = prob.tau_grad;
    const double mu = params.admm_mu;
    validate_pdrq_precond(precond, 1.0, tg * tg);

    auto apply_A = [&](const Image& x) {
        return apply_quadratic_operator(prob.op, 1.0, tg * tg, x);
    };
    auto minv = [&](const Image& x) { return apply_precond_inv(precond, x); };

    Image u = init;
    Sinogram zw = forward(u, prob.op);
    GradientField zv = grad_h(u);
    Sinogram ew(prob.op.sino_geom);
    GradientField ev(prob.op.image_geom);

    Tracer tracer(prob, params.trace_every);
    if (tracer.due(0, false)) tracer.record(0, u, nullptr, 0.0);

    const double thr = prob.lambda / (mu * tg * tg);
    int k = 0;
    for (; k < params.max_iter;) {
        ++k;
        // u-update: (R*R - tau^2 Lap) u = R*(zw - ew) - tau^2 div(zv - ev)
        Sinogram sw = zw;
        sw -= ew;
        GradientField sv = zv;
        sv -= ev;
        Image rhs = adjoint(sw, prob.op);
        Image dv = div_h(sv);
        dv *= -tg * tg;
        rhs += dv;
        Image u_new = pcg(apply_A, rhs, minv, u, params.pcg_iters, 0.0).x;

        Sinogram Ru = forward(u_new, prob.op);
        GradientField Gu = grad_h(u_new);

        // z-update
        for (std::size_t i = 0; i < zw.data.size(); ++i)
            zw.data[i] = (prob.u0.data[i] + mu * (Ru.data[i] + ew.data[i])) / (1.0 + mu);
        for (std::size_t i = 0; i < zv.x.size(); ++i) {
            const auto t = soft_threshold_2d({Gu.x[i] + ev.x[i], Gu.y[i] + ev.y[i]}, thr);
            zv.x[i] = t[0];
            zv.y[i] = t[1];
        }

        // scaled multiplier update
        for (std::size_t i = 0; i < ew.data.size(); ++i)
            ew.data[i] -= zw.data[i] - Ru.data[i];
        for (std::size_t i = 0; i < ev.x.size(); ++i) {
            ev.x[i] -= zv.x[i] - Gu.x[i];
            ev.y[i] -= zv.y[i] - Gu.y[i];
        }

        const double rc = rel_change(u_new, u);
        u = std::move(u_new);
        const bool stop = rc < params.tol || k == params.max_iter;
        if (tracer.due(k, stop)) tracer.record(k, u, &Ru, rc);
        if (rc < params.tol) break;
    }
    return {std::move(u), std::move(tracer.trace), k};
}

}  // namespace tvct
