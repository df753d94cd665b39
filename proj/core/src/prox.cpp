#include "tvct/prox.hpp"

#include <cmath>

namespace tvct {

double resolvent_quad_data(double v, double u0, double tau) {
    if (!(tau > 0)) throw std::invalid_argument("resolvent_quad_data: tau must be > 0");
    return (v - tau * u0) / (1.0 + tau);
}

double resolvent_ineq_dual(double v, double C, double tau) {
    if (!(tau > 0)) throw std::invalid_argument("resolvent_ineq_dual: tau must be > 0");
    return std::min(v - tau * C, 0.0);
}

double resolvent_ignore(double /*v*/) { return 0.0; }

double resolvent_quad_plus_ineq(double v, double a, double C, double tau) {
    if (!(tau > 0)) throw std::invalid_argument("resolvent_quad_plus_ineq: tau must be > 0");
    if (v >= C * (1.0 + tau) - a) return (v - tau * a) / (1.0 + tau);
    return v - tau * C;
}

double resolvent_hard_eq(double v, double u0, double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("resolvent_hard_eq: sigma must be > 0");
    return v - sigma * u0;
}

double resolvent_weighted_quad(double v, double u0, double tau, double omega) {
    if (!(tau > 0)) throw std::invalid_argument("resolvent_weighted_quad: tau must be > 0");
    if (!(omega > 0)) throw std::invalid_argument("resolvent_weighted_quad: omega must be > 0");
    return (v - tau * u0) / (1.0 + tau / omega);
}

double resolvent_nonneg(double y, double d) { return std::max(y, d); }

std::array<double, 2> soft_threshold_2d(const std::array<double, 2>& u, double tau) {
    if (!(tau > 0)) throw std::invalid_argument("soft_threshold_2d: tau must be > 0");
    const double nrm = std::hypot(u[0], u[1]);
    if (nrm <= tau) return {0.0, 0.0};
    const double f = 1.0 - tau / nrm;
    return {f * u[0], f * u[1]};
}

GradientField project_linf_ball(const GradientField& w, double lam) {
    if (!(lam > 0)) throw std::invalid_argument("project_linf_ball: lam must be > 0");
    GradientField out = w;
    for (std::size_t i = 0; i < out.x.size(); ++i) {
        const double nrm = std::hypot(out.x[i], out.y[i]);
        const double d = std::max(1.0, nrm / lam);
        out.x[i] /= d;
        out.y[i] /= d;
    }
    return out;
}

Sinogram apply_data_resolvent(const Sinogram& vbar, const Sinogram& u0,
                              const ConstraintMask& mask, const DataFidelityVariant& variant,
                              double tau) {
    if (!(vbar.geom == u0.geom) || !(vbar.geom == mask.geom))
        throw std::invalid_argument("apply_data_resolvent: geometry mismatch");
    if (variant.kind == FidelityKind::WeightedSoft) {
        if (!variant.weights || !(variant.weights->geom == vbar.geom))
            throw std::invalid_argument("apply_data_resolvent: weighted variant needs matching weights");
    } else if (variant.weights) {
        throw std::invalid_argument("apply_data_resolvent: weights given for unweighted variant");
    }

    Sinogram out(vbar.geom);
    for (std::size_t idx = 0; idx < vbar.data.size(); ++idx) {
        const double v = vbar.data[idx];
        const double d = u0.data[idx];
        const bool on = mask.mask[idx] != 0;
        const double C = mask.thresholds[idx];
        double r;
        switch (variant.kind) {
            case FidelityKind::Soft:
                r = on ? resolvent_ineq_dual(v, C, tau) : resolvent_quad_data(v, d, tau);
                break;
            case FidelityKind::Ignore:
                r = on ? resolvent_ignore(v) : resolvent_quad_data(v, d, tau);
                break;
            case FidelityKind::FitEverywhere:
                r = on ? resolvent_quad_plus_ineq(v, d, C, tau) : resolvent_quad_data(v, d, tau);
                break;
            case FidelityKind::Hard:
                r = on ? resolvent_ineq_dual(v, C, tau) : resolvent_hard_eq(v, d, tau);
                break;
            case FidelityKind::WeightedSoft:
                r = on ? resolvent_ineq_dual(v, C, tau)
                       : resolvent_weighted_quad(v, d, tau, variant.weights->data[idx]);
                break;
            default:
                throw std::logic_error("apply_data_resolvent: unknown variant");
        }
        out.data[idx] = r;
    }
    return out;
}

}  // namespace tvct
