#include "tvct/rebin.hpp"

#include <cmath>
#include <numbers>

namespace tvct {

FanCoords fan_to_para_coords(double s, double theta, double d) {
    if (!(d > 0)) throw std::invalid_argument("fan_to_para_coords: d must be > 0");
    if (!(std::abs(s) < d)) throw std::invalid_argument("fan_to_para_coords: offset beyond fan reach");
    const double alpha = std::asin(s / d);
    return {alpha, theta + std::numbers::pi / 2.0 - alpha};
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Bracketing sample pair for phi on the periodically extended exposure
// angles; interpolation across the last-to-first seam uses the wrapped gap.
struct PhiBracket {
    std::size_t lo, hi;
    double w_hi;
};

PhiBracket locate_phi(const std::vector<double>& phis, double phi) {
    const double base = phis.front();
    double t = std::fmod(phi - base, kTwoPi);
    if (t < 0) t += kTwoPi;
    t += base;
    if (t >= phis.back()) {
        const double gap = phis.front() + kTwoPi - phis.back();
        return {phis.size() - 1, 0, (t - phis.back()) / gap};
    }
    std::size_t lo = 0, hi = phis.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (phis[mid] <= t)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, lo + 1, (t - phis[lo]) / (phis[lo + 1] - phis[lo])};
}

}  // namespace

RebinResult rebin_fan2para(const std::vector<double>& fan_data, const FanGeom& fan,
                           const SinoGeom& target) {
    const std::size_t n_det = fan.alphas.size();
    const std::size_t n_exp = fan.phis.size();
    if (fan_data.size() != n_det * n_exp)
        throw std::invalid_argument("rebin_fan2para: data size does not match fan geometry");

    RebinResult res{Sinogram(target),
                    std::vector<std::uint8_t>(
                        static_cast<std::size_t>(target.n_angles()) * target.m_det, 0)};
    std::size_t n_covered = 0;
    for (int l = 0; l < target.n_angles(); ++l) {
        for (int k = 0; k < target.m_det; ++k) {
            const double s = target.s(k);
            if (!(std::abs(s) < fan.d)) continue;
            const FanCoords fc = fan_to_para_coords(s, target.angles[l], fan.d);
            if (fc.alpha < fan.alphas.front() || fc.alpha > fan.alphas.back()) continue;

            std::size_t a_lo = 0, a_hi = n_det - 1;
            while (a_hi - a_lo > 1) {
                const std::size_t mid = (a_lo + a_hi) / 2;
                if (fan.alphas[mid] <= fc.alpha)
                    a_lo = mid;
                else
                    a_hi = mid;
            }
            const double wa = (fc.alpha - fan.alphas[a_lo]) / (fan.alphas[a_hi] - fan.alphas[a_lo]);
            const PhiBracket pb = locate_phi(fan.phis, fc.phi);

            const auto sample = [&](std::size_t e, std::size_t a) {
                return fan_data[e * n_det + a];
            };
            const double val =
                (1.0 - pb.w_hi) * ((1.0 - wa) * sample(pb.lo, a_lo) + wa * sample(pb.lo, a_hi)) +
                pb.w_hi * ((1.0 - wa) * sample(pb.hi, a_lo) + wa * sample(pb.hi, a_hi));
            res.sino.at(l, k) = val;
            res.covered[static_cast<std::size_t>(l) * target.m_det + k] = 1;
            ++n_covered;
        }
    }
    if (n_covered == 0) throw std::runtime_error("rebin_fan2para: empty coverage");
    return res;
}

}  // namespace tvct
