#include "tvct/sim.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "tvct/fbp.hpp"

namespace tvct {

const std::vector<PhantomEllipse>& shepp_logan_ellipses() {
    // value, a, b, x0, y0, phi_deg
    static const std::vector<PhantomEllipse> table = {
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
        {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
        {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
        {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
        {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
        {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
        {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
        {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
        {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
    };
    return table;
}

namespace {

// Unit-square coordinates of pixel (i,j): grid positions scaled by 2/(n h).
inline double unit_coord(const ImageGeom& g, int idx) {
    return g.x(idx) / (0.5 * g.n * g.h);
}

bool in_region(const MetalRegion& r, double x, double y) {
    const double dx = x - r.cx;
    const double dy = y - r.cy;
    if (r.is_ellipse)
        return dx * dx / (r.half_w * r.half_w) + dy * dy / (r.half_h * r.half_h) <= 1.0;
    return std::abs(dx) <= r.half_w && std::abs(dy) <= r.half_h;
}

}  // namespace

Image shepp_logan(const PhantomSpec& spec) {
    if (spec.n < 16) throw std::invalid_argument("shepp_logan: n must be >= 16");
    ImageGeom geom(spec.n, spec.h);
    Image u(geom);
    struct Pre {
        double c, s, a2, b2, x0, y0, value;
    };
    std::vector<Pre> pre;
    pre.reserve(spec.ellipses.size());
    for (const auto& e : spec.ellipses) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        pre.push_back({std::cos(phi), std::sin(phi), e.a * e.a, e.b * e.b, e.x0, e.y0, e.value});
    }
    for (int i = 0; i < spec.n; ++i) {
        const double x = unit_coord(geom, i);
        for (int j = 0; j < spec.n; ++j) {
            const double y = unit_coord(geom, j);
            double val = 0.0;
            for (const auto& e : pre) {
                const double dx = x - e.x0;
                const double dy = y - e.y0;
                const double xr = dx * e.c + dy * e.s;
                const double yr = -dx * e.s + dy * e.c;
                if (xr * xr / e.a2 + yr * yr / e.b2 <= 1.0) val += e.value;
            }
            u.at(i, j) = val;
        }
    }
    return u;
}

Image insert_metal(const Image& u, const MetalRegion& region) {
    if (std::abs(region.cx) + region.half_w > 1.0 || std::abs(region.cy) + region.half_h > 1.0)
        throw std::invalid_argument("insert_metal: region outside grid");
    Image out = u;
    const int n = u.geom.n;
    for (int i = 0; i < n; ++i) {
        const double x = unit_coord(u.geom, i);
        for (int j = 0; j < n; ++j)
            if (in_region(region, x, unit_coord(u.geom, j))) out.at(i, j) = region.value;
    }
    return out;
}

std::vector<std::uint8_t> metal_region_mask(const MetalRegion& region, const ImageGeom& geom) {
    std::vector<std::uint8_t> m(static_cast<std::size_t>(geom.n) * geom.n, 0);
    for (int i = 0; i < geom.n; ++i) {
        const double x = unit_coord(geom, i);
        for (int j = 0; j < geom.n; ++j)
            if (in_region(region, x, unit_coord(geom, j)))
                m[static_cast<std::size_t>(i) * geom.n + j] = 1;
    }
    return m;
}

CappedSinogram cap_sinogram(const Sinogram& v, double cap, double c_fraction) {
    if (!(cap > 0)) throw std::invalid_argument("cap_sinogram: cap must be > 0");
    CappedSinogram out{Sinogram(v.geom), ConstraintMask(v.geom)};
    for (std::size_t i = 0; i < v.data.size(); ++i) {
        if (v.data[i] > cap) {
            out.data.data[i] = cap;
            out.mask.mask[i] = 1;
            out.mask.thresholds[i] = c_fraction * cap;
        } else {
            out.data.data[i] = v.data[i];
        }
    }
    return out;
}

Sinogram add_noise(const Sinogram& v, double pct, std::uint64_t seed) {
    if (pct < 0) throw std::invalid_argument("add_noise: pct must be >= 0");
    if (pct == 0) return v;
    double mean = 0.0;
    for (double x : v.data) mean += x;
    mean /= static_cast<double>(v.data.size());
    double var = 0.0;
    for (double x : v.data) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.data.size());
    const double sd = pct * std::sqrt(var);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sd);
    Sinogram out = v;
    for (double& x : out.data) x += dist(rng);
    return out;
}

MetalMaskEstimate estimate_metal_mask(const Sinogram& v, const RadonOp& op,
                                      double image_threshold, int dilation_px,
                                      double c_fraction) {
    if (dilation_px < 0) throw std::invalid_argument("estimate_metal_mask: dilation must be >= 0");
    Image recon = fbp_reconstruct(v, op, FilterKind::RamLak);
    const int n = recon.geom.n;

    std::vector<std::uint8_t> bin(recon.data.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < recon.data.size(); ++i)
        if (recon.data[i] > image_threshold) {
            bin[i] = 1;
            any = true;
        }

    MetalMaskEstimate est;
    est.mask = ConstraintMask(v.geom);
    if (!any) {
        est.empty_detection = true;
        return est;
    }

    std::vector<std::uint8_t> dil(bin.size(), 0);
    const int d = dilation_px;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!bin[static_cast<std::size_t>(i) * n + j]) continue;
            for (int a = std::max(0, i - d); a <= std::min(n - 1, i + d); ++a)
                for (int b = std::max(0, j - d); b <= std::min(n - 1, j + d); ++b)
                    dil[static_cast<std::size_t>(a) * n + b] = 1;
        }

    Image marked(recon.geom);
    for (std::size_t i = 0; i < dil.size(); ++i) marked.data[i] = dil[i];
    Sinogram trace = forward(marked, op);
    for (std::size_t i = 0; i < trace.data.size(); ++i)
        if (trace.data[i] > 0.5) {
            est.mask.mask[i] = 1;
            est.mask.thresholds[i] = c_fraction * v.data[i];
        }
    return est;
}

double masked_rmse(const Image& a, const Image& b, const std::vector<std::uint8_t>& exclude) {
    if (!(a.geom == b.geom)) throw std::invalid_argument("masked_rmse: geometry mismatch");
    if (!exclude.empty() && exclude.size() != a.data.size())
        throw std::invalid_argument("masked_rmse: exclusion mask size mismatch");
    double s = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        if (!exclude.empty() && exclude[i]) continue;
        const double d = a.data[i] - b.data[i];
        s += d * d;
        ++count;
    }
    if (count == 0) throw std::invalid_argument("masked_rmse: empty evaluation set");
    return std::sqrt(s / static_cast<double>(count));
}

}  // namespace tvct
