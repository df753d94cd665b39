#include "tvct/diffops.hpp"

#include <cmath>
#include <numbers>

#include "tvct/fft.hpp"

namespace tvct {

GradientField grad_h(const Image& u) {
    const int n = u.geom.n;
    const double inv_h = 1.0 / u.geom.h;
    GradientField g(u.geom);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i < n - 1) g.at_x(i, j) = (u.at(i + 1, j) - u.at(i, j)) * inv_h;
            if (j < n - 1) g.at_y(i, j) = (u.at(i, j + 1) - u.at(i, j)) * inv_h;
        }
    }
    return g;
}

Image div_h(const GradientField& p) {
    const int n = p.geom.n;
    const double inv_h = 1.0 / p.geom.h;
    Image d(p.geom);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double dx;
            if (i == 0)
                dx = p.at_x(0, j);
            else if (i < n - 1)
                dx = p.at_x(i, j) - p.at_x(i - 1, j);
            else
                dx = -p.at_x(n - 2, j);
            double dy;
            if (j == 0)
                dy = p.at_y(i, 0);
            else if (j < n - 1)
                dy = p.at_y(i, j) - p.at_y(i, j - 1);
            else
                dy = -p.at_y(i, n - 2);
            d.at(i, j) = (dx + dy) * inv_h;
        }
    }
    return d;
}

Image laplacian_h(const Image& u) { return div_h(grad_h(u)); }

std::vector<double> dft_laplacian_symbol(int n) {
    if (n < 2) throw std::invalid_argument("dft_laplacian_symbol: n must be >= 2");
    std::vector<double> sym(static_cast<std::size_t>(n) * n);
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) {
        const double t = std::sin(std::numbers::pi * i / n);
        s[i] = 4.0 * t * t;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sym[static_cast<std::size_t>(i) * n + j] = s[i] + s[j];
    return sym;
}

Image periodic_laplacian(const Image& u) {
    Image out(u.geom);
    out.data = fft::apply_symbol(u.data, dft_laplacian_symbol(u.geom.n), u.geom.n);
    return out;
}

}  // namespace tvct
