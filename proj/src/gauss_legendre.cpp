#include "pv/gauss_legendre.hpp"

#include <cmath>

#include "pv/errors.hpp"

namespace pv {

GaussLegendre gauss_legendre(int order) {
    if (order < 1 || order > 64) throw ValidationError("quadrature order out of range");
    GaussLegendre gl;
    gl.nodes.resize(static_cast<std::size_t>(order));
    gl.weights.resize(static_cast<std::size_t>(order));
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev starting guess, Newton on P_n
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        gl.nodes[static_cast<std::size_t>(i)] = -x;
        gl.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.weights[static_cast<std::size_t>(i)] = w;
        gl.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return gl;
}

}  // namespace pv
