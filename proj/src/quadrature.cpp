#include "micropump/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "micropump/error.hpp"

namespace micropump::quadrature {

Rule gauss_legendre(int order) {
    if (order < 1) throw Error(ErrorKind::invalid_input, "quadrature order must be >= 1");
    const auto n = static_cast<std::size_t>(order);
    Rule rule{std::vector<double>(n), std::vector<double>(n)};

    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace micropump::quadrature
