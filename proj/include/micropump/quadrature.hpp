#pragma once

#include <vector>

namespace micropump::quadrature {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss–Legendre rule with `order` nodes (Newton iteration on P_n).
Rule gauss_legendre(int order);

}  // namespace micropump::quadrature
