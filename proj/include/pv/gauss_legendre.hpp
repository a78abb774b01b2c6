#pragma once

#include <vector>

namespace pv {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

GaussLegendre gauss_legendre(int order);

}  // namespace pv
