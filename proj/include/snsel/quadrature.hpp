#pragma once

#include <vector>

namespace snsel {

// Gauss-Legendre quadrature on [-1, 1]: the discrete-ordinates angle set.
// Nodes are strictly increasing, weights positive, sum of weights = 2.
struct AngularQuadrature {
    int order = 0;                 // N, positive even
    std::vector<double> nodes;     // mu_n, ascending, none equal to 0
    std::vector<double> weights;   // w_n, symmetric with the nodes
};

// Nodes are the roots of the Legendre polynomial P_N found by Newton
// iteration (tolerance 1e-14); weights are 2 / ((1 - x^2) P_N'(x)^2).
// Throws std::invalid_argument for odd or non-positive order.
AngularQuadrature gauss_legendre(int order);

} // namespace snsel
