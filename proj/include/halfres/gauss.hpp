#pragma once

#include <vector>

namespace halfres {

// Gauss-Legendre nodes and weights on [-1, 1], n in [1, 200]
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace halfres
