#pragma once

#include <vector>

namespace depclt {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre on [-1, 1].
QuadratureRule gauss_legendre(int n);

// Gauss-Hermite for the weight exp(-x^2) on the real line.
QuadratureRule gauss_hermite(int n);

// Gauss-Legendre mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace depclt
