#pragma once

// Test functions f together with their derivatives, as consumed by the
// T/U sums and the expansion identities.

#include <functional>
#include <string>
#include <vector>

#include "depclt/outcome.hpp"

namespace depclt {

class SmoothFunction {
public:
    using Derivative = std::function<double(int order, double x)>;

    SmoothFunction(std::string name, int max_order, Derivative d);

    static SmoothFunction polynomial(std::vector<double> coeffs);  // sum c_j x^j
    static SmoothFunction sine();
    static SmoothFunction cosine();
    static SmoothFunction exponential(double a);  // exp(a x)
    static SmoothFunction hyperbolic_tangent(int max_order = 16);

    const std::string& name() const { return name_; }
    int max_order() const { return max_order_; }
    bool is_polynomial() const { return polynomial_; }
    const std::vector<double>& coefficients() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    double operator()(double x) const { return derivative(0, x); }
    double derivative(int order, double x) const;
    RandomVar derivative(int order, const RandomVar& x) const;

private:
    std::string name_;
    int max_order_;
    Derivative d_;
    bool polynomial_ = false;
    std::vector<double> coeffs_;
};

}  // namespace depclt
