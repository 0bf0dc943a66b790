#include "depclt/smooth_function.hpp"

#include <climits>
#include <cmath>
#include <memory>

#include "depclt/errors.hpp"

namespace depclt {

SmoothFunction::SmoothFunction(std::string name, int max_order, Derivative d)
    : name_(std::move(name)), max_order_(max_order), d_(std::move(d)) {}

double SmoothFunction::derivative(int order, double x) const {
    if (order < 0 || order > max_order_)
        throw DomainError("derivative of order " + std::to_string(order) + " unavailable for " + name_);
    return d_(order, x);
}

RandomVar SmoothFunction::derivative(int order, const RandomVar& x) const {
    RandomVar out(x.size());
    for (std::size_t w = 0; w < x.size(); ++w) out[w] = derivative(order, x[w]);
    return out;
}

SmoothFunction SmoothFunction::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    auto c = std::make_shared<const std::vector<double>>(coeffs);
    SmoothFunction f("poly" + std::to_string(coeffs.size() - 1), INT_MAX, [c](int order, double x) {
        const int deg = static_cast<int>(c->size()) - 1;
        double acc = 0.0;
        for (int j = deg; j >= order; --j) {
            double falling = 1.0;
            for (int r = 0; r < order; ++r) falling *= j - r;
            acc = acc * x + falling * (*c)[j];
        }
        return acc;
    });
    f.polynomial_ = true;
    f.coeffs_ = std::move(coeffs);
    return f;
}

SmoothFunction SmoothFunction::sine() {
    return SmoothFunction("sin", INT_MAX, [](int order, double x) {
        switch (order % 4) {
            case 0: return std::sin(x);
            case 1: return std::cos(x);
            case 2: return -std::sin(x);
            default: return -std::cos(x);
        }
    });
}

SmoothFunction SmoothFunction::cosine() {
    return SmoothFunction("cos", INT_MAX, [](int order, double x) {
        switch (order % 4) {
            case 0: return std::cos(x);
            case 1: return -std::sin(x);
            case 2: return -std::cos(x);
            default: return std::sin(x);
        }
    });
}

SmoothFunction SmoothFunction::exponential(double a) {
    return SmoothFunction("exp", INT_MAX,
                          [a](int order, double x) { return std::pow(a, order) * std::exp(a * x); });
}

SmoothFunction SmoothFunction::hyperbolic_tangent(int max_order) {
    // d^n tanh = P_n(tanh) with P_0(t) = t and P_{n+1}(t) = P_n'(t) (1 - t^2)
    auto table = std::make_shared<std::vector<std::vector<double>>>();
    table->push_back({0.0, 1.0});
    for (int n = 0; n < max_order; ++n) {
        const auto& p = table->back();
        std::vector<double> dp(p.size() > 1 ? p.size() - 1 : 1, 0.0);
        for (std::size_t j = 1; j < p.size(); ++j) dp[j - 1] = j * p[j];
        std::vector<double> next(dp.size() + 2, 0.0);
        for (std::size_t j = 0; j < dp.size(); ++j) {
            next[j] += dp[j];
            next[j + 2] -= dp[j];
        }
        table->push_back(std::move(next));
    }
    return SmoothFunction("tanh", max_order, [table](int order, double x) {
        const double t = std::tanh(x);
        const auto& p = (*table)[order];
        double acc = 0.0;
        for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
        return acc;
    });
}

}  // namespace depclt
