#include "depclt/outcome.hpp"

#include <cmath>

#include "depclt/errors.hpp"

namespace depclt {

FiniteLaw::FiniteLaw(std::vector<double> probabilities) : prob_(std::move(probabilities)) {
    double total = 0.0;
    for (double p : prob_) {
        if (!(p >= 0.0)) throw DomainError("negative or NaN outcome probability");
        total += p;
    }
    if (prob_.empty() || std::abs(total - 1.0) > 1e-12)
        throw DomainError("outcome probabilities must sum to 1");
}

double FiniteLaw::expect(const RandomVar& y) const {
    if (y.size() != prob_.size()) throw DomainError("random variable does not live on this law");
    double acc = 0.0;
    for (std::size_t w = 0; w < prob_.size(); ++w) acc += prob_[w] * y[w];
    return acc;
}

namespace {

void require_same(const RandomVar& a, const RandomVar& b) {
    if (a.size() != b.size()) throw DomainError("random variables on different outcome spaces");
}

}  // namespace

RandomVar product(std::span<const RandomVar> ys) {
    if (ys.empty()) throw DomainError("empty product");
    RandomVar out = ys[0];
    for (std::size_t j = 1; j < ys.size(); ++j) {
        require_same(out, ys[j]);
        for (std::size_t w = 0; w < out.size(); ++w) out[w] *= ys[j][w];
    }
    return out;
}

RandomVar operator*(const RandomVar& a, const RandomVar& b) {
    require_same(a, b);
    RandomVar out(a.size());
    for (std::size_t w = 0; w < a.size(); ++w) out[w] = a[w] * b[w];
    return out;
}

RandomVar operator+(const RandomVar& a, const RandomVar& b) {
    require_same(a, b);
    RandomVar out(a.size());
    for (std::size_t w = 0; w < a.size(); ++w) out[w] = a[w] + b[w];
    return out;
}

RandomVar operator-(const RandomVar& a, const RandomVar& b) {
    require_same(a, b);
    RandomVar out(a.size());
    for (std::size_t w = 0; w < a.size(); ++w) out[w] = a[w] - b[w];
    return out;
}

RandomVar operator*(double c, const RandomVar& a) {
    RandomVar out(a.size());
    for (std::size_t w = 0; w < a.size(); ++w) out[w] = c * a[w];
    return out;
}

RandomVar operator-(const RandomVar& a, double c) {
    RandomVar out(a.size());
    for (std::size_t w = 0; w < a.size(); ++w) out[w] = a[w] - c;
    return out;
}

}  // namespace depclt
