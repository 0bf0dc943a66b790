#pragma once

// Finite probability spaces. A random variable is the vector of its values,
// one entry per outcome, so products and sums are elementwise.

#include <cstddef>
#include <span>
#include <vector>

namespace depclt {

using RandomVar = std::vector<double>;

class FiniteLaw {
public:
    FiniteLaw() = default;
    explicit FiniteLaw(std::vector<double> probabilities);

    std::size_t size() const { return prob_.size(); }
    double probability(std::size_t w) const { return prob_[w]; }
    const std::vector<double>& probabilities() const { return prob_; }

    double expect(const RandomVar& y) const;
    RandomVar constant(double c) const { return RandomVar(prob_.size(), c); }

private:
    std::vector<double> prob_;
};

RandomVar product(std::span<const RandomVar> ys);
RandomVar operator*(const RandomVar& a, const RandomVar& b);
RandomVar operator+(const RandomVar& a, const RandomVar& b);
RandomVar operator-(const RandomVar& a, const RandomVar& b);
RandomVar operator*(double c, const RandomVar& a);
RandomVar operator-(const RandomVar& a, double c);

}  // namespace depclt
