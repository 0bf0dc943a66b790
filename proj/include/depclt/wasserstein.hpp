#pragma once

// One-dimensional Wasserstein distances through the quantile coupling, normal
// distribution primitives, the Stein equation solver, and power-law fitting.

#include <functional>
#include <vector>

namespace depclt {

double normal_cdf(double x);
double normal_ccdf(double x);
double normal_pdf(double x);
// Rational initial guess refined by one Halley step; u in (0, 1).
double normal_quantile(double u);

enum class WpMethod { Midpoint, Quadrature };

// W_p between the empirical law of `sorted` and N(0, 1).
double wp_vs_normal(const std::vector<double>& sorted, double p, WpMethod method = WpMethod::Midpoint);

// W_p between two empirical laws (monotone coupling).
double wp_two_sample(const std::vector<double>& a_sorted, const std::vector<double>& b_sorted, double p);

// Solution f_h of f'(w) - w f(w) = h(w) - E h(Z).
class SteinSolver {
public:
    explicit SteinSolver(std::function<double(double)> h, int hermite_nodes = 64);

    double normal_expectation() const { return nh_; }
    double solve(double w) const;
    // f'(w) - w f(w) - h(w) + Nh with f' from a five-point stencil.
    double residual(double w, double step = 1e-5) const;
    bool converged() const { return converged_; }

private:
    std::function<double(double)> h_;
    double nh_ = 0.0;
    mutable bool converged_ = true;
};

double stein_solve(const std::function<double(double)>& h, double w);
double stein_residual(const std::function<double(double)>& h, double w);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
};

// Least squares of log(distance) on log(size).
RateFit fit_rate(const std::vector<double>& sizes, const std::vector<double>& distances);

}  // namespace depclt
