#include "depclt/wasserstein.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <gsl/gsl_fit.h>
#include <numbers>

#include "depclt/errors.hpp"
#include "depclt/quadrature.hpp"

namespace depclt {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_ccdf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

namespace {

// Acklam's rational approximation for the lower half, relative error ~1e-9.
double quantile_guess(double u) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    if (u < 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(u));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = u - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("normal_quantile: argument must lie in (0, 1)");
    if (u > 0.5) return -normal_quantile(1.0 - u);
    double x = quantile_guess(u);
    const double e = normal_cdf(x) - u;
    const double t = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= t / (1.0 + 0.5 * x * t);
    return x;
}

namespace {

void require_sorted(const std::vector<double>& s) {
    if (s.size() < 2) throw DomainError("sample needs at least two values");
    if (!std::is_sorted(s.begin(), s.end())) throw DomainError("sample must be sorted ascending");
}

constexpr double kTailClamp = 1e-12;

}  // namespace

double wp_vs_normal(const std::vector<double>& sorted, double p, WpMethod method) {
    require_sorted(sorted);
    if (!(p >= 1.0)) throw DomainError("wp_vs_normal: p must be at least 1");
    const std::size_t n = sorted.size();
    double acc = 0.0;
    if (method == WpMethod::Midpoint) {
        for (std::size_t i = 0; i < n; ++i) {
            const double z = normal_quantile((i + 0.5) / n);
            acc += std::pow(std::abs(sorted[i] - z), p);
        }
        return std::pow(acc / n, 1.0 / p);
    }

    // Panel i covers quantile levels ((i-1)/n, i/n]. Substituting u = Phi(z)
    // turns each panel into an integral of |x_i - z|^p phi(z) over a z-interval,
    // which is smooth apart from the kink at z = x_i where the panel is split.
    static const QuadratureRule rule = gauss_legendre(16);
    const double zmin = normal_quantile(kTailClamp), zmax = -zmin;
    auto piece = [&](double x, double a, double b) {
        if (!(b > a)) return 0.0;
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        double s = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double z = mid + half * rule.nodes[k];
            s += rule.weights[k] * std::pow(std::abs(x - z), p) * normal_pdf(z);
        }
        return half * s;
    };
    double lo = zmin;
    for (std::size_t i = 0; i < n; ++i) {
        const double hi = (i + 1 == n) ? zmax : normal_quantile(static_cast<double>(i + 1) / n);
        const double x = sorted[i];
        if (x > lo && x < hi)
            acc += piece(x, lo, x) + piece(x, x, hi);
        else
            acc += piece(x, lo, hi);
        lo = hi;
    }
    return std::pow(acc, 1.0 / p);
}

double wp_two_sample(const std::vector<double>& a, const std::vector<double>& b, double p) {
    require_sorted(a);
    require_sorted(b);
    if (!(p >= 1.0)) throw DomainError("wp_two_sample: p must be at least 1");
    if (a.size() == b.size()) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), p);
        return std::pow(acc / a.size(), 1.0 / p);
    }
    // Piecewise-linear quantile through (j - 1/2)/n, flat beyond the outer midpoints.
    auto quantile = [](const std::vector<double>& s, double u) {
        const double pos = u * s.size() - 0.5;
        if (pos <= 0.0) return s.front();
        if (pos >= s.size() - 1.0) return s.back();
        const auto j = static_cast<std::size_t>(pos);
        const double frac = pos - j;
        return s[j] + frac * (s[j + 1] - s[j]);
    };
    const std::size_t N = std::max(a.size(), b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double u = (i + 0.5) / N;
        acc += std::pow(std::abs(quantile(a, u) - quantile(b, u)), p);
    }
    return std::pow(acc / N, 1.0 / p);
}

SteinSolver::SteinSolver(std::function<double(double)> h, int hermite_nodes) : h_(std::move(h)) {
    const QuadratureRule gh = gauss_hermite(hermite_nodes);
    double acc = 0.0;
    for (std::size_t k = 0; k < gh.nodes.size(); ++k) acc += gh.weights[k] * h_(std::numbers::sqrt2 * gh.nodes[k]);
    nh_ = acc / std::sqrt(std::numbers::pi);
}

double SteinSolver::solve(double w) const {
    // f(w) = int_{-inf}^w e^{(w^2-t^2)/2} g(t) dt = -int_w^inf e^{(w^2-t^2)/2} g(t) dt with
    // g = h - Nh. Writing t = w -/+ s, the kernel becomes exp(-|w| s - s^2/2) on the
    // side facing the origin, which never overflows.
    const double sign = w <= 0.0 ? 1.0 : -1.0;
    auto integrand = [&](double s) {
        const double t = w - sign * s;
        return std::exp(-std::abs(w) * s - 0.5 * s * s) * (h_(t) - nh_);
    };
    double err = 0.0;
    const double upper = 12.0;  // exp(-72) times polynomial growth is below double resolution
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, upper, 20, 1e-15, &err);
    if (err > 1e-11 * std::max(1.0, std::abs(value))) converged_ = false;
    return sign * value;
}

double SteinSolver::residual(double w, double step) const {
    const double d = (solve(w - 2 * step) - 8.0 * solve(w - step) + 8.0 * solve(w + step) - solve(w + 2 * step)) /
                     (12.0 * step);
    return d - w * solve(w) - h_(w) + nh_;
}

double stein_solve(const std::function<double(double)>& h, double w) { return SteinSolver(h).solve(w); }

double stein_residual(const std::function<double(double)>& h, double w) { return SteinSolver(h).residual(w); }

RateFit fit_rate(const std::vector<double>& sizes, const std::vector<double>& distances) {
    if (sizes.size() != distances.size() || sizes.size() < 3)
        throw DomainError("fit_rate: need at least three (size, distance) pairs");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (!(sizes[i] > 0.0 && distances[i] > 0.0)) throw DomainError("fit_rate: sizes and distances must be positive");
        x.push_back(std::log(sizes[i]));
        y.push_back(std::log(distances[i]));
    }
    RateFit fit;
    double cov00, cov01, cov11, sumsq;
    gsl_fit_linear(x.data(), 1, y.data(), 1, x.size(), &fit.intercept, &fit.slope, &cov00, &cov01, &cov11, &sumsq);
    fit.stderr_slope = std::sqrt(cov11);
    return fit;
}

}  // namespace depclt
