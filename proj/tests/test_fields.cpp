#include "doctest.h"

#include <cmath>
#include <sstream>

#include "depclt/errors.hpp"
#include "depclt/fields.hpp"

using namespace depclt;

namespace {

TinyField rademacher_sum(int n) {
    return TinyField(std::vector<DiscreteVar>(n, DiscreteVar::rademacher()), IndexSet::line(n),
                     [](int i, std::span<const double> b) { return b[i]; });
}

double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

double sample_var(const std::vector<double>& v) {
    const double mu = sample_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return s / (v.size() - 1);
}

}  // namespace

TEST_CASE("exact expectations on a tiny field") {
    const auto skew = DiscreteVar::two_point(2.0, -1.0, 1.0 / 3.0);
    TinyField tf({skew, DiscreteVar::rademacher(), skew}, IndexSet::line(2),
                 [](int i, std::span<const double> b) { return b[i] * b[i + 1] + b[i]; });
    CHECK(tf.outcomes() == 8);
    CHECK(exact_expectation(tf, [](std::span<const double>) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-15));
    for (int i = 0; i < tf.size(); ++i) CHECK(std::abs(tf.expect(tf.X(i))) < 1e-15);
    CHECK(cumulant_of_sum(tf, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(cumulant_of_sum(tf, 2) - 1.0) < 1e-10);
    CHECK(tf.expect(tf.W() * tf.W()) == doctest::Approx(1.0));
    CHECK(moments_of_sum(tf, 2)[2] == doctest::Approx(1.0));
}

TEST_CASE("cumulants of normalized independent sums") {
    CHECK(cumulant_of_sum(rademacher_sum(3), 4) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));

    // kappa_{j+2}(q^{-1/2} sum xi) = q^{-j/2} kappa_{j+2}(xi); xi is a centered skew two-point law.
    const double p = 0.2, a = 1.0 - p, b = -p;  // Bernoulli(p) - p, variance p(1-p)
    const auto xi = DiscreteVar::two_point(a, b, p);
    const double var = p * (1 - p);
    const double k3 = p * (1 - p) * (1 - 2 * p) / std::pow(var, 1.5);
    const double k4 = p * (1 - p) * (1 - 6 * p * (1 - p)) / (var * var);
    for (int q = 1; q <= 4; ++q) {
        TinyField tf(std::vector<DiscreteVar>(q, xi), IndexSet::line(q),
                     [](int i, std::span<const double> base) { return base[i]; });
        CHECK(cumulant_of_sum(tf, 3) == doctest::Approx(k3 / std::sqrt(q)).epsilon(1e-10));
        CHECK(cumulant_of_sum(tf, 4) == doctest::Approx(k4 / q).epsilon(1e-10));
    }
}

TEST_CASE("outcome budget and degenerate fields") {
    std::vector<DiscreteVar> many(21, DiscreteVar::rademacher());
    CHECK_THROWS_AS(TinyField(many, IndexSet::line(1), [](int, std::span<const double> b) { return b[0]; }),
                    BudgetError);
    TinyField zero({DiscreteVar::rademacher()}, IndexSet::line(2), [](int, std::span<const double>) { return 0.0; });
    CHECK(zero.degenerate());
    CHECK(exact_expectation(zero, zero.W()) == 0.0);
}

TEST_CASE("exact variances") {
    MovingWindow iid;
    iid.m = 0;
    CHECK(variance_of_sum(iid, IndexSet::line(50)).value == doctest::Approx(50.0));

    MovingWindow win;  // mean of 3 noises, neighbors share one noise
    win.m = 1;
    for (int n : {3, 10, 200}) {
        const double closed = n / 3.0 + 2.0 * (n - 1) / 9.0;
        CHECK(variance_of_sum(win, IndexSet::line(n)).value == doctest::Approx(closed).epsilon(1e-12));
    }
    SUBCASE("Monte Carlo cross-check at 3 SE") {
        const int n = 40, reps = 20000;
        SumSampler s(win, IndexSet::line(n));
        const auto draws = s.draw_many(17, reps);
        const double v = sample_var(draws);
        CHECK(std::abs(v - 1.0) < 3.0 * std::sqrt(2.0 / reps));
    }
    CHECK_THROWS_AS(variance_of_sum(UStat{1, UKernel::Sum, {}}, IndexSet::line(1)), DegeneracyError);
}

TEST_CASE("sampling is deterministic and m-dependent") {
    MovingWindow win;
    win.m = 1;
    const auto T = IndexSet::line(1'000'002);
    const auto a = sample_field(win, T, 99);
    const auto b = sample_field(win, T, 99);
    CHECK(a.values == b.values);
    CHECK(sample_field(win, IndexSet::line(10), 100).values != sample_field(win, IndexSet::line(10), 99).values);

    // Lag-2 covariance vanishes; lag-1 covariance is 1/9.
    const std::size_t R = 1'000'000;
    double lag1 = 0.0, lag2 = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
        lag1 += a.values[i] * a.values[i + 1];
        lag2 += a.values[i] * a.values[i + 2];
    }
    lag1 /= R;
    lag2 /= R;
    CHECK(std::abs(lag2) < 3.0 / std::sqrt(static_cast<double>(R)));
    CHECK(std::abs(lag1 - 1.0 / 9.0) < 3.0 / std::sqrt(static_cast<double>(R)));

    SUBCASE("m = 0 gives independent unit normals") {
        MovingWindow iid;
        iid.m = 0;
        const auto s = sample_field(iid, IndexSet::line(200'000), 4);
        CHECK(std::abs(sample_mean(s.values)) < 4.0 / std::sqrt(2e5));
        CHECK(std::abs(sample_var(s.values) - 1.0) < 0.02);
    }
}

TEST_CASE("window fields on a plane") {
    MovingWindow win;
    win.d = 2;
    win.m = 1;
    const auto T = IndexSet::box({6, 6});
    const auto s = sample_field(win, T, 3);
    CHECK(s.values.size() == 36);
    CHECK(s.sigma > 0.0);
}

TEST_CASE("U-statistic kernels") {
    const NoiseLaw normal{NoiseKind::Normal};
    CHECK(ustat_kernel(UKernel::SumProduct, 2.0, 3.0) == 11.0);

    SUBCASE("x + y reduces to a scaled i.i.d. sum") {
        const auto us = ustat_sample(6, UKernel::Sum, normal, 8);
        CHECK(us.tuples.size() == 15);
        CHECK_FALSE(us.degenerate);
        CHECK(us.var_g == doctest::Approx(1.0).epsilon(0.02));
    }
    SUBCASE("x y is degenerate") {
        const auto us = ustat_sample(6, UKernel::Product, normal, 8);
        CHECK(us.degenerate);
    }
    SUBCASE("x + y + x y has projection g(x) = x") {
        const auto us = ustat_sample(6, UKernel::SumProduct, normal, 8);
        CHECK_FALSE(us.degenerate);
        CHECK(std::abs(us.var_g - 1.0) < 3.0 * us.var_g_se + 1e-3);
    }
    SUBCASE("fast sampler is standardized") {
        SumSampler s(UStat{30, UKernel::SumProduct, normal}, IndexSet::line(30));
        const auto draws = s.draw_many(5, 20000, 2);
        CHECK(std::abs(sample_mean(draws)) < 0.05);
        CHECK(std::abs(sample_var(draws) - 1.0) < 0.05);
    }
}

TEST_CASE("replicate streams do not depend on the thread count") {
    MovingWindow prod;
    prod.m = 1;
    prod.kernel = WindowKernel::Product;
    SumSampler s(prod, IndexSet::line(16));
    CHECK(s.draw_many(2, 300, 1) == s.draw_many(2, 300, 3));
    const auto draws = s.draw_many(2, 40000, 1);
    CHECK(std::abs(sample_var(draws) - 1.0) < 0.05);
}

TEST_CASE("CSV output") {
    std::ostringstream os;
    FieldSample s{{0.1, -2.0}, 1.5, 7};
    write_field_csv(os, IndexSet::line(2), s);
    CHECK(os.str().rfind("# depclt v1", 0) == 0);
    CHECK(format_real(0.1) == "0.10000000000000001");
}
