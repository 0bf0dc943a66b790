#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "depclt/combinatorics.hpp"
#include "depclt/errors.hpp"

using namespace depclt;

namespace {

// Compositions of t from the t-1 cut points: bit b set means a cut after b+1.
std::set<std::vector<int>> compositions_by_cuts(int t) {
    std::set<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << (t - 1)); ++mask) {
        std::vector<int> parts;
        int len = 1;
        for (int b = 0; b < t - 1; ++b) {
            if (mask & (1u << b)) {
                parts.push_back(len);
                len = 1;
            } else {
                ++len;
            }
        }
        parts.push_back(len);
        out.insert(parts);
    }
    return out;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// B_{n,k} = sum_i C(n-1, i-1) x_i B_{n-i, k-1}.
double bell_recursive(int n, int k, const std::vector<double>& x) {
    if (n == 0 && k == 0) return 1.0;
    if (n == 0 || k == 0) return 0.0;
    double acc = 0.0;
    for (int i = 1; i <= n - k + 1; ++i) acc += binom(n - 1, i - 1) * x[i - 1] * bell_recursive(n - i, k - 1, x);
    return acc;
}

// mu_n = sum_k C(n-1, k-1) kappa_k mu_{n-k}.
std::vector<double> moments_recursive(const std::vector<double>& kappa) {
    const int n = static_cast<int>(kappa.size());
    std::vector<double> mu(n + 1, 0.0);
    mu[0] = 1.0;
    for (int r = 1; r <= n; ++r)
        for (int k = 1; k <= r; ++k) mu[r] += binom(r - 1, k - 1) * kappa[k - 1] * mu[r - k];
    return mu;
}

}  // namespace

TEST_CASE("composition counts and order") {
    for (int t = 1; t <= 10; ++t) {
        const auto comps = enumerate_compositions(t);
        CHECK(comps.size() == (std::size_t{1} << (t - 1)));
        std::set<std::vector<int>> got;
        for (const auto& c : comps) {
            CHECK(c.total() == t);
            got.insert(c.parts);
        }
        CHECK(got == compositions_by_cuts(t));
        for (std::size_t i = 1; i < comps.size(); ++i) CHECK(comps[i - 1].parts < comps[i].parts);
    }
    CHECK(enumerate_compositions(3).front().parts == std::vector<int>{1, 1, 1});
}

TEST_CASE("restricted compositions") {
    CHECK(enumerate_restricted_compositions(3).size() == 2);
    CHECK(enumerate_restricted_compositions(4).size() == 3);
    for (int t = 2; t <= 10; ++t) {
        std::size_t expect = 0;
        for (const auto& parts : compositions_by_cuts(t)) {
            bool ok = true;
            for (std::size_t i = 0; i + 1 < parts.size(); ++i) ok &= parts[i] >= 2;
            expect += ok;
        }
        CHECK(enumerate_restricted_compositions(t).size() == expect);
    }
}

TEST_CASE("compositional expectation on a two-point space") {
    FiniteLaw law({0.25, 0.75});
    std::vector<RandomVar> ys{{1.0, 2.0}, {3.0, -1.0}, {0.5, 4.0}};
    // [2,1]: E[Y1 Y2] E[Y3]
    const double e12 = 0.25 * 3.0 + 0.75 * -2.0;
    const double e3 = 0.25 * 0.5 + 0.75 * 4.0;
    CHECK(compositional_expectation(law, Composition{{2, 1}}, ys) == doctest::Approx(e12 * e3).epsilon(1e-15));
    CHECK_THROWS_AS(compositional_expectation(law, Composition{{2, 2}}, ys), DomainError);
}

TEST_CASE("partial Bell polynomials match the recursion") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(10);
        for (auto& v : x) v = U(rng);
        for (int n = 1; n <= 10; ++n)
            for (int j = 1; j <= n; ++j)
                CHECK(bell_partial<double>(n, j, x) == doctest::Approx(bell_recursive(n, j, x)).epsilon(1e-11));
    }
    std::vector<double> ones(6, 1.0);
    // B_{n,k}(1,1,..) are Stirling numbers of the second kind.
    CHECK(bell_partial<double>(6, 3, ones) == 90.0);
    CHECK(bell_complete<double>(5, ones) == 52.0);
}

TEST_CASE("moments and cumulants") {
    SUBCASE("normal cumulants give double factorials") {
        const auto mu = moments_from_cumulants<double>({0.0, 1.0, 0, 0, 0, 0, 0, 0, 0, 0});
        const double want[] = {1, 0, 1, 0, 3, 0, 15, 0, 105, 0, 945};
        for (int r = 0; r <= 10; ++r) CHECK(mu[r] == doctest::Approx(want[r]));
    }
    SUBCASE("independent recursion oracle") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<double> kappa(10);
            for (auto& v : kappa) v = U(rng);
            const auto a = moments_from_cumulants(kappa);
            const auto b = moments_recursive(kappa);
            for (int r = 0; r <= 10; ++r) CHECK(a[r] == doctest::Approx(b[r]).epsilon(1e-11));
        }
    }
    SUBCASE("round trip to 1e-12") {
        // double loses ~1e-10 to cancellation at order 10; long double keeps 1e-12
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> U(-0.8, 0.8);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<long double> kappa(10);
            for (auto& v : kappa) v = U(rng);
            const auto back = cumulants_from_moments(moments_from_cumulants(kappa));
            for (int r = 0; r < 10; ++r) CHECK(std::abs(static_cast<double>(back[r] - kappa[r])) < 1e-12);
        }
    }
    CHECK_THROWS_AS(cumulants_from_moments<double>({2.0, 1.0}), DomainError);
}

TEST_CASE("Hankel determinants") {
    // Normal moments: H_j = prod_{i<=j} i!.
    const auto mu = moments_from_cumulants<double>({0, 1, 0, 0, 0, 0, 0, 0, 0, 0});
    const auto H = hankel_determinants(mu);
    double superfact = 1.0, fact = 1.0;
    for (int j = 0; j <= 5; ++j) {
        if (j > 0) fact *= j;
        superfact *= fact;
        CHECK(H[j] > 0.0);
        CHECK(H[j] == doctest::Approx(superfact).epsilon(1e-12));
    }
    CHECK(H[2] == doctest::Approx(2.0));

    SUBCASE("two-point law is singular from order 2 on") {
        std::vector<double> m(7);
        for (int r = 0; r <= 6; ++r) m[r] = 0.5 * std::pow(1.0, r) + 0.5 * std::pow(-1.0, r);
        const auto chk = hamburger_check(m);
        CHECK(chk.feasible);
        CHECK(chk.boundary);
        CHECK(std::abs(chk.hankel[2]) < 1e-12);
    }
    SUBCASE("negative variance is infeasible") {
        CHECK_FALSE(hamburger_feasible({1.0, 1.0, 0.5}));
    }
    SUBCASE("pivoting fallback agrees on an indefinite sequence") {
        const std::vector<double> m{1.0, 0.0, 1.0, 10.0, 2.0};
        // H_2 = mu0 mu2 mu4 - mu0 mu3^2 - mu2^3 = 2 - 100 - 1
        CHECK(hankel_determinants(m)[2] == doctest::Approx(-99.0));
    }
}
