#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "depclt/combinatorics.hpp"
#include "depclt/errors.hpp"
#include "depclt/genogram.hpp"

using namespace depclt;

namespace {

// Three branches off the root; a negative vertex under v[4] carries two children.
Genogram g1() { return Genogram({0, 1, 1, 1, 4, 5, 5}, {0, 2, 1, 0, -1, 2, 0}); }

// A chain 1-2 with two subtrees under v[2]; v[7] is negative under v[6].
Genogram g2() { return Genogram({0, 1, 2, 2, 4, 4, 6}, {0, 0, 5, 3, 2, 1, -1}); }

IdSet unite(const IdSet& a, const IdSet& b) {
    IdSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

IdSet sorted(IdSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

// Every (parent, ids) array of order k with identifiers in -1..cap that passes validation.
std::set<std::string> brute_force_genograms(int k, int cap) {
    std::set<std::string> out;
    std::vector<int> p(k, 0), s(k, 0);
    auto rec = [&](auto&& self, int j) -> void {
        if (j == k) {
            if (validate(p, s).valid) out.insert(Genogram(p, s).str());
            return;
        }
        for (int par = 1; par <= j; ++par)
            for (int id = -1; id <= cap; ++id) {
                p[j] = par;
                s[j] = id;
                self(self, j + 1);
            }
    };
    rec(rec, 1);
    return out;
}

std::vector<RandomVar> random_vars(const FiniteLaw& law, int t, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<RandomVar> ys(t, RandomVar(law.size()));
    for (auto& y : ys)
        for (double& v : y) v = U(gen);
    return ys;
}

// u(j) and leaf counts recomputed from the raw arrays.
int u_of(const Genogram& h, int j) {
    while (h.id(j) < 0) j = h.parent(j);
    return j;
}

int leaves_of(const Genogram& h) {
    std::vector<int> kids(h.size() + 1, 0);
    for (int j = 2; j <= h.size(); ++j) ++kids[h.parent(j)];
    return static_cast<int>(std::count(kids.begin() + 1, kids.end(), 0));
}

// m-dependent field with a skewed last base variable.
TinyField chain_field(int n, int m) {
    std::vector<DiscreteVar> base(n + m, DiscreteVar::rademacher());
    base.back() = DiscreteVar::two_point(2.0, -1.0, 1.0 / 3.0);
    return TinyField(base, IndexSet::line(n), [m](int i, std::span<const double> b) {
        return b[i] + 0.3 * b[i] * b[i + m] + 0.5 * b[i + m];
    });
}

}  // namespace

TEST_CASE("validation rules") {
    CHECK(validate(g1().parents(), g1().ids()).valid);
    CHECK(validate(g2().parents(), g2().ids()).valid);

    // negative vertex with a sibling
    auto r = validate({0, 1, 2, 2}, {0, 0, 1, -1});
    CHECK_FALSE(r.valid);
    CHECK(std::find(r.violated.begin(), r.violated.end(), 'c') != r.violated.end());
    // negative child of the root
    CHECK(validate({0, 1}, {0, -1}).violated == std::vector<char>{'c'});
    // root identifier
    CHECK(validate({0}, {1}).violated == std::vector<char>{'b'});
    // siblings out of order
    CHECK(validate({0, 1, 1}, {0, 1, 2}).violated == std::vector<char>{'d'});
    // labeling not depth-first: v[3] hangs from the root although v[2] has a child v[4]
    CHECK(validate({0, 1, 1, 2}, {0, 2, 1, 0}).violated == std::vector<char>{'a'});
    CHECK(validate({0, 2}, {0, 0}).violated == std::vector<char>{'s'});
    CHECK_THROWS_AS(Genogram({0, 1}, {0, -1}), DomainError);
}

TEST_CASE("progenitor and u labels") {
    const auto a = g1(), b = g2();
    for (int j = 1; j <= 7; ++j) CHECK(progenitor(a, j) == 1);
    const int g2_prog[] = {1, 1, 1, 1, 4, 4, 6};
    for (int j = 1; j <= 7; ++j) CHECK(progenitor(b, j) == g2_prog[j - 1]);
    for (int j = 1; j <= 7; ++j) CHECK(u_index(a, j) == (j == 5 ? 4 : j));
    CHECK(u_index(b, 7) == 6);
    CHECK(a.leaves() == 4);
    CHECK(a.negatives() == 1);
    CHECK(a.children(5) == std::vector<int>{6, 7});
    CHECK(b.ancestors(6) == std::vector<int>{1, 2, 4});
}

TEST_CASE("text form round trips") {
    CHECK(g2().str() == "p=[.,1,2,2,4,4,6]; s=[0,0,5,3,2,1,-1]");
    CHECK(Genogram::parse(g1().str()) == g1());
    CHECK(g1().prefix(4) == Genogram({0, 1, 1, 1}, {0, 2, 1, 0}));
    CHECK(g1().extends(g1().prefix(5)));
    CHECK_FALSE(g1().extends(g2().prefix(3)));
    CHECK_THROWS_AS(Genogram::parse("p=[1]; s=[0]"), DomainError);
}

TEST_CASE("growth") {
    const auto b = g2();
    const auto sites = growth_sites(b);
    REQUIRE(sites.size() == 3);
    CHECK(sites[0].vertex == 2);
    CHECK(sites[0].id_limit == 3);
    CHECK(sites[1].vertex == 4);
    CHECK(sites[1].id_limit == 1);
    CHECK(sites[2].vertex == 7);
    CHECK_FALSE(sites[2].id_limit.has_value());
    CHECK_THROWS_AS(grow(b, 4, 1), DomainError);
    CHECK_THROWS_AS(grow(b, 6, 0), DomainError);
    CHECK_THROWS_AS(grow(b, 3, 0), DomainError);
    CHECK(glue(b, 0) == b);
    CHECK_THROWS_AS(glue(Genogram{}, 1), DomainError);

    // every grown or glued genogram validates
    for (const auto& g : enumerate(4, 3).all) {
        for (const auto& site : growth_sites(g)) {
            const int top = site.id_limit ? *site.id_limit - 1 : 4;
            for (int s = 0; s <= top; ++s) {
                const auto h = grow(g, site.vertex, s);
                CHECK(validate(h.parents(), h.ids()).valid);
                const auto hh = glue(h, 2);
                CHECK(validate(hh.parents(), hh.ids()).valid);
            }
        }
    }
}

TEST_CASE("enumeration is complete") {
    for (int k = 1; k <= 5; ++k) {
        const int cap = 3;
        const auto cls = enumerate(k, cap);
        std::set<std::string> got;
        for (const auto& g : cls.all) got.insert(g.str());
        CHECK(got.size() == cls.all.size());
        CHECK(got == brute_force_genograms(k, cap));
        CHECK(cls.positive.size() + cls.nonpositive.size() == cls.all.size());
        for (const auto& g : cls.last_positive) {
            CHECK(g.has_positive());
            CHECK(g.id(k) >= 1);
        }
        if (k >= 2) CHECK(cls.nonpositive.size() == (std::size_t{1} << (k - 2)));
    }
}

TEST_CASE("ordered tree counts are Catalan numbers") {
    const long long catalan[] = {1, 1, 2, 5, 14, 42};
    for (int k = 1; k <= 6; ++k) {
        CHECK(count_ordered_trees(k) == catalan[k - 1]);
        std::set<std::vector<int>> shapes;
        for (const auto& g : enumerate(k, k).all) shapes.insert(g.parents());
        CHECK(static_cast<long long>(shapes.size()) == catalan[k - 1]);
    }
}

TEST_CASE("expansion coefficients") {
    const Genogram root;
    CHECK(coefficients(root, root).a == Rational(1));
    CHECK(coefficients(g1(), g1()).a == Rational(1));
    CHECK(b_coefficient(grow(root, 1, 0)) == Rational(-1));
    CHECK(coefficients(grow(g1(), 7, 3), g1()).b == Rational(-1));
    CHECK_THROWS_AS(coefficients(g1(), g2()), DomainError);

    for (int k = 2; k <= 6; ++k) {
        for (const auto& h : enumerate(k, 4).all) {
            const auto c = coefficients(h, root);
            CHECK(boost::abs(c.b) <= Rational(1));
            CHECK(c.a == -c.b / Rational(h.size() + 1 - u_index(h, h.size())));
            // sign (-1)^{1 + gamma - 1 + tau} and the product of 1/(j+1-u(j)) over 2..|H|-1
            Rational expect((leaves_of(h) - 1 + h.negatives()) % 2 == 0 ? -1 : 1);
            for (int j = 2; j <= h.size() - 1; ++j) expect /= (j + 1 - u_of(h, j));
            CHECK(c.b == expect);
        }
    }
}

TEST_CASE("generalized covariance") {
    FiniteLaw law({0.25, 0.25, 0.5});
    RandomVar a{1.0, 0.0, 2.0}, b{0.0, 4.0, 1.0};
    CHECK(gen_cov_star(law, std::vector<RandomVar>{a}) == doctest::Approx(1.25));
    // E[ab] - E[a]E[b] = 1 - 1.25 * 1.5
    CHECK(gen_cov_star(law, std::vector<RandomVar>{a, b}) == doctest::Approx(1.0 - 1.25 * 1.5));

    std::mt19937_64 gen(21);
    for (int t = 1; t <= 5; ++t) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto ys = random_vars(law, t, gen);
            double expansion = 0.0;
            for (const auto& eta : enumerate_compositions(t))
                expansion += (eta.parts.size() % 2 == 1 ? 1.0 : -1.0) * compositional_expectation(law, eta, ys);
            CHECK(std::abs(gen_cov_star(law, ys) - expansion) < 1e-12);
            CHECK(std::abs(law.expect(gen_cov(law, ys))) < 1e-14);
        }
    }
}

TEST_CASE("branch structure of the expectation operator") {
    SUBCASE("first example") {
        const auto br = branch_structure(g1());
        REQUIRE(br.size() == 4);
        CHECK(br[0].first == 1);
        CHECK(br[0].blocks.parts == std::vector<int>{1, 1});
        CHECK(br[1].first == 3);
        CHECK(br[1].blocks.parts == std::vector<int>{1});
        CHECK(br[2].first == 4);
        CHECK(br[2].blocks.parts == std::vector<int>{2, 1});
        CHECK(br[3].first == 7);
        CHECK(br[3].blocks.parts == std::vector<int>{1});
    }
    SUBCASE("second example") {
        const auto br = branch_structure(g2());
        REQUIRE(br.size() == 3);
        CHECK(br[0].blocks.parts == std::vector<int>{1, 1, 1});
        CHECK(br[1].first == 4);
        CHECK(br[1].blocks.parts == std::vector<int>{1, 1});
        CHECK(br[2].first == 6);
        CHECK(br[2].blocks.parts == std::vector<int>{2});
    }
    SUBCASE("numerical value matches the factored form") {
        std::mt19937_64 gen(8);
        FiniteLaw law({0.1, 0.2, 0.3, 0.4});
        const auto y = random_vars(law, 7, gen);
        auto dstar = [&](std::vector<RandomVar> v) { return gen_cov_star(law, v); };
        const double e1 = dstar({y[0], y[1]}) * dstar({y[2]}) * dstar({y[3] * y[4], y[5]}) * dstar({y[6]});
        CHECK(epsilon_G(g1(), law, y) == doctest::Approx(e1).epsilon(1e-13));
        const double e2 = dstar({y[0], y[1], y[2]}) * dstar({y[3], y[4]}) * dstar({y[5] * y[6]});
        CHECK(epsilon_G(g2(), law, y) == doctest::Approx(e2).epsilon(1e-13));
        CHECK(epsilon_G(Genogram{}, law, std::vector<RandomVar>{y[0]}) == doctest::Approx(law.expect(y[0])));
    }
}

TEST_CASE("constraint sets on a line") {
    const auto T = IndexSet::line(14);
    const int m = 1;
    const std::vector<int> pre{6, 7, 5, 8, 4, 6};
    auto N = [&](std::vector<int> labels, int s) {
        IdSet J;
        for (int l : labels) J.push_back(pre[l - 1]);
        return ranked_neighborhood(T, sorted(J), s, m);
    };
    SUBCASE("first example") {
        const auto tab = constraint_sets(g1(), T, m, pre);
        REQUIRE(tab.B.size() == 7);
        CHECK(tab.B[0].size() == 14);
        CHECK(tab.D[0].empty());
        CHECK(tab.B[1] == N({1}, 2));
        CHECK(tab.D[1] == N({1}, 1));
        CHECK(tab.B[2] == N({1}, 1));
        CHECK(tab.D[2] == N({1}, 0));
        CHECK(tab.B[3] == N({1}, 0));
        CHECK(tab.D[3].empty());
        CHECK(tab.B[4] == N({1}, 0));
        CHECK(tab.D[4].empty());
        CHECK(tab.B[5] == N({1, 4, 5}, 2));
        CHECK(tab.D[5] == N({1, 4, 5}, 1));
        CHECK(tab.B[6] == N({1, 4, 5}, 0));
        CHECK(tab.D[6].empty());
    }
    SUBCASE("second example") {
        const auto tab = constraint_sets(g2(), T, m, pre);
        const IdSet d4 = N({1, 2}, 2);
        CHECK(tab.B[1] == N({1}, 0));
        CHECK(tab.D[1].empty());
        CHECK(tab.B[2] == N({1, 2}, 5));
        CHECK(tab.D[2] == N({1, 2}, 4));
        CHECK(tab.B[3] == N({1, 2}, 3));
        CHECK(tab.D[3] == d4);
        CHECK(tab.B[4] == unite(N({1, 2, 4}, 2), d4));
        CHECK(tab.D[4] == unite(N({1, 2, 4}, 1), d4));
        CHECK(tab.B[5] == unite(N({1, 2, 4}, 1), d4));
        CHECK(tab.D[5] == unite(N({1, 2, 4}, 0), d4));
        CHECK(tab.B[6] == tab.B[5]);
        CHECK(tab.D[6] == tab.D[5]);
    }
    SUBCASE("inner set inside outer set") {
        for (const auto& g : enumerate(5, 3).all) {
            const auto tab = constraint_sets(g, T, m, {3, 4, 2, 5});
            for (std::size_t j = 0; j < tab.B.size(); ++j)
                CHECK(std::includes(tab.B[j].begin(), tab.B[j].end(), tab.D[j].begin(), tab.D[j].end()));
        }
    }
}

TEST_CASE("genogram sums") {
    const auto tf = chain_field(3, 1);
    SumOptions opt;
    opt.m = 1;
    const auto f = SmoothFunction::sine();
    const Genogram root;

    CHECK(sum_T(root, tf, opt, f) == doctest::Approx(tf.expect(tf.W() * f.derivative(0, tf.W()))).epsilon(1e-13));
    CHECK(std::abs(sum_S(root, tf, opt)) < 1e-14);

    // one nil child: sum over i and j in N(i) of Cov(Y_i, Y_j)
    const auto nil = grow(root, 1, 0);
    double hand = 0.0;
    for (int i = 0; i < tf.size(); ++i)
        for (int j : mdep_neighborhood(tf.index_set(), 1, {i})) hand += tf.expect(tf.Y(i) * tf.Y(j));
    CHECK(sum_S(nil, tf, opt) == doctest::Approx(hand).epsilon(1e-13));
    CHECK(sum_S(nil, tf, opt) == doctest::Approx(1.0).epsilon(1e-12));

    // polynomial f of degree |G|-2 leaves a vanishing difference
    const auto cubic = SmoothFunction::polynomial({0.5, -1.0, 2.0, 0.7});
    for (const auto& h : enumerate(5, 3).all) CHECK(std::abs(sum_U(h, tf, opt, cubic)) < 1e-12);
    CHECK_THROWS_AS(sum_U(root, tf, opt, f), DomainError);

    SumOptions tiny = opt;
    tiny.budget = 2;
    CHECK_THROWS_AS(sum_S(nil, tf, tiny), BudgetError);
}

TEST_CASE("kappa tilde agrees along both routes") {
    const auto tf = chain_field(3, 1);
    SumOptions opt;
    opt.m = 1;
    for (int order = 2; order <= 4; ++order) {
        const auto kt = kappa_tilde(tf, order, opt);
        CHECK(kt.value == doctest::Approx(kt.via_nonpositive).epsilon(1e-10));
        double spread = 0.0;
        for (const auto& [name, v] : kt.components) spread += std::abs(v);
        CHECK(std::abs(kt.value - kt.kappa) <= spread + 1e-14);
    }
    // second order: only the variance survives
    CHECK(kappa_tilde(tf, 2, opt).value == doctest::Approx(1.0));
}

TEST_CASE("telescoping identities") {
    const auto sine = SmoothFunction::sine();
    SUBCASE("three Rademacher summands, k = 2") {
        TinyField tf(std::vector<DiscreteVar>(4, DiscreteVar::rademacher()), IndexSet::line(3),
                     [](int i, std::span<const double> b) { return b[i] + 0.5 * b[i] * b[i + 1]; });
        SumOptions opt;
        opt.m = 1;
        const auto w = verify_wfw(tf, opt, 2, sine);
        CHECK(w.cumulant_form.residual() < 1e-9);
        CHECK(w.tilde_form.residual() < 1e-9);
        for (const auto& g : enumerate(3, 3).all) {
            CHECK(verify_step1(g, tf, opt, sine).residual() < 1e-9);
            if (g.size() >= 2) CHECK(verify_step2(g, tf, opt, sine, 2).residual() < 1e-9);
        }
    }
    SUBCASE("four summands, no neighbors") {
        const auto tf = chain_field(4, 1);
        SumOptions opt;
        opt.m = 0;
        for (int k = 1; k <= 3; ++k) {
            const auto w = verify_wfw(tf, opt, k, SmoothFunction::hyperbolic_tangent());
            CHECK(w.cumulant_form.residual() < 1e-9);
            CHECK(w.tilde_form.residual() < 1e-9);
        }
    }
    SUBCASE("polynomial f reduces to the cumulant expansion") {
        const auto tf = chain_field(3, 1);
        SumOptions opt;
        opt.m = 1;
        const auto w = verify_wfw(tf, opt, 3, SmoothFunction::polynomial({0.1, 0.2, -0.3, 0.4}));
        CHECK(w.cumulant_form.residual() < 1e-10);
    }
}
