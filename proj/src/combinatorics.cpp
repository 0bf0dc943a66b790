#include "depclt/combinatorics.hpp"

#include <numeric>

namespace depclt {

int Composition::total() const { return std::accumulate(parts.begin(), parts.end(), 0); }

std::vector<Composition> enumerate_compositions(int t) {
    if (t < 1) throw DomainError("enumerate_compositions: t must be positive");
    std::vector<Composition> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int left) -> void {
        if (left == 0) {
            out.push_back({cur});
            return;
        }
        for (int part = 1; part <= left; ++part) {
            cur.push_back(part);
            self(self, left - part);
            cur.pop_back();
        }
    };
    rec(rec, t);
    return out;
}

std::vector<Composition> enumerate_restricted_compositions(int t) {
    if (t < 2) throw DomainError("enumerate_restricted_compositions: t must be at least 2");
    std::vector<Composition> out;
    for (auto& c : enumerate_compositions(t)) {
        bool ok = true;
        for (std::size_t j = 0; j + 1 < c.parts.size(); ++j) ok = ok && c.parts[j] >= 2;
        if (ok) out.push_back(std::move(c));
    }
    return out;
}

double compositional_expectation(const FiniteLaw& law, const Composition& blocks,
                                 std::span<const RandomVar> values) {
    if (static_cast<int>(values.size()) != blocks.total())
        throw DomainError("compositional_expectation: block sizes do not match the argument count");
    double result = 1.0;
    std::size_t start = 0;
    for (int len : blocks.parts) {
        result *= law.expect(product(values.subspan(start, len)));
        start += len;
    }
    return result;
}

HamburgerCheck hamburger_check(const std::vector<double>& mu, double tol) {
    if (mu.empty() || std::abs(mu[0] - 1.0) > 1e-12)
        throw DomainError("hamburger_check: mu_0 must equal 1");
    std::vector<double> even(mu.begin(), mu.begin() + ((mu.size() - 1) / 2 * 2 + 1));
    HamburgerCheck out;
    out.hankel = hankel_determinants(even);
    out.feasible = true;
    for (double h : out.hankel) {
        if (out.boundary) {
            // a vanishing minor forces every later minor to vanish as well
            if (std::abs(h) > tol) out.feasible = false;
        } else if (h < -tol) {
            out.feasible = false;
        } else if (h <= tol) {
            out.boundary = true;
        }
    }
    return out;
}

bool hamburger_feasible(const std::vector<double>& mu, double tol) {
    return hamburger_check(mu, tol).feasible;
}

}  // namespace depclt
