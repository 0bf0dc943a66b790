#pragma once

// Integer compositions, compositional expectations, Bell polynomials and the
// moment/cumulant dictionary, plus Hankel checks for the Hamburger problem.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "depclt/errors.hpp"
#include "depclt/outcome.hpp"

namespace depclt {

struct Composition {
    std::vector<int> parts;

    int total() const;
    std::size_t length() const { return parts.size(); }
    bool operator==(const Composition&) const = default;
};

// All compositions of t in ascending lexicographic order of the part lists.
std::vector<Composition> enumerate_compositions(int t);

// Compositions whose parts are all >= 2 except possibly the last one.
std::vector<Composition> enumerate_restricted_compositions(int t);

// E[Y_1..Y_{eta_1}] E[Y_{eta_1+1}..] ... for consecutive blocks of `values`.
double compositional_expectation(const FiniteLaw& law, const Composition& blocks,
                                 std::span<const RandomVar> values);

// Partial exponential Bell polynomial B_{n,j}(x_1, ..., x_{n-j+1}), summed
// over the multiplicity vectors c with sum c_i = j and sum i c_i = n.
template <class Real>
Real bell_partial(int n, int j, std::span<const Real> x) {
    if (n < 1 || j < 1 || j > n) throw DomainError("bell_partial: need 1 <= j <= n");
    const int width = n - j + 1;
    if (static_cast<int>(x.size()) < width) throw DomainError("bell_partial: too few arguments");

    std::vector<Real> fact(n + 1, Real(1));
    for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * Real(i);

    Real total(0);
    std::vector<int> c(width + 1, 0);
    // Depth-first over c_width, c_{width-1}, ..., c_1 with remaining (blocks, weight).
    auto recurse = [&](auto&& self, int i, int blocks_left, int weight_left) -> void {
        if (i == 0) {
            if (blocks_left != 0 || weight_left != 0) return;
            Real term = fact[n];
            for (int r = 1; r <= width; ++r) {
                if (c[r] == 0) continue;
                term /= fact[c[r]];
                for (int e = 0; e < c[r]; ++e) term *= x[r - 1] / fact[r];
            }
            total += term;
            return;
        }
        for (int ci = 0; ci <= blocks_left && ci * i <= weight_left; ++ci) {
            c[i] = ci;
            self(self, i - 1, blocks_left - ci, weight_left - ci * i);
        }
        c[i] = 0;
    };
    recurse(recurse, width, j, n);
    return total;
}

// Complete Bell polynomial B_n(x_1..x_n) with B_0 = 1.
template <class Real>
Real bell_complete(int n, std::span<const Real> x) {
    if (n == 0) return Real(1);
    Real acc(0);
    for (int j = 1; j <= n; ++j) acc += bell_partial<Real>(n, j, x);
    return acc;
}

// kappa = (k_1..k_n) -> (mu_0..mu_n).
template <class Real>
std::vector<Real> moments_from_cumulants(const std::vector<Real>& kappa) {
    const int n = static_cast<int>(kappa.size());
    std::vector<Real> mu(n + 1);
    mu[0] = Real(1);
    for (int r = 1; r <= n; ++r) mu[r] = bell_complete<Real>(r, std::span<const Real>(kappa));
    return mu;
}

// mu = (mu_0..mu_n) with mu_0 = 1 -> (k_1..k_n).
template <class Real>
std::vector<Real> cumulants_from_moments(const std::vector<Real>& mu) {
    if (mu.empty() || std::abs(static_cast<double>(mu[0]) - 1.0) > 1e-12)
        throw DomainError("cumulants_from_moments: mu_0 must equal 1");
    const int n = static_cast<int>(mu.size()) - 1;
    std::span<const Real> raw(mu.data() + 1, mu.size() - 1);
    std::vector<Real> kappa(n);
    for (int r = 1; r <= n; ++r) {
        Real acc(0), fact(1);
        for (int j = 1; j <= r; ++j) {
            if (j > 1) fact *= Real(j - 1);
            const Real sign = (j % 2 == 1) ? Real(1) : Real(-1);
            acc += sign * fact * bell_partial<Real>(r, j, raw);
        }
        kappa[r - 1] = acc;
    }
    return kappa;
}

namespace detail {

template <class Real>
Real pivoted_determinant(std::vector<std::vector<Real>> a) {
    const std::size_t n = a.size();
    Real det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == Real(0)) return Real(0);
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const Real f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return det;
}

}  // namespace detail

// Leading Hankel minors H_0..H_J of (mu_0..mu_{2J}).
//
// Symmetric elimination in natural order yields every leading minor as a
// running product of pivots. Moment sequences mix entries of wildly different
// size (extension moments grow super-exponentially), and row pivoting would
// drag the large tail entries into the small leading block, so natural order is
// the accurate choice while pivots stay positive. Once a pivot is not clearly
// positive the remaining minors are computed one by one with partial pivoting.
template <class Real>
std::vector<Real> hankel_determinants(const std::vector<Real>& mu) {
    if (mu.empty() || (mu.size() - 1) % 2 != 0)
        throw DomainError("hankel_determinants: moment order must be even");
    const std::size_t J = (mu.size() - 1) / 2;
    std::vector<std::vector<Real>> a(J + 1, std::vector<Real>(J + 1));
    for (std::size_t r = 0; r <= J; ++r)
        for (std::size_t c = 0; c <= J; ++c) a[r][c] = mu[r + c];

    std::vector<Real> H(J + 1);
    std::vector<std::vector<Real>> work = a;
    Real running(1);
    std::size_t j = 0;
    for (; j <= J; ++j) {
        const Real pivot = work[j][j];
        Real scale(0);
        for (std::size_t c = 0; c <= j; ++c) scale = std::max(scale, std::abs(a[j][c]));
        if (!(pivot > scale * Real(1e-13))) break;
        running *= pivot;
        H[j] = running;
        for (std::size_t r = j + 1; r <= J; ++r) {
            const Real f = work[r][j] / pivot;
            for (std::size_t c = j; c <= J; ++c) work[r][c] -= f * work[j][c];
        }
    }
    for (; j <= J; ++j) {
        std::vector<std::vector<Real>> minor(j + 1, std::vector<Real>(j + 1));
        for (std::size_t r = 0; r <= j; ++r)
            for (std::size_t c = 0; c <= j; ++c) minor[r][c] = a[r][c];
        H[j] = detail::pivoted_determinant(std::move(minor));
    }
    return H;
}

struct HamburgerCheck {
    bool feasible = false;    // no minor is negative beyond tolerance
    bool boundary = false;    // some minor vanishes within tolerance (semidefinite)
    std::vector<double> hankel;
};

// Sylvester-type test on every even prefix of mu; odd trailing moments are ignored.
HamburgerCheck hamburger_check(const std::vector<double>& mu, double tol = 1e-12);
bool hamburger_feasible(const std::vector<double>& mu, double tol = 1e-12);

}  // namespace depclt
