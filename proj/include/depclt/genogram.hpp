#pragma once

// Genograms: rooted trees with integer identifiers that index the nested sums
// of the mixing-field expansion of E[W f(W)].
//
// Vertices carry 1-based labels in the compatible (depth-first) order. Label 1
// is the root. Identifiers are -1 (negative), 0 (nil) or positive.

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "depclt/combinatorics.hpp"
#include "depclt/dependency.hpp"
#include "depclt/fields.hpp"
#include "depclt/smooth_function.hpp"

namespace depclt {

using Rational = boost::rational<long long>;

class Genogram {
public:
    // The root alone.
    Genogram();

    // parent[j-1] and ids[j-1] describe label j; parent[0] is ignored. Throws
    // DomainError when the arrays break any of the compatibility rules.
    Genogram(std::vector<int> parent, std::vector<int> ids);

    int size() const { return static_cast<int>(ids_.size()); }
    int parent(int j) const { return parent_[j - 1]; }
    int id(int j) const { return ids_[j - 1]; }
    const std::vector<int>& parents() const { return parent_; }
    const std::vector<int>& ids() const { return ids_; }

    std::vector<int> children(int j) const;   // increasing labels
    std::vector<int> ancestors(int j) const;  // A(j), increasing labels
    bool is_leaf(int j) const;
    int leaves() const;     // gamma
    int negatives() const;  // tau
    bool has_positive() const;

    // G[j], the sub-genogram on labels 1..j.
    Genogram prefix(int j) const;
    bool extends(const Genogram& g) const;  // g is a sub-genogram of *this

    // "p=[.,1,1]; s=[0,2,1]"
    std::string str() const;
    static Genogram parse(const std::string& text);

    bool operator==(const Genogram&) const = default;

private:
    struct Unchecked {};
    Genogram(std::vector<int> parent, std::vector<int> ids, Unchecked);
    friend Genogram grow(const Genogram&, int, int);
    friend Genogram glue(const Genogram&, int);

    std::vector<int> parent_;
    std::vector<int> ids_;
};

struct ValidationReport {
    bool valid = true;
    std::vector<char> violated;  // subset of 'a'..'d', in order, plus 's' for shape errors
};

// Rule (a): depth-first labeling. (b): s_1 = 0, s_j >= -1. (c): a negative
// vertex has no sibling and is not a child of the root. (d): siblings carry
// distinct identifiers, decreasing in label.
ValidationReport validate(const std::vector<int>& parent, const std::vector<int>& ids);

// Closest positive proper ancestor of v[j], or the root.
int progenitor(const Genogram& g, int j);
// Largest label in {j} u A(j) with a nonnegative identifier.
int u_index(const Genogram& g, int j);

// A legal growth vertex together with the exclusive upper bound on the new
// identifier (nullopt: unbounded).
struct GrowthSite {
    int vertex;
    std::optional<int> id_limit;
};
std::vector<GrowthSite> growth_sites(const Genogram& g);

// Omega[j, s]: a nonnegative child of v[j] labelled |G|+1.
Genogram grow(const Genogram& g, int j, int s);
// Lambda[h]: a path of h negative vertices under v[|G|].
Genogram glue(const Genogram& g, int h);

struct GenCoefficients {
    Rational a{1};
    Rational b{0};
    int gamma = 0;  // leaves of H
    int tau = 0;    // negatives of H
};

// a_{H,G} and b_{H,G}; b is meaningful for |H| > |G| only.
GenCoefficients coefficients(const Genogram& h, const Genogram& g);
// b_H = b_{H, root}.
Rational b_coefficient(const Genogram& h);

struct GenogramClasses {
    std::vector<Genogram> all;  // G(k)
    std::vector<Genogram> positive;         // G_0(k): at least one positive vertex
    std::vector<Genogram> nonpositive;      // P_0(k)
    std::vector<Genogram> last_positive;    // P_1(k): only v[k] is positive
};

// Every order-k genogram with identifiers in {-1, .., id_cap}, in growth order.
GenogramClasses enumerate(int k, int id_cap);

// Number of distinct ordered trees underlying order-k genograms.
long long count_ordered_trees(int k);

// ---------------------------------------------------------------------------
// Generalized covariance operators on a finite law.

RandomVar gen_cov(const FiniteLaw& law, std::span<const RandomVar> ys);
double gen_cov_star(const FiniteLaw& law, std::span<const RandomVar> ys);
// D* of the block products of `ys` taken along `blocks`.
double gen_cov_star(const FiniteLaw& law, const Composition& blocks, std::span<const RandomVar> ys);

// Branch decomposition of E_G: each branch is a composition of its labels,
// consecutive from the branch start; E_G is the product over branches of D*
// applied to the block products.
struct Branch {
    int first = 1;
    Composition blocks;
};
std::vector<Branch> branch_structure(const Genogram& g);

double epsilon_G(const Genogram& g, const FiniteLaw& law, std::span<const RandomVar> ys);

// ---------------------------------------------------------------------------
// Constraint sets and genogram sums on a TinyField.

struct ConstraintTable {
    std::vector<IdSet> B;  // B[j-1] = B_j
    std::vector<IdSet> D;
};

// B_j, D_j for j = 1..prefix.size()+1 given i_1..i_{j-1} (0-based ids).
ConstraintTable constraint_sets(const Genogram& g, const IndexSet& T, int m, const std::vector<int>& prefix);

struct SumOptions {
    int m = 1;
    std::uint64_t budget = 20'000'000;  // maximal number of index chains
    int quadrature_nodes = 32;
};

double sum_S(const Genogram& g, const TinyField& tf, const SumOptions& opt);
double sum_T(const Genogram& g, const TinyField& tf, const SumOptions& opt, const SmoothFunction& f);
double sum_U(const Genogram& g, const TinyField& tf, const SumOptions& opt, const SmoothFunction& f);

struct KappaTilde {
    int order = 2;
    double kappa = 0.0;          // kappa_order(W)
    double value = 0.0;          // via kappa plus the positive-genogram S-sums
    double via_nonpositive = 0.0;  // via the P_0 S-sums alone
    std::vector<std::pair<std::string, double>> components;  // (genogram, weighted S-sum)
};

// kappa~ of the given order (= k+1) on a TinyField, computed two ways.
KappaTilde kappa_tilde(const TinyField& tf, int order, const SumOptions& opt);

struct IdentityResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual() const;
};

// T_f(G) - S(G) E[f^{(|G|-1)}(W)] against the signed U-sums of its one-step
// nonnegative extensions.
IdentityResidual verify_step1(const Genogram& g, const TinyField& tf, const SumOptions& opt, const SmoothFunction& f);

// U_f(G) against the Taylor expansion along glued negative paths up to length k+1.
IdentityResidual verify_step2(const Genogram& g, const TinyField& tf, const SumOptions& opt, const SmoothFunction& f,
                              int k);

struct WfwResidual {
    IdentityResidual cumulant_form;  // kappa_2..kappa_{k+1} plus b_H U_f(H) over G(k+2)
    IdentityResidual tilde_form;     // kappa~_{k+1} variant
};
WfwResidual verify_wfw(const TinyField& tf, const SumOptions& opt, int k, const SmoothFunction& f);

}  // namespace depclt
