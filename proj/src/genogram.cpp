#include "depclt/genogram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "depclt/errors.hpp"
#include "depclt/quadrature.hpp"

namespace depclt {

// ---------------------------------------------------------------------------
// Structure

ValidationReport validate(const std::vector<int>& parent, const std::vector<int>& ids) {
    ValidationReport rep;
    auto flag = [&](char c) {
        rep.valid = false;
        if (std::find(rep.violated.begin(), rep.violated.end(), c) == rep.violated.end()) rep.violated.push_back(c);
    };
    const int k = static_cast<int>(ids.size());
    if (k == 0 || parent.size() != ids.size()) {
        flag('s');
        return rep;
    }
    for (int j = 2; j <= k; ++j)
        if (parent[j - 1] < 1 || parent[j - 1] >= j) flag('s');
    if (!rep.valid) return rep;

    auto p = [&](int j) { return parent[j - 1]; };
    auto s = [&](int j) { return ids[j - 1]; };

    for (int j = 1; j <= k - 1; ++j) {
        int best = 0;
        for (int l = j + 1; l <= k; ++l)
            if (p(l) <= j) best = std::max(best, p(l));
        if (p(j + 1) != best) flag('a');
    }
    if (s(1) != 0) flag('b');
    for (int j = 2; j <= k; ++j)
        if (s(j) < -1) flag('b');
    for (int j = 2; j <= k; ++j) {
        if (s(j) != -1) continue;
        if (p(j) == 1) flag('c');
        for (int h = 2; h <= k; ++h)
            if (h != j && p(h) == p(j)) flag('c');
    }
    for (int j = 2; j <= k; ++j)
        for (int h = j + 1; h <= k; ++h)
            if (p(j) == p(h) && s(j) <= s(h)) flag('d');
    std::sort(rep.violated.begin(), rep.violated.end());
    return rep;
}

Genogram::Genogram() : parent_{0}, ids_{0} {}

Genogram::Genogram(std::vector<int> parent, std::vector<int> ids, Unchecked)
    : parent_(std::move(parent)), ids_(std::move(ids)) {
    parent_[0] = 0;
}

Genogram::Genogram(std::vector<int> parent, std::vector<int> ids) : Genogram(parent, ids, Unchecked{}) {
    const auto rep = validate(parent_, ids_);
    if (!rep.valid) {
        std::string rules(rep.violated.begin(), rep.violated.end());
        throw DomainError("not a genogram with compatible labeling (rules " + rules + "): " + str());
    }
}

std::vector<int> Genogram::children(int j) const {
    std::vector<int> out;
    for (int h = j + 1; h <= size(); ++h)
        if (parent(h) == j) out.push_back(h);
    return out;
}

std::vector<int> Genogram::ancestors(int j) const {
    std::vector<int> out;
    for (int a = (j > 1 ? parent(j) : 0); a >= 1; a = (a > 1 ? parent(a) : 0)) out.push_back(a);
    std::reverse(out.begin(), out.end());
    return out;
}

bool Genogram::is_leaf(int j) const {
    for (int h = j + 1; h <= size(); ++h)
        if (parent(h) == j) return false;
    return true;
}

int Genogram::leaves() const {
    int n = 0;
    for (int j = 1; j <= size(); ++j) n += is_leaf(j);
    return n;
}

int Genogram::negatives() const { return static_cast<int>(std::count(ids_.begin(), ids_.end(), -1)); }

bool Genogram::has_positive() const {
    return std::any_of(ids_.begin(), ids_.end(), [](int s) { return s >= 1; });
}

Genogram Genogram::prefix(int j) const {
    if (j < 1 || j > size()) throw DomainError("Genogram::prefix: order out of range");
    return Genogram(std::vector<int>(parent_.begin(), parent_.begin() + j),
                    std::vector<int>(ids_.begin(), ids_.begin() + j), Unchecked{});
}

bool Genogram::extends(const Genogram& g) const {
    if (g.size() > size()) return false;
    return std::equal(g.parent_.begin(), g.parent_.end(), parent_.begin()) &&
           std::equal(g.ids_.begin(), g.ids_.end(), ids_.begin());
}

std::string Genogram::str() const {
    std::ostringstream os;
    os << "p=[.";
    for (int j = 2; j <= size(); ++j) os << ',' << parent(j);
    os << "]; s=[";
    for (int j = 1; j <= size(); ++j) os << (j > 1 ? "," : "") << id(j);
    os << ']';
    return os.str();
}

namespace {

std::vector<int> parse_list(const std::string& body, bool allow_dot) {
    std::vector<int> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty()) throw DomainError("Genogram::parse: empty entry");
        if (item == ".") {
            if (!allow_dot || !out.empty()) throw DomainError("Genogram::parse: '.' only marks the root parent");
            out.push_back(0);
            continue;
        }
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size()) throw DomainError("Genogram::parse: bad integer '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string bracket_body(const std::string& text, const std::string& key) {
    const auto at = text.find(key + "=[");
    if (at == std::string::npos) throw DomainError("Genogram::parse: missing " + key + "=[...]");
    const auto open = at + key.size() + 2;
    const auto close = text.find(']', open);
    if (close == std::string::npos) throw DomainError("Genogram::parse: unterminated list");
    return text.substr(open, close - open);
}

}  // namespace

Genogram Genogram::parse(const std::string& text) {
    auto p = parse_list(bracket_body(text, "p"), true);
    auto s = parse_list(bracket_body(text, "s"), false);
    if (p.empty() || p[0] != 0) throw DomainError("Genogram::parse: parent list must start with '.'");
    return Genogram(std::move(p), std::move(s));
}

int progenitor(const Genogram& g, int j) {
    if (j < 1 || j > g.size()) throw DomainError("progenitor: label out of range");
    const auto anc = g.ancestors(j);
    for (auto it = anc.rbegin(); it != anc.rend(); ++it)
        if (g.id(*it) >= 1) return *it;
    return 1;
}

int u_index(const Genogram& g, int j) {
    if (j < 1 || j > g.size()) throw DomainError("u_index: label out of range");
    int v = j;
    while (g.id(v) < 0) v = g.parent(v);
    return v;
}

std::vector<GrowthSite> growth_sites(const Genogram& g) {
    const int l = g.size();
    std::vector<GrowthSite> out;
    auto anc = g.ancestors(l);
    for (int j : anc) {
        int lo = -1;
        for (int c : g.children(j)) lo = (lo < 0 ? g.id(c) : std::min(lo, g.id(c)));
        if (lo >= 1) out.push_back({j, lo});
    }
    out.push_back({l, std::nullopt});
    return out;
}

Genogram grow(const Genogram& g, int j, int s) {
    const auto sites = growth_sites(g);
    auto it = std::find_if(sites.begin(), sites.end(), [&](const GrowthSite& x) { return x.vertex == j; });
    if (it == sites.end()) throw DomainError("grow: v[" + std::to_string(j) + "] is not a legal growth vertex");
    if (s < 0 || (it->id_limit && s >= *it->id_limit))
        throw DomainError("grow: identifier out of range at v[" + std::to_string(j) + "]");
    auto p = g.parent_;
    auto ids = g.ids_;
    p.push_back(j);
    ids.push_back(s);
    return Genogram(std::move(p), std::move(ids), Genogram::Unchecked{});
}

Genogram glue(const Genogram& g, int h) {
    if (h < 0) throw DomainError("glue: path length must be nonnegative");
    if (h > 0 && g.size() == 1) throw DomainError("glue: a negative vertex cannot hang from the root");
    auto p = g.parent_;
    auto ids = g.ids_;
    for (int t = 0; t < h; ++t) {
        p.push_back(static_cast<int>(ids.size()));
        ids.push_back(-1);
    }
    return Genogram(std::move(p), std::move(ids), Genogram::Unchecked{});
}

GenCoefficients coefficients(const Genogram& h, const Genogram& g) {
    if (!h.extends(g)) throw DomainError("coefficients: H does not extend G");
    GenCoefficients c;
    c.gamma = h.leaves();
    c.tau = h.negatives();
    if (h.size() == g.size()) return c;
    const int parity = (c.gamma - g.leaves() + c.tau - g.negatives()) % 2;
    const long long sign = parity == 0 ? 1 : -1;
    Rational prod(1);
    for (int j = g.size() + 1; j <= h.size() - 1; ++j) prod /= (j + 1 - u_index(h, j));
    c.b = Rational(-sign) * prod;
    c.a = Rational(sign) * prod / (h.size() + 1 - u_index(h, h.size()));
    return c;
}

Rational b_coefficient(const Genogram& h) { return coefficients(h, Genogram{}).b; }

GenogramClasses enumerate(int k, int id_cap) {
    if (k < 1) throw DomainError("enumerate: order must be positive");
    if (id_cap < 0) throw DomainError("enumerate: id_cap must be nonnegative");
    std::vector<Genogram> level{Genogram{}};
    for (int l = 1; l < k; ++l) {
        std::vector<Genogram> next;
        for (const auto& g : level) {
            for (const auto& site : growth_sites(g)) {
                const int top = site.id_limit ? std::min(*site.id_limit - 1, id_cap) : id_cap;
                for (int s = 0; s <= top; ++s) next.push_back(grow(g, site.vertex, s));
            }
            if (l >= 2) next.push_back(glue(g, 1));
        }
        level = std::move(next);
    }
    GenogramClasses out;
    for (auto& g : level) {
        bool earlier_positive = false;
        for (int j = 1; j < k; ++j) earlier_positive |= g.id(j) >= 1;
        if (g.has_positive())
            out.positive.push_back(g);
        else
            out.nonpositive.push_back(g);
        if (!earlier_positive && g.id(k) >= 1) out.last_positive.push_back(g);
    }
    out.all = std::move(level);
    return out;
}

long long count_ordered_trees(int k) {
    if (k < 1) throw DomainError("count_ordered_trees: order must be positive");
    // ways[d] counts shapes whose last vertex sits at depth d; the next vertex
    // attaches to the last vertex or one of its ancestors.
    std::vector<long long> ways{1};
    for (int l = 1; l < k; ++l) {
        std::vector<long long> next(ways.size() + 1, 0);
        for (std::size_t d = 0; d < ways.size(); ++d)
            for (std::size_t a = 0; a <= d; ++a) next[a + 1] += ways[d];
        ways = std::move(next);
    }
    long long total = 0;
    for (auto w : ways) total += w;
    return total;
}

// ---------------------------------------------------------------------------
// Generalized covariance operators

RandomVar gen_cov(const FiniteLaw& law, std::span<const RandomVar> ys) {
    if (ys.empty()) throw DomainError("gen_cov: need at least one variable");
    RandomVar cur = ys.back() - law.expect(ys.back());
    for (std::size_t j = ys.size() - 1; j-- > 0;) {
        cur = ys[j] * cur;
        cur = cur - law.expect(cur);
    }
    return cur;
}

double gen_cov_star(const FiniteLaw& law, std::span<const RandomVar> ys) {
    if (ys.empty()) throw DomainError("gen_cov_star: need at least one variable");
    if (ys.size() == 1) return law.expect(ys[0]);
    return law.expect(ys[0] * gen_cov(law, ys.subspan(1)));
}

namespace {

std::vector<RandomVar> block_products(const Composition& blocks, std::span<const RandomVar> ys) {
    if (blocks.total() != static_cast<int>(ys.size())) throw DomainError("blocks do not cover the variables");
    std::vector<RandomVar> out;
    std::size_t at = 0;
    for (int len : blocks.parts) {
        out.push_back(product(ys.subspan(at, len)));
        at += len;
    }
    return out;
}

}  // namespace

double gen_cov_star(const FiniteLaw& law, const Composition& blocks, std::span<const RandomVar> ys) {
    const auto prods = block_products(blocks, ys);
    return gen_cov_star(law, prods);
}

std::vector<Branch> branch_structure(const Genogram& g) {
    std::vector<Branch> rev;
    int k = g.size();
    while (k >= 1) {
        int q0 = 1;
        for (int j = k; j >= 2; --j)
            if (g.parent(j) != j - 1) {
                q0 = j;
                break;
            }
        Branch br;
        br.first = q0;
        int start = q0;
        for (int t = q0 + 1; t <= k; ++t)
            if (g.id(t) >= 0) {
                br.blocks.parts.push_back(t - start);
                start = t;
            }
        br.blocks.parts.push_back(k - start + 1);
        rev.push_back(br);
        k = q0 - 1;
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

namespace {

double epsilon_from_structure(const std::vector<Branch>& branches, const FiniteLaw& law,
                              std::span<const RandomVar> ys) {
    double out = 1.0;
    for (const auto& br : branches) {
        out *= gen_cov_star(law, br.blocks, ys.subspan(br.first - 1, br.blocks.total()));
        if (out == 0.0) break;
    }
    return out;
}

}  // namespace

double epsilon_G(const Genogram& g, const FiniteLaw& law, std::span<const RandomVar> ys) {
    if (static_cast<int>(ys.size()) != g.size()) throw DomainError("epsilon_G: need one variable per vertex");
    return epsilon_from_structure(branch_structure(g), law, ys);
}

// ---------------------------------------------------------------------------
// Constraint sets and sums

namespace {

IdSet set_union(const IdSet& a, const IdSet& b) {
    IdSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

IdSet set_minus(const IdSet& a, const IdSet& b) {
    IdSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Per-genogram data reused at every level of the nested sums.
struct Plan {
    const Genogram& g;
    std::vector<std::vector<int>> anc;  // anc[j-1] = A(j)
    std::vector<int> prog, uidx;

    explicit Plan(const Genogram& gg) : g(gg) {
        for (int j = 1; j <= g.size(); ++j) {
            anc.push_back(g.ancestors(j));
            prog.push_back(progenitor(g, j));
            uidx.push_back(u_index(g, j));
        }
    }

    // Appends B_j, D_j to `tab` given i_1..i_{j-1} in `prefix`.
    void extend(ConstraintTable& tab, const IndexSet& T, int m, const std::vector<int>& prefix) const {
        const int j = static_cast<int>(tab.B.size()) + 1;
        if (j == 1) {
            IdSet all(T.size());
            for (int i = 0; i < T.size(); ++i) all[i] = i;
            tab.B.push_back(std::move(all));
            tab.D.emplace_back();
            return;
        }
        IdSet J;
        for (int a : anc[j - 1]) J.push_back(prefix[a - 1]);
        std::sort(J.begin(), J.end());
        J.erase(std::unique(J.begin(), J.end()), J.end());
        const int s = g.id(j);
        const IdSet& Dg = tab.D[prog[j - 1] - 1];
        IdSet B = s >= 0 ? set_union(ranked_neighborhood(T, J, s, m), Dg) : tab.B[uidx[j - 1] - 1];
        IdSet D = s >= 1 ? set_union(ranked_neighborhood(T, J, s - 1, m), Dg) : Dg;
        tab.B.push_back(std::move(B));
        tab.D.push_back(std::move(D));
    }
};

// Visits every chain i_1..i_{depth-1} with i_j in B_j \ D_j and hands the
// table through B_depth, D_depth to `leaf`.
template <class Leaf>
void walk_chains(const Plan& plan, const TinyField& tf, const SumOptions& opt, int depth, Leaf&& leaf) {
    std::vector<int> prefix;
    ConstraintTable tab;
    std::uint64_t visited = 0;
    auto rec = [&](auto&& self) -> void {
        plan.extend(tab, tf.index_set(), opt.m, prefix);
        const int j = static_cast<int>(tab.B.size());
        if (j == depth) {
            if (++visited > opt.budget) throw BudgetError("genogram sum exceeded its chain budget");
            leaf(prefix, tab);
        } else {
            const IdSet range = set_minus(tab.B.back(), tab.D.back());
            for (int i : range) {
                prefix.push_back(i);
                self(self);
                prefix.pop_back();
            }
        }
        tab.B.pop_back();
        tab.D.pop_back();
    };
    rec(rec);
}

RandomVar sum_over(const TinyField& tf, const IdSet& ids) {
    RandomVar out(tf.outcomes(), 0.0);
    for (int i : ids)
        for (std::size_t w = 0; w < out.size(); ++w) out[w] += tf.Y(i)[w];
    return out;
}

RandomVar W_without(const TinyField& tf, const IdSet& J) {
    std::vector<char> mask(tf.size(), 0);
    for (int i : J) mask[i] = 1;
    return tf.W_outside(mask);
}

// E_G(Y_{i_1}, .., Y_{i_{k-1}}, last).
double evaluate(const std::vector<Branch>& branches, const TinyField& tf, const std::vector<int>& prefix,
                RandomVar last) {
    std::vector<RandomVar> ys;
    ys.reserve(prefix.size() + 1);
    for (int i : prefix) ys.push_back(tf.Y(i));
    ys.push_back(std::move(last));
    return epsilon_from_structure(branches, tf.law(), ys);
}

void require_order(const SmoothFunction& f, int order, const char* what) {
    if (f.max_order() < order)
        throw DomainError(std::string(what) + ": f lacks derivatives of order " + std::to_string(order));
}

}  // namespace

ConstraintTable constraint_sets(const Genogram& g, const IndexSet& T, int m, const std::vector<int>& prefix) {
    if (static_cast<int>(prefix.size()) >= g.size()) throw DomainError("constraint_sets: prefix too long");
    const Plan plan(g);
    ConstraintTable tab;
    for (std::size_t j = 0; j <= prefix.size(); ++j) plan.extend(tab, T, m, prefix);
    return tab;
}

double sum_S(const Genogram& g, const TinyField& tf, const SumOptions& opt) {
    const Plan plan(g);
    const auto branches = branch_structure(g);
    double total = 0.0;
    walk_chains(plan, tf, opt, g.size(), [&](const std::vector<int>& prefix, const ConstraintTable& tab) {
        const IdSet last = set_minus(tab.B.back(), tab.D.back());
        if (last.empty()) return;
        total += evaluate(branches, tf, prefix, sum_over(tf, last));
    });
    return total;
}

double sum_T(const Genogram& g, const TinyField& tf, const SumOptions& opt, const SmoothFunction& f) {
    const int k = g.size();
    require_order(f, k - 1, "sum_T");
    const Plan plan(g);
    const auto branches = branch_structure(g);
    double total = 0.0;
    walk_chains(plan, tf, opt, k, [&](const std::vector<int>& prefix, const ConstraintTable& tab) {
        const IdSet last = set_minus(tab.B.back(), tab.D.back());
        if (last.empty()) return;
        RandomVar arg = sum_over(tf, last) * f.derivative(k - 1, W_without(tf, tab.D.back()));
        total += evaluate(branches, tf, prefix, std::move(arg));
    });
    return total;
}

double sum_U(const Genogram& g, const TinyField& tf, const SumOptions& opt, const SmoothFunction& f) {
    const int k = g.size();
    if (k < 2) throw DomainError("sum_U: genogram must have at least two vertices");
    require_order(f, k - 2, "sum_U");
    const Plan plan(g);
    const auto branches = branch_structure(g);
    const int u = u_index(g, k);
    const QuadratureRule rule = gauss_legendre(opt.quadrature_nodes, 0.0, 1.0);
    double total = 0.0;
    walk_chains(plan, tf, opt, k, [&](const std::vector<int>& prefix, const ConstraintTable& tab) {
        const IdSet& B = tab.B.back();
        const IdSet& D = tab.D.back();
        if (B == D) return;
        const RandomVar wB = W_without(tf, B);
        const RandomVar wD = W_without(tf, D);
        const RandomVar fD = f.derivative(k - 2, wD);
        RandomVar delta(tf.outcomes(), 0.0);
        if (u == k) {
            delta = f.derivative(k - 2, wB) - fD;
        } else {
            const int r = k - u;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double v = rule.nodes[q];
                const double weight = rule.weights[q] * r * std::pow(v, r - 1);
                for (std::size_t w = 0; w < delta.size(); ++w) {
                    const double x = v * wD[w] + (1.0 - v) * wB[w];
                    delta[w] += weight * (f.derivative(k - 2, x) - fD[w]);
                }
            }
        }
        total += evaluate(branches, tf, prefix, std::move(delta));
    });
    return total;
}

KappaTilde kappa_tilde(const TinyField& tf, int order, const SumOptions& opt) {
    if (order < 2) throw DomainError("kappa_tilde: order must be at least 2");
    const int k = order - 1;
    KappaTilde out;
    out.order = order;
    out.kappa = cumulant_of_sum(tf, order);
    double kfact = 1.0;
    for (int r = 2; r <= k; ++r) kfact *= r;
    const auto classes = enumerate(order, tf.size());
    auto weight = [&](const Genogram& h) {
        return kfact * boost::rational_cast<double>(b_coefficient(h)) / (k + 2 - u_index(h, order));
    };
    out.value = out.kappa;
    for (const auto& h : classes.positive) {
        const double term = weight(h) * sum_S(h, tf, opt);
        if (term == 0.0) continue;
        out.value += term;
        out.components.emplace_back(h.str(), term);
    }
    for (const auto& h : classes.nonpositive) out.via_nonpositive -= weight(h) * sum_S(h, tf, opt);
    return out;
}

double IdentityResidual::residual() const { return std::abs(lhs - rhs); }

IdentityResidual verify_step1(const Genogram& g, const TinyField& tf, const SumOptions& opt, const SmoothFunction& f) {
    const int l = g.size();
    IdentityResidual r;
    const double ef = tf.expect(f.derivative(l - 1, tf.W()));
    r.lhs = sum_T(g, tf, opt, f) - sum_S(g, tf, opt) * ef;
    const int cap = tf.size();
    for (const auto& site : growth_sites(g)) {
        const int top = site.id_limit ? std::min(*site.id_limit - 1, cap) : cap;
        const double sign = site.vertex == l ? -1.0 : 1.0;
        for (int s = 0; s <= top; ++s) r.rhs += sign * sum_U(grow(g, site.vertex, s), tf, opt, f);
    }
    return r;
}

IdentityResidual verify_step2(const Genogram& g, const TinyField& tf, const SumOptions& opt, const SmoothFunction& f,
                              int k) {
    const int l = g.size();
    if (l < 2) throw DomainError("verify_step2: genogram must have at least two vertices");
    if (k < 0) throw DomainError("verify_step2: k must be nonnegative");
    const int r0 = l - u_index(g, l);
    // r0! / (j + 1 + r0)!
    auto ratio = [&](int j) {
        double v = 1.0;
        for (int t = r0 + 1; t <= j + 1 + r0; ++t) v /= t;
        return v;
    };
    IdentityResidual r;
    r.lhs = sum_U(g, tf, opt, f);
    for (int j = 0; j <= k; ++j) r.rhs += (j % 2 == 0 ? -1.0 : 1.0) * ratio(j) * sum_T(glue(g, j), tf, opt, f);
    r.rhs += (k % 2 == 0 ? -1.0 : 1.0) * ratio(k) * sum_U(glue(g, k + 1), tf, opt, f);
    return r;
}

WfwResidual verify_wfw(const TinyField& tf, const SumOptions& opt, int k, const SmoothFunction& f) {
    if (k < 1) throw DomainError("verify_wfw: k must be positive");
    require_order(f, k, "verify_wfw");
    WfwResidual out;
    const double lhs = tf.expect(tf.W() * f.derivative(0, tf.W()));
    out.cumulant_form.lhs = out.tilde_form.lhs = lhs;

    double jfact = 1.0;
    double head = 0.0;  // j = 1..k-1
    for (int j = 1; j <= k; ++j) {
        jfact *= j;
        const double term = cumulant_of_sum(tf, j + 1) / jfact * tf.expect(f.derivative(j, tf.W()));
        out.cumulant_form.rhs += term;
        if (j < k) head += term;
    }
    const int cap = tf.size();
    const auto top = enumerate(k + 2, cap);
    for (const auto& h : top.all)
        out.cumulant_form.rhs += boost::rational_cast<double>(b_coefficient(h)) * sum_U(h, tf, opt, f);

    const KappaTilde kt = kappa_tilde(tf, k + 1, opt);
    out.tilde_form.rhs = head + kt.value / jfact * tf.expect(f.derivative(k, tf.W()));
    auto add_u = [&](const std::vector<Genogram>& hs) {
        for (const auto& h : hs)
            out.tilde_form.rhs += boost::rational_cast<double>(b_coefficient(h)) * sum_U(h, tf, opt, f);
    };
    add_u(top.nonpositive);
    add_u(top.last_positive);
    add_u(enumerate(k + 1, cap).positive);
    return out;
}

}  // namespace depclt
