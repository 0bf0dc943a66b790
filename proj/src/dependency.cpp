#include "depclt/dependency.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "depclt/errors.hpp"

namespace depclt {

IndexSet::IndexSet(int d, std::vector<IndexPoint> points) : d_(d), pts_(std::move(points)) {
    if (d < 1) throw DomainError("IndexSet: dimension must be positive");
    for (const auto& p : pts_)
        if (static_cast<int>(p.size()) != d) throw DomainError("IndexSet: mixed dimensions");
    std::sort(pts_.begin(), pts_.end());
    if (std::adjacent_find(pts_.begin(), pts_.end()) != pts_.end())
        throw DomainError("IndexSet: duplicate points");
    for (int i = 0; i < size(); ++i) ids_.emplace(pts_[i], i);
}

IndexSet IndexSet::line(int n) {
    std::vector<IndexPoint> pts;
    for (int i = 1; i <= n; ++i) pts.push_back({i});
    return IndexSet(1, std::move(pts));
}

IndexSet IndexSet::box(const std::vector<int>& extent) {
    const int d = static_cast<int>(extent.size());
    std::vector<IndexPoint> pts;
    IndexPoint cur(d, 1);
    if (d == 0) throw DomainError("IndexSet::box: empty extent");
    for (int e : extent)
        if (e < 1) return IndexSet(d, {});
    while (true) {
        pts.push_back(cur);
        int axis = d - 1;
        while (axis >= 0 && cur[axis] == extent[axis]) cur[axis--] = 1;
        if (axis < 0) break;
        ++cur[axis];
    }
    return IndexSet(d, std::move(pts));
}

int IndexSet::id_of(const IndexPoint& p) const {
    auto it = ids_.find(p);
    if (it == ids_.end()) throw DomainError("IndexSet: point not in set");
    return it->second;
}

int IndexSet::distance(int a, int b) const {
    int dist = 0;
    for (int c = 0; c < d_; ++c) dist = std::max(dist, std::abs(pts_[a][c] - pts_[b][c]));
    return dist;
}

namespace {

void check_subset(const IndexSet& T, const IdSet& J) {
    for (int j : J)
        if (j < 0 || j >= T.size()) throw DomainError("subset is not contained in the index set");
}

int distance_to(const IndexSet& T, const IdSet& J, int i) {
    int best = std::numeric_limits<int>::max();
    for (int j : J) best = std::min(best, T.distance(i, j));
    return best;
}

}  // namespace

IdSet mdep_neighborhood(const IndexSet& T, int m, const IdSet& J) {
    check_subset(T, J);
    if (m < 0) throw DomainError("mdep_neighborhood: m must be nonnegative");
    IdSet out;
    if (J.empty()) return out;
    for (int i = 0; i < T.size(); ++i)
        if (distance_to(T, J, i) <= m) out.push_back(i);
    return out;
}

IdSet rank_order(const IndexSet& T, const IdSet& J, int m) {
    check_subset(T, J);
    std::vector<std::pair<int, int>> outside;  // (distance, id); id order is lexicographic
    for (int i = 0; i < T.size(); ++i) {
        const int dist = J.empty() ? 0 : distance_to(T, J, i);
        if (J.empty() || dist > m) outside.emplace_back(dist, i);
    }
    std::sort(outside.begin(), outside.end());
    IdSet out;
    for (auto [dist, i] : outside) out.push_back(i);
    return out;
}

int rank_index(const IndexSet& T, const IdSet& J, int i, int m) {
    const IdSet order = rank_order(T, J, m);
    auto it = std::find(order.begin(), order.end(), i);
    if (it == order.end()) throw DomainError("rank_index: point lies inside the neighborhood");
    return static_cast<int>(it - order.begin()) + 1;
}

IdSet ranked_neighborhood(const IndexSet& T, const IdSet& J, int s, int m) {
    if (s < 0) throw DomainError("ranked_neighborhood: s must be nonnegative");
    IdSet out = mdep_neighborhood(T, m, J);
    const IdSet order = rank_order(T, J, m);
    for (int r = 0; r < s && r < static_cast<int>(order.size()); ++r) out.push_back(order[r]);
    std::sort(out.begin(), out.end());
    return out;
}

void DependencyGraph::add_edge(int a, int b) {
    if (a == b) throw DomainError("DependencyGraph: self-loops are not allowed");
    if (a < 0 || b < 0 || a >= size() || b >= size()) throw DomainError("DependencyGraph: bad vertex");
    if (adjacent(a, b)) return;
    adj_[a].insert(std::upper_bound(adj_[a].begin(), adj_[a].end(), b), b);
    adj_[b].insert(std::upper_bound(adj_[b].begin(), adj_[b].end(), a), a);
}

bool DependencyGraph::adjacent(int a, int b) const {
    return std::binary_search(adj_[a].begin(), adj_[a].end(), b);
}

DependencyGraph ustat_dependency_graph(int n, int m) {
    if (m < 2 || n < m) throw DomainError("ustat_dependency_graph: need n >= m >= 2");
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(cur.size()) == m) {
            tuples.push_back(cur);
            return;
        }
        for (int v = next; v <= n; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 1);

    DependencyGraph G(static_cast<int>(tuples.size()));
    // bucket tuples by coordinate, then connect within buckets
    std::vector<std::vector<int>> by_coord(n + 1);
    for (int t = 0; t < static_cast<int>(tuples.size()); ++t)
        for (int v : tuples[t]) by_coord[v].push_back(t);
    for (const auto& bucket : by_coord)
        for (std::size_t a = 0; a < bucket.size(); ++a)
            for (std::size_t b = a + 1; b < bucket.size(); ++b) G.add_edge(bucket[a], bucket[b]);
    G.labels = std::move(tuples);
    return G;
}

DependencyGraph mdep_graph(const IndexSet& T, int m) {
    DependencyGraph G(T.size());
    for (int a = 0; a < T.size(); ++a)
        for (int b = a + 1; b < T.size(); ++b)
            if (T.distance(a, b) <= m) G.add_edge(a, b);
    G.labels.reserve(T.size());
    for (int a = 0; a < T.size(); ++a) G.labels.push_back(T.point(a));
    return G;
}

IdSet neighborhood_closure(const DependencyGraph& G, const IdSet& J) {
    std::vector<char> in(G.size(), 0);
    for (int j : J) {
        if (j < 0 || j >= G.size()) throw DomainError("neighborhood_closure: bad vertex");
        in[j] = 1;
        for (int nb : G.neighbors(j)) in[nb] = 1;
    }
    IdSet out;
    for (int v = 0; v < G.size(); ++v)
        if (in[v]) out.push_back(v);
    return out;
}

int max_neighborhood_size(const DependencyGraph& G, int q, std::uint64_t max_subsets) {
    if (q < 1) throw DomainError("max_neighborhood_size: q must be positive");
    const int n = G.size();
    if (q > n) q = n;
    // C(n, q) guard
    double combos = 1.0;
    for (int i = 0; i < q; ++i) combos = combos * (n - i) / (i + 1);
    if (combos > static_cast<double>(max_subsets))
        throw BudgetError("max_neighborhood_size: too many subsets to enumerate");

    int best = 0;
    std::vector<int> cur;
    std::vector<int> count(n, 0);
    int covered = 0;
    auto touch = [&](int v, int delta) {
        auto bump = [&](int w) {
            if (delta > 0 && count[w]++ == 0) ++covered;
            if (delta < 0 && --count[w] == 0) --covered;
        };
        bump(v);
        for (int nb : G.neighbors(v)) bump(nb);
    };
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(cur.size()) == q) {
            best = std::max(best, covered);
            return;
        }
        for (int v = next; v <= n - (q - static_cast<int>(cur.size())); ++v) {
            cur.push_back(v);
            touch(v, +1);
            self(self, v + 1);
            touch(v, -1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return best;
}

long long mdep_neighborhood_bound(int q, int m, int d) {
    long long ball = 1;
    for (int c = 0; c < d; ++c) ball *= 2LL * m + 1;
    return q * ball;
}

}  // namespace depclt
