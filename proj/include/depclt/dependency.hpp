#pragma once

// Index lattices, m-dependence neighborhoods with the ranked extension used by
// the mixing expansion, and explicit dependency graphs (U-statistics).

#include <cstdint>
#include <map>
#include <vector>

namespace depclt {

using IndexPoint = std::vector<int>;

// A finite subset of Z^d. Points are kept in lexicographic order, so the dense
// id of a point doubles as its position in the tie-breaking order.
class IndexSet {
public:
    IndexSet(int d, std::vector<IndexPoint> points);

    static IndexSet line(int n);                       // {1, ..., n}
    static IndexSet box(const std::vector<int>& extent);  // {1..e_1} x ... x {1..e_d}

    int dimension() const { return d_; }
    int size() const { return static_cast<int>(pts_.size()); }
    const IndexPoint& point(int id) const { return pts_[id]; }
    int id_of(const IndexPoint& p) const;  // throws if absent

    int distance(int a, int b) const;  // max-norm distance between two ids

private:
    int d_;
    std::vector<IndexPoint> pts_;
    std::map<IndexPoint, int> ids_;
};

// Subsets of T are sorted, duplicate-free vectors of ids.
using IdSet = std::vector<int>;

// {i in T : dist(i, J) <= m}.
IdSet mdep_neighborhood(const IndexSet& T, int m, const IdSet& J);

// Rank of i among T \ N(J), ordered by distance to J and then lexicographically.
int rank_index(const IndexSet& T, const IdSet& J, int i, int m);

// N(J) together with the s lowest-ranked points outside it.
IdSet ranked_neighborhood(const IndexSet& T, const IdSet& J, int s, int m);

// Sorted list of T \ N(J) in rank order; entry r-1 has rank r.
IdSet rank_order(const IndexSet& T, const IdSet& J, int m);

class DependencyGraph {
public:
    explicit DependencyGraph(int n) : adj_(n) {}

    int size() const { return static_cast<int>(adj_.size()); }
    void add_edge(int a, int b);
    bool adjacent(int a, int b) const;
    const std::vector<int>& neighbors(int a) const { return adj_[a]; }

    // Optional labels, e.g. the index tuple of a U-statistic summand.
    std::vector<std::vector<int>> labels;

private:
    std::vector<std::vector<int>> adj_;
};

// Vertices are strictly increasing m-tuples of {1..n}; edges join tuples that
// share a coordinate.
DependencyGraph ustat_dependency_graph(int n, int m);

// Graph joining points of T at max-norm distance in [1, m].
DependencyGraph mdep_graph(const IndexSet& T, int m);

// J together with all graph neighbors of J.
IdSet neighborhood_closure(const DependencyGraph& G, const IdSet& J);

// Exact max over q-subsets of |closure|; throws BudgetError beyond max_subsets.
int max_neighborhood_size(const DependencyGraph& G, int q, std::uint64_t max_subsets = 5'000'000);

// Upper bound q (2m+1)^d for m-dependent lattice fields.
long long mdep_neighborhood_bound(int q, int m, int d);

}  // namespace depclt
