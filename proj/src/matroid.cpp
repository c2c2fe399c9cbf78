#include "invopt/matroid.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "invopt/errors.hpp"

namespace invopt {
namespace {

constexpr int kEnumerationGuard = 20;

// Union-find over vertices; returns false as soon as an edge closes a cycle.
class Forest {
 public:
  explicit Forest(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }
  bool link(int u, int v) {
    int ru = find(u), rv = find(v);
    if (ru == rv) return false;
    parent_[ru] = rv;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

GraphicMatroid::GraphicMatroid(int num_vertices,
                               std::vector<std::array<int, 2>> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  for (const auto& e : edges_)
    if (e[0] < 0 || e[0] >= num_vertices_ || e[1] < 0 || e[1] >= num_vertices_)
      throw ValidationError("graphic matroid edge endpoint out of range");
}

GraphicMatroid GraphicMatroid::from_digraph(const Digraph& g) {
  return GraphicMatroid(g.node_count, g.arcs);
}

int GraphicMatroid::ground_size() const {
  return static_cast<int>(edges_.size());
}

bool GraphicMatroid::independent(std::span<const int> elements) const {
  Forest forest(num_vertices_);
  for (int e : elements)
    if (!forest.link(edges_[e][0], edges_[e][1])) return false;
  return true;
}

std::vector<int> GraphicMatroid::fundamental_circuit(
    std::span<const int> basis, int f) const {
  // Walk the tree path between the endpoints of f inside the forest `basis`.
  int src = edges_[f][0], dst = edges_[f][1];
  if (src == dst) return {f};  // self-loop: the circuit is f alone
  std::vector<std::vector<std::pair<int, int>>> adj(num_vertices_);
  for (int e : basis) {
    adj[edges_[e][0]].emplace_back(edges_[e][1], e);
    adj[edges_[e][1]].emplace_back(edges_[e][0], e);
  }
  std::vector<int> via_edge(num_vertices_, -1), via_node(num_vertices_, -1);
  std::vector<int> stack = {src};
  std::vector<char> seen(num_vertices_, 0);
  seen[src] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == dst) break;
    for (const auto& [u, e] : adj[v]) {
      if (seen[u]) continue;
      seen[u] = 1;
      via_edge[u] = e;
      via_node[u] = v;
      stack.push_back(u);
    }
  }
  if (!seen[dst])
    throw ValidationError("fundamental_circuit: basis does not connect f");
  std::vector<int> out = {f};
  for (int v = dst; v != src; v = via_node[v]) out.push_back(via_edge[v]);
  std::sort(out.begin(), out.end());
  return out;
}

PartitionMatroid::PartitionMatroid(int ground_size,
                                   std::vector<std::vector<int>> classes,
                                   std::vector<int> limits)
    : ground_size_(ground_size),
      classes_(std::move(classes)),
      limits_(std::move(limits)),
      class_of_(ground_size, -1) {
  if (classes_.size() != limits_.size())
    throw ValidationError("partition matroid: classes/limits length mismatch");
  for (size_t c = 0; c < classes_.size(); ++c) {
    if (limits_[c] < 0)
      throw ValidationError("partition matroid: negative class limit");
    for (int e : classes_[c]) {
      if (e < 0 || e >= ground_size_)
        throw ValidationError("partition matroid: element id out of range");
      if (class_of_[e] != -1)
        throw ValidationError("partition matroid: classes not disjoint");
      class_of_[e] = static_cast<int>(c);
    }
  }
}

int PartitionMatroid::ground_size() const { return ground_size_; }

bool PartitionMatroid::independent(std::span<const int> elements) const {
  std::vector<int> used(classes_.size(), 0);
  for (int e : elements) {
    int c = class_of_[e];
    if (c >= 0 && ++used[c] > limits_[c]) return false;
  }
  return true;
}

bool is_basis(const MatroidOracle& m, std::span<const int> basis) {
  std::vector<int> b(basis.begin(), basis.end());
  if (!m.independent(b)) return false;
  std::vector<char> in(m.ground_size(), 0);
  for (int e : b) in[e] = 1;
  b.push_back(-1);
  for (int f = 0; f < m.ground_size(); ++f) {
    if (in[f]) continue;
    b.back() = f;
    if (m.independent(b)) return false;
  }
  return true;
}

std::vector<int> circuit(const MatroidOracle& m, std::span<const int> basis,
                         int f) {
  std::vector<int> with_f(basis.begin(), basis.end());
  for (int e : with_f)
    if (e == f) throw ValidationError("circuit: f already in basis");
  with_f.push_back(f);
  if (m.independent(with_f))
    throw ValidationError("circuit: B + f independent, B was not a basis");
  if (const auto* graphic = dynamic_cast<const GraphicMatroid*>(&m))
    return graphic->fundamental_circuit(basis, f);
  // Generic path: C_B(f) = {f} + { e in B : B - e + f independent }.
  std::vector<int> out = {f};
  std::vector<int> probe = with_f;
  for (size_t i = 0; i + 1 < with_f.size(); ++i) {
    std::swap(probe[i], probe.back());
    probe.pop_back();
    if (m.independent(probe)) out.push_back(with_f[i]);
    probe.push_back(with_f[i]);
    std::swap(probe[i], probe.back());
  }
  std::sort(out.begin(), out.end());
  return out;
}

int matroid_rank(const MatroidOracle& m) {
  std::vector<int> acc;
  for (int e = 0; e < m.ground_size(); ++e) {
    acc.push_back(e);
    if (!m.independent(acc)) acc.pop_back();
  }
  return static_cast<int>(acc.size());
}

namespace {

// All size-r subsets in lexicographic order, filtered by pred.
template <typename Pred>
std::vector<std::vector<int>> lex_subsets(int n, int r, Pred pred) {
  std::vector<std::vector<int>> out;
  if (r > n) return out;
  std::vector<int> pick(r);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    if (pred(pick)) out.push_back(pick);
    int i = r - 1;
    while (i >= 0 && pick[i] == n - r + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

void check_guard(const MatroidOracle& m) {
  if (m.ground_size() > kEnumerationGuard)
    throw GuardError("matroid enumeration guarded at " +
                     std::to_string(kEnumerationGuard) + " elements");
}

}  // namespace

std::vector<std::vector<int>> enumerate_bases(const MatroidOracle& m) {
  check_guard(m);
  int r = matroid_rank(m);
  return lex_subsets(m.ground_size(), r, [&](const std::vector<int>& s) {
    return m.independent(s);
  });
}

std::vector<std::vector<int>> enumerate_common_bases(const MatroidOracle& m1,
                                                     const MatroidOracle& m2) {
  if (m1.ground_size() != m2.ground_size())
    throw ValidationError("common bases: ground sets differ");
  check_guard(m1);
  int r1 = matroid_rank(m1), r2 = matroid_rank(m2);
  if (r1 != r2) return {};
  return lex_subsets(m1.ground_size(), r1, [&](const std::vector<int>& s) {
    return m1.independent(s) && m2.independent(s);
  });
}

std::pair<GraphicMatroid, PartitionMatroid> arborescence_matroids(
    const Digraph& g, int root) {
  if (root < 0 || root >= g.node_count)
    throw ValidationError("arborescence root out of range");
  std::vector<std::vector<int>> in_arcs(g.node_count);
  for (int a = 0; a < g.arc_count(); ++a) in_arcs[g.head(a)].push_back(a);
  std::vector<std::vector<int>> classes;
  std::vector<int> limits;
  for (int v = 0; v < g.node_count; ++v) {
    if (in_arcs[v].empty()) continue;
    classes.push_back(in_arcs[v]);
    limits.push_back(v == root ? 0 : 1);
  }
  return {GraphicMatroid::from_digraph(g),
          PartitionMatroid(g.arc_count(), std::move(classes),
                           std::move(limits))};
}

}  // namespace invopt
