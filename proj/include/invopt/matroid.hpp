#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "invopt/graph.hpp"

namespace invopt {

// Independence-query interface over a ground set 0..ground_size-1.
// Queries take a duplicate-free element list (order irrelevant).
class MatroidOracle {
 public:
  virtual ~MatroidOracle() = default;
  virtual int ground_size() const = 0;
  virtual bool independent(std::span<const int> elements) const = 0;
};

// Independent iff the edge subset is acyclic in the underlying undirected
// graph (arc directions ignored; self-loops are matroid loops).
class GraphicMatroid : public MatroidOracle {
 public:
  GraphicMatroid(int num_vertices, std::vector<std::array<int, 2>> edges);
  static GraphicMatroid from_digraph(const Digraph& g);

  int ground_size() const override;
  bool independent(std::span<const int> elements) const override;

  // Fast path for circuits: the tree path between the endpoints of f in the
  // forest B, plus f itself. Must agree with the generic oracle computation.
  std::vector<int> fundamental_circuit(std::span<const int> basis, int f) const;

  int num_vertices() const { return num_vertices_; }
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }

 private:
  int num_vertices_;
  std::vector<std::array<int, 2>> edges_;
};

// Independent iff every class contributes at most its limit.
// Elements outside all classes are free.
class PartitionMatroid : public MatroidOracle {
 public:
  PartitionMatroid(int ground_size, std::vector<std::vector<int>> classes,
                   std::vector<int> limits);

  int ground_size() const override;
  bool independent(std::span<const int> elements) const override;

  const std::vector<std::vector<int>>& classes() const { return classes_; }
  const std::vector<int>& limits() const { return limits_; }

 private:
  int ground_size_;
  std::vector<std::vector<int>> classes_;
  std::vector<int> limits_;
  std::vector<int> class_of_;  // -1 for free elements
};

class UniformMatroid : public MatroidOracle {
 public:
  UniformMatroid(int ground_size, int rank)
      : ground_size_(ground_size), rank_(rank) {}

  int ground_size() const override { return ground_size_; }
  bool independent(std::span<const int> elements) const override {
    return static_cast<int>(elements.size()) <= rank_;
  }

 private:
  int ground_size_;
  int rank_;
};

bool is_basis(const MatroidOracle& m, std::span<const int> basis);

// The unique circuit C_B(f) in B + f, elements sorted ascending.
// Throws ValidationError if B + f is independent (B was not a basis).
std::vector<int> circuit(const MatroidOracle& m, std::span<const int> basis,
                         int f);

// All bases in lexicographic order (as sorted id sequences).
// Guarded: ground_size <= 20.
std::vector<std::vector<int>> enumerate_bases(const MatroidOracle& m);

// All sets that are bases of both matroids, lexicographic order; same guard.
std::vector<std::vector<int>> enumerate_common_bases(const MatroidOracle& m1,
                                                     const MatroidOracle& m2);

int matroid_rank(const MatroidOracle& m);

// The graphic + partition pair whose common bases are exactly the
// r-arborescences of g (in-arc classes, limit 1 per non-root, 0 for root).
std::pair<GraphicMatroid, PartitionMatroid> arborescence_matroids(
    const Digraph& g, int root);

}  // namespace invopt
