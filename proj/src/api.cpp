#include "invopt/api.hpp"

#include "invopt/errors.hpp"
#include "invopt/flowpath.hpp"
#include "invopt/inverse.hpp"
#include "invopt/matching.hpp"
#include "invopt/matroid.hpp"

namespace invopt {

InverseResult solve_instance(const Instance& inst, OptSense sense,
                             const QpSettings& qs) {
  validate_instance(inst);
  switch (inst.kind) {
    case Kind::Matroid: {
      auto m = instance_matroid(inst);
      if (sense != OptSense::Max)
        throw ValidationError("matroid inverse is a max problem");
      return inverse_matroid(*m, inst.weights, inst.designated, inst.delta,
                             qs);
    }
    case Kind::MatroidIntersection: {
      auto [m1, m2] = instance_matroid_pair(inst);
      if (sense != OptSense::Max)
        throw ValidationError("matroid-intersection inverse is a max problem");
      return inverse_matroid_intersection(*m1, *m2, inst.weights,
                                          inst.designated, inst.delta, qs);
    }
    case Kind::Arborescence:
      return inverse_arborescence(*inst.digraph, inst.weights, inst.designated,
                                  inst.root, inst.delta, sense, qs);
    case Kind::StPath:
      return inverse_st_path(*inst.digraph, inst.weights, inst.source,
                             inst.sink, inst.designated, inst.delta, qs);
    case Kind::PerfectMatching:
      if (sense != OptSense::Max)
        throw ValidationError("perfect-matching inverse is a max problem");
      return inverse_perfect_matching(*inst.bipartite, inst.weights,
                                      inst.designated, inst.delta, qs);
    case Kind::MinCostFlow: {
      FlowInstance fi{*inst.digraph, inst.capacities, inst.flow, inst.source,
                      inst.sink};
      return inverse_min_cost_flow(fi, inst.weights, inst.delta, qs);
    }
    case Kind::SpTree:
      return inverse_sp_tree(*inst.digraph, inst.weights, inst.root,
                             inst.designated, inst.delta, qs);
  }
  throw ValidationError("unhandled instance kind");
}

}  // namespace invopt
