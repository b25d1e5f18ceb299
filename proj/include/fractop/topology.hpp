#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fractop/attractor.hpp"

namespace fractop {

// Cells are nodes, identified by their index in the CellSet (address order).
// Two nodes are adjacent iff their closed boxes share at least one point.
class AdjacencyGraph {
 public:
  explicit AdjacencyGraph(std::vector<std::vector<std::size_t>> neighbors);

  std::size_t node_count() const { return neighbors_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<std::size_t>& neighbors(std::size_t node) const { return neighbors_[node]; }
  bool adjacent(std::size_t a, std::size_t b) const;
  // Edges as (i, j) with i < j, lexicographic.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  std::vector<std::vector<std::size_t>> neighbors_;
  std::size_t edge_count_ = 0;
};

AdjacencyGraph build_adjacency(const CellSet& cells);

struct Components {
  std::size_t count = 0;
  // Per node: index of the smallest-address node in its component.
  std::vector<std::size_t> label;
};

Components connected_components(const AdjacencyGraph& graph);

struct MinGap {
  bool touching = false;
  Rational squared = 0;  // meaningful only when !touching
};

MinGap min_gap(const CellSet& cells);

struct ConditionReport {
  bool injective = false;                 // i) every map one to one
  bool fixed_points_not_singleton = false;  // ii)
  bool sum_below_one = false;             // iii)
  std::vector<Rational> determinants;
  std::vector<Point> fixed_points;           // one per map, map order
  std::vector<Point> distinct_fixed_points;  // lexicographic
  Rational lipschitz_sum = 0;
};

ConditionReport check_conditions(const IFSystem& ifs);

struct PerfectnessProxy {
  bool perfect = false;
  std::vector<Address> violations;  // level-k cells with < 2 distinct children
};

PerfectnessProxy perfectness_proxy(const CellSet& cells_k, const CellSet& cells_k1);

struct ClopenPartition {
  std::vector<Address> y;
  std::vector<Address> complement;
};

// Component of the smallest address as Y; nullopt when the cells form one component.
std::optional<ClopenPartition> clopen_partition(const CellSet& cells);

using Polyline = std::vector<Point>;

std::optional<Polyline> find_arc(const CellSet& cells, const Point& p, const Point& q);
std::optional<Polyline> find_arc(const CellSet& cells, const AdjacencyGraph& graph, const Point& p, const Point& q);

// Smallest index of a cell containing p, or CellSet::npos.
std::size_t locate(const CellSet& cells, const Point& p);

// Bounded complement components on the exact grid spanned by the cells.
std::size_t count_windows(const CellSet& cells, const Box& ambient, std::size_t max_grid_side = 4096);

struct LevelConnectivity {
  std::size_t level = 0;
  std::size_t component_count = 0;
  // Every component of this level lies inside exactly one component of the previous level.
  bool nested_in_parent = true;
};

std::vector<LevelConnectivity> nested_connectivity_report(const IFSPtr& ifs, std::size_t k_max,
                                                          std::uint64_t budget = kDefaultCellBudget);

}  // namespace fractop
