#include "fractop/topology.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "fractop/error.hpp"

namespace fractop {

// ---- graph -----------------------------------------------------------------

AdjacencyGraph::AdjacencyGraph(std::vector<std::vector<std::size_t>> neighbors) : neighbors_(std::move(neighbors)) {
  for (std::size_t i = 0; i < neighbors_.size(); ++i) {
    auto& n = neighbors_[i];
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    for (auto j : n) require(j != i && j < neighbors_.size(), "adjacency must be irreflexive and in range");
    edge_count_ += n.size();
  }
  edge_count_ /= 2;
}

bool AdjacencyGraph::adjacent(std::size_t a, std::size_t b) const {
  const auto& n = neighbors_[a];
  return std::binary_search(n.begin(), n.end(), b);
}

std::vector<std::pair<std::size_t, std::size_t>> AdjacencyGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < neighbors_.size(); ++i) {
    for (auto j : neighbors_[i]) {
      if (j > i) out.emplace_back(i, j);
    }
  }
  return out;
}

namespace {

// Hash grid over box lower corners with bucket side >= every box extent, so a
// box can only meet boxes whose lower corner lies within one bucket of it.
class BoxBuckets {
 public:
  explicit BoxBuckets(const CellSet& cells) : cells_(cells), axes_(cells.dim()) {
    const auto& first = cells.cells().front().box;
    for (std::size_t a = 0; a < axes_; ++a) {
      origin_[a] = first.lower()[a];
      side_[a] = 0;
    }
    for (const auto& c : cells.cells()) {
      for (std::size_t a = 0; a < axes_; ++a) {
        origin_[a] = std::min(origin_[a], c.box.lower()[a]);
        side_[a] = std::max(side_[a], Rational(c.box.upper()[a] - c.box.lower()[a]));
      }
    }
    for (std::size_t a = 0; a < axes_; ++a) {
      if (side_[a] == 0) side_[a] = 1;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& lo = cells.cells()[i].box.lower();
      long ix = index(lo[0], 0);
      long iy = axes_ > 1 ? index(lo[1], 1) : 0;
      buckets_[key(ix, iy)].push_back(i);
    }
  }

  template <class F>
  void for_candidates(std::size_t i, F&& visit) const {
    const auto& box = cells_.cells()[i].box;
    long range[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t a = 0; a < axes_; ++a) {
      range[a][0] = index(box.lower()[a] - side_[a], a);
      range[a][1] = index(box.upper()[a], a);
    }
    for (long x = range[0][0]; x <= range[0][1]; ++x) {
      for (long y = range[1][0]; y <= range[1][1]; ++y) {
        auto it = buckets_.find(key(x, y));
        if (it == buckets_.end()) continue;
        for (auto j : it->second) visit(j);
      }
    }
  }

 private:
  long index(const Rational& v, std::size_t axis) const {
    return fractop::floor(Rational((v - origin_[axis]) / side_[axis])).get_si();
  }
  static std::uint64_t key(long x, long y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) | static_cast<std::uint32_t>(y);
  }

  const CellSet& cells_;
  std::size_t axes_;
  Rational origin_[2];
  Rational side_[2];
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

}  // namespace

AdjacencyGraph build_adjacency(const CellSet& cells) {
  std::vector<std::vector<std::size_t>> nbrs(cells.size());
  if (cells.size() > 1) {
    BoxBuckets buckets(cells);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& bi = cells.cells()[i].box;
      buckets.for_candidates(i, [&](std::size_t j) {
        if (j > i && bi.intersects(cells.cells()[j].box)) {
          nbrs[i].push_back(j);
          nbrs[j].push_back(i);
        }
      });
    }
  }
  return AdjacencyGraph(std::move(nbrs));
}

Components connected_components(const AdjacencyGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (auto [a, b] : graph.edges()) {
    auto ra = find(a), rb = find(b);
    // Keeping the smaller index as root makes the root the component label.
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  Components c;
  c.label.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.label[i] = find(i);
    if (c.label[i] == i) ++c.count;
  }
  return c;
}

MinGap min_gap(const CellSet& cells) {
  require(cells.size() >= 2, "min_gap needs at least 2 cells");
  const auto& cs = cells.cells();
  std::vector<std::size_t> order(cs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return cs[a].box.lower()[0] < cs[b].box.lower()[0]; });
  std::optional<Rational> best;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const auto& bi = cs[order[oi]].box;
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const auto& bj = cs[order[oj]].box;
      if (best && bj.lower()[0] > bi.upper()[0]) {
        Rational dx = bj.lower()[0] - bi.upper()[0];
        if (dx * dx >= *best) break;
      }
      Rational d = bi.squared_distance_to(bj);
      if (d == 0) return MinGap{true, 0};
      if (!best || d < *best) best = std::move(d);
    }
  }
  return MinGap{false, *best};
}

ConditionReport check_conditions(const IFSystem& ifs) {
  ConditionReport r;
  r.injective = true;
  for (const auto& m : ifs.maps()) {
    r.determinants.push_back(m.determinant());
    if (r.determinants.back() == 0) r.injective = false;
    r.fixed_points.push_back(fixed_point(m));
  }
  r.distinct_fixed_points = r.fixed_points;
  std::sort(r.distinct_fixed_points.begin(), r.distinct_fixed_points.end());
  r.distinct_fixed_points.erase(std::unique(r.distinct_fixed_points.begin(), r.distinct_fixed_points.end()),
                                r.distinct_fixed_points.end());
  r.fixed_points_not_singleton = r.distinct_fixed_points.size() >= 2;
  r.lipschitz_sum = lipschitz_sum(ifs);
  r.sum_below_one = r.lipschitz_sum < 1;
  return r;
}

PerfectnessProxy perfectness_proxy(const CellSet& cells_k, const CellSet& cells_k1) {
  require(cells_k1.level() == cells_k.level() + 1, "perfectness proxy needs consecutive levels k and k+1");
  require(cells_k.ifs() == cells_k1.ifs() || *cells_k.ifs() == *cells_k1.ifs(),
          "perfectness proxy needs cell sets of the same IFS");
  const auto m = static_cast<std::uint32_t>(cells_k.ifs()->size());
  PerfectnessProxy out;
  for (const auto& parent : cells_k.cells()) {
    std::vector<const Box*> distinct;
    for (std::uint32_t j = 1; j <= m; ++j) {
      auto idx = cells_k1.find(parent.address.append(j));
      require(idx != CellSet::npos, "level k+1 cell set is not the refinement of level k");
      const Box& child = cells_k1.cells()[idx].box;
      require(parent.box.contains(child), "child cell " + cells_k1.cells()[idx].address.str() +
                                              " is not inside its parent");
      if (std::none_of(distinct.begin(), distinct.end(), [&](const Box* b) { return *b == child; })) {
        distinct.push_back(&child);
      }
    }
    if (distinct.size() < 2) out.violations.push_back(parent.address);
  }
  out.perfect = out.violations.empty();
  return out;
}

std::optional<ClopenPartition> clopen_partition(const CellSet& cells) {
  require(cells.size() >= 2, "clopen partition needs at least 2 cells");
  auto comps = connected_components(build_adjacency(cells));
  if (comps.count == 1) return std::nullopt;
  ClopenPartition part;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    (comps.label[i] == 0 ? part.y : part.complement).push_back(cells.cells()[i].address);
  }
  return part;
}

std::size_t locate(const CellSet& cells, const Point& p) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells.cells()[i].box.contains(p)) return i;
  }
  return CellSet::npos;
}

std::optional<Polyline> find_arc(const CellSet& cells, const Point& p, const Point& q) {
  return find_arc(cells, build_adjacency(cells), p, q);
}

std::optional<Polyline> find_arc(const CellSet& cells, const AdjacencyGraph& graph, const Point& p,
                                 const Point& q) {
  require(graph.node_count() == cells.size(), "graph does not belong to the cell set");
  require(p.size() == cells.dim() && q.size() == cells.dim(), "arc endpoint dimension mismatch");
  const auto src = locate(cells, p);
  const auto dst = locate(cells, q);
  require(src != CellSet::npos, "arc endpoint p = " + to_string(p) + " lies outside every cell");
  require(dst != CellSet::npos, "arc endpoint q = " + to_string(q) + " lies outside every cell");
  if (src == dst) return Polyline{p, q};

  // BFS with neighbours in index order gives a deterministic shortest cell path.
  constexpr auto unseen = CellSet::npos;
  std::vector<std::size_t> prev(cells.size(), unseen);
  std::deque<std::size_t> queue{src};
  prev[src] = src;
  while (!queue.empty() && prev[dst] == unseen) {
    auto cur = queue.front();
    queue.pop_front();
    for (auto nb : graph.neighbors(cur)) {
      if (prev[nb] != unseen) continue;
      prev[nb] = cur;
      queue.push_back(nb);
    }
  }
  if (prev[dst] == unseen) return std::nullopt;

  std::vector<std::size_t> path;
  for (auto cur = dst; cur != src; cur = prev[cur]) path.push_back(cur);
  path.push_back(src);
  std::reverse(path.begin(), path.end());

  Polyline line{p};
  auto push = [&](Point v) {
    if (line.back() != v) line.push_back(std::move(v));
  };
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& box = cells.cells()[path[i]].box;
    push(box.center());
    if (i + 1 < path.size()) {
      auto shared = box.intersection(cells.cells()[path[i + 1]].box);
      if (!shared) fail(ErrorCode::Internal, "adjacent cells without a common point");
      push(shared->center());
    }
  }
  push(q);
  return line;
}

std::size_t count_windows(const CellSet& cells, const Box& ambient, std::size_t max_grid_side) {
  if (cells.dim() != 2 || ambient.dim() != 2) fail(ErrorCode::Unsupported, "window counting needs 2-D cells");
  for (const auto& c : cells.cells()) {
    if (!ambient.contains(c.box)) fail(ErrorCode::Unsupported, "cell " + c.address.str() + " leaves the ambient box");
  }
  Rational width[2];
  for (std::size_t a = 0; a < 2; ++a) {
    width[a] = ambient.upper()[a] - ambient.lower()[a];
    if (width[a] == 0) fail(ErrorCode::Unsupported, "degenerate ambient box");
  }
  auto rel = [&](const Rational& v, std::size_t a) { return Rational((v - ambient.lower()[a]) / width[a]); };

  // Grid side: lcm of all relative coordinate denominators (3^k for the carpet).
  mpz_class side = 1;
  for (const auto& c : cells.cells()) {
    for (std::size_t a = 0; a < 2; ++a) {
      for (const Rational* v : {&c.box.lower()[a], &c.box.upper()[a]}) {
        mpz_lcm(side.get_mpz_t(), side.get_mpz_t(), rel(*v, a).get_den().get_mpz_t());
        if (side > max_grid_side) {
          fail(ErrorCode::Unsupported, "cells do not align to a grid of side <= " + std::to_string(max_grid_side));
        }
      }
    }
  }
  const auto n = static_cast<std::size_t>(side.get_ui());
  auto grid = [&](const Rational& v, std::size_t a) {
    Rational t = rel(v, a) * n;
    return static_cast<std::size_t>(t.get_num().get_ui());
  };

  std::vector<char> covered(n * n, 0);
  for (const auto& c : cells.cells()) {
    auto x0 = grid(c.box.lower()[0], 0), x1 = grid(c.box.upper()[0], 0);
    auto y0 = grid(c.box.lower()[1], 1), y1 = grid(c.box.upper()[1], 1);
    for (auto x = x0; x < x1; ++x) {
      for (auto y = y0; y < y1; ++y) covered[x * n + y] = 1;
    }
  }

  // Uncovered squares sharing an edge are joined; corner contact is blocked by
  // the covering cells meeting at that corner.
  std::vector<char> seen(n * n, 0);
  std::size_t windows = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < n * n; ++start) {
    if (covered[start] || seen[start]) continue;
    bool touches_boundary = false;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      auto s = stack.back();
      stack.pop_back();
      auto x = s / n, y = s % n;
      if (x == 0 || y == 0 || x == n - 1 || y == n - 1) touches_boundary = true;
      auto visit = [&](std::size_t nx, std::size_t ny) {
        auto t = nx * n + ny;
        if (!covered[t] && !seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
      };
      if (x > 0) visit(x - 1, y);
      if (x + 1 < n) visit(x + 1, y);
      if (y > 0) visit(x, y - 1);
      if (y + 1 < n) visit(x, y + 1);
    }
    if (!touches_boundary) ++windows;
  }
  return windows;
}

std::vector<LevelConnectivity> nested_connectivity_report(const IFSPtr& ifs, std::size_t k_max,
                                                          std::uint64_t budget) {
  require(ifs != nullptr, "null IFS");
  check_budget(*ifs, k_max, budget);
  std::vector<LevelConnectivity> out;
  CellSet cur = level_zero(ifs);
  Components cur_comp = connected_components(build_adjacency(cur));
  out.push_back({0, cur_comp.count, true});
  for (std::size_t k = 1; k <= k_max; ++k) {
    CellSet next = hutchinson_step(*ifs, cur);
    Components next_comp = connected_components(build_adjacency(next));
    // child component label -> parent component label
    std::unordered_map<std::size_t, std::size_t> owner;
    bool nested = true;
    for (std::size_t i = 0; i < next.size(); ++i) {
      auto parent = cur.find(next.cells()[i].address.prefix(k - 1));
      if (parent == CellSet::npos) fail(ErrorCode::Internal, "missing parent cell");
      if (!cur.cells()[parent].box.contains(next.cells()[i].box)) nested = false;
      auto [it, inserted] = owner.emplace(next_comp.label[i], cur_comp.label[parent]);
      if (!inserted && it->second != cur_comp.label[parent]) nested = false;
    }
    out.push_back({k, next_comp.count, nested});
    cur = std::move(next);
    cur_comp = std::move(next_comp);
  }
  return out;
}

}  // namespace fractop
