#include "fractop/analysis.hpp"

#include <sstream>

#include "fractop/error.hpp"
#include "json.hpp"

namespace fractop {

ReportFormat parse_report_format(std::string_view name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "json") return ReportFormat::Json;
  fail(ErrorCode::InvalidInput, "unknown format '" + std::string(name) + "' (expected text or json)");
}

PropertyReport analyze(const IFSPtr& ifs, std::size_t k, std::uint64_t budget) {
  require(ifs != nullptr, "null IFS");
  check_budget(*ifs, k, budget);
  PropertyReport r;
  r.ifs_name = ifs->name();
  r.dimension = ifs->dim();
  r.level = k;
  r.map_count = ifs->size();

  CellSet cells = iterate_attractor(ifs, k, budget);
  auto graph = build_adjacency(cells);
  auto comps = connected_components(graph);
  r.cell_count = cells.size();
  r.edge_count = graph.edge_count();
  r.component_count = comps.count;
  if (cells.size() >= 2) {
    r.min_gap = min_gap(cells);
    auto part = clopen_partition(cells);
    r.clopen_partition_found = part.has_value();
    if (part) r.clopen_y_size = part->y.size();
  }

  // Perfectness proxy compares X_k with X_{k+1} when the budget allows, else X_{k-1} with X_k.
  bool next_fits = true;
  try {
    check_budget(*ifs, k + 1, budget);
  } catch (const Error&) {
    next_fits = false;
  }
  if (next_fits) {
    r.perfect_proxy = perfectness_proxy(cells, hutchinson_step(*ifs, cells)).perfect;
    r.perfect_proxy_level = k;
  } else {
    require(k >= 1, "budget too small for any perfectness proxy");
    CellSet prev = iterate_attractor(ifs, k - 1, budget);
    r.perfect_proxy = perfectness_proxy(prev, cells).perfect;
    r.perfect_proxy_level = k - 1;
  }

  r.conditions = check_conditions(*ifs);
  if (ifs->dim() == 2) r.window_count = count_windows(cells, ifs->ambient());
  r.lipschitz_sum = lipschitz_sum(*ifs);
  r.max_cell_diameter_squared = max_cell_diameter_squared(cells);
  r.nested = nested_connectivity_report(ifs, k, budget);

  r.zero_dim_evidence = k >= 1;
  mpz_class expected = 1;
  for (const auto& lvl : r.nested) {
    if (lvl.level >= 1 && expected * ifs->size() != lvl.component_count) r.zero_dim_evidence = false;
    if (lvl.level >= 1) expected *= ifs->size();
  }
  return r;
}

namespace {

using nlohmann::ordered_json;

ordered_json to_json(const PropertyReport& r) {
  ordered_json j;
  j["ifs"] = r.ifs_name;
  j["dimension"] = r.dimension;
  j["level"] = r.level;
  j["map_count"] = r.map_count;
  j["cell_count"] = r.cell_count;
  j["edge_count"] = r.edge_count;
  j["component_count"] = r.component_count;
  if (r.min_gap) {
    j["min_gap_touching"] = r.min_gap->touching;
    j["min_gap_squared"] = r.min_gap->touching ? std::string("0/1") : to_string(r.min_gap->squared);
  } else {
    j["min_gap_touching"] = nullptr;
    j["min_gap_squared"] = nullptr;
  }
  j["clopen_partition_found"] = r.clopen_partition_found;
  j["clopen_y_size"] = r.clopen_y_size;
  j["perfect_proxy"] = r.perfect_proxy;
  j["perfect_proxy_levels"] = std::to_string(r.perfect_proxy_level) + "->" + std::to_string(r.perfect_proxy_level + 1);
  j["condition_i_injective"] = r.conditions.injective;
  j["condition_ii_fixed_points_not_singleton"] = r.conditions.fixed_points_not_singleton;
  j["condition_iii_sum_below_one"] = r.conditions.sum_below_one;
  ordered_json fps = ordered_json::array();
  for (const auto& p : r.conditions.distinct_fixed_points) fps.push_back(to_string(p));
  j["fixed_points"] = fps;
  j["lipschitz_sum"] = to_string(r.lipschitz_sum);
  if (r.window_count) {
    j["window_count"] = *r.window_count;
  } else {
    j["window_count"] = nullptr;
  }
  j["max_cell_diameter_squared"] = to_string(r.max_cell_diameter_squared);
  ordered_json nested = ordered_json::array();
  for (const auto& l : r.nested) {
    nested.push_back({{"level", l.level}, {"component_count", l.component_count}, {"nested_in_parent", l.nested_in_parent}});
  }
  j["nested_connectivity"] = nested;
  j["zero_dim_evidence_at_depth"] = r.level;
  j["zero_dim_evidence"] = r.zero_dim_evidence;
  return j;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_report(const PropertyReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(r).dump(2) + "\n";
  std::ostringstream os;
  os << "ifs: " << r.ifs_name << '\n';
  os << "dimension: " << r.dimension << '\n';
  os << "level: " << r.level << '\n';
  os << "map_count: " << r.map_count << '\n';
  os << "cell_count: " << r.cell_count << '\n';
  os << "edge_count: " << r.edge_count << '\n';
  os << "component_count: " << r.component_count << '\n';
  if (r.min_gap) {
    os << "min_gap_touching: " << yes_no(r.min_gap->touching) << '\n';
    os << "min_gap_squared: " << (r.min_gap->touching ? std::string("0/1") : to_string(r.min_gap->squared)) << '\n';
  } else {
    os << "min_gap_touching: n/a\nmin_gap_squared: n/a\n";
  }
  os << "clopen_partition_found: " << yes_no(r.clopen_partition_found) << '\n';
  os << "clopen_y_size: " << r.clopen_y_size << '\n';
  os << "perfect_proxy: " << yes_no(r.perfect_proxy) << '\n';
  os << "perfect_proxy_levels: " << r.perfect_proxy_level << "->" << r.perfect_proxy_level + 1 << '\n';
  os << "condition_i_injective: " << yes_no(r.conditions.injective) << '\n';
  os << "condition_ii_fixed_points_not_singleton: " << yes_no(r.conditions.fixed_points_not_singleton) << '\n';
  os << "condition_iii_sum_below_one: " << yes_no(r.conditions.sum_below_one) << '\n';
  os << "fixed_points:";
  for (const auto& p : r.conditions.distinct_fixed_points) os << ' ' << to_string(p);
  os << '\n';
  os << "lipschitz_sum: " << to_string(r.lipschitz_sum) << '\n';
  os << "window_count: " << (r.window_count ? std::to_string(*r.window_count) : std::string("n/a")) << '\n';
  os << "max_cell_diameter_squared: " << to_string(r.max_cell_diameter_squared) << '\n';
  for (const auto& l : r.nested) {
    os << "nested_level_" << l.level << ": components=" << l.component_count
       << " nested_in_parent=" << yes_no(l.nested_in_parent) << '\n';
  }
  os << "zero_dim_evidence_at_depth_" << r.level << ": " << yes_no(r.zero_dim_evidence) << '\n';
  return os.str();
}

std::string summarize_report(const PropertyReport& r) {
  std::ostringstream os;
  os << r.ifs_name << " at depth " << r.level << " (" << r.cell_count << " cells)\n";
  os << "  components          " << r.component_count << '\n';
  if (r.min_gap) {
    os << "  min gap             "
       << (r.min_gap->touching ? std::string("0 (cells touch)") : to_decimal(r.min_gap->squared) + " (squared)") << '\n';
  }
  os << "  lipschitz sum       " << to_decimal(r.lipschitz_sum) << " (" << to_string(r.lipschitz_sum) << ")\n";
  os << "  conditions i/ii/iii " << yes_no(r.conditions.injective) << '/'
     << yes_no(r.conditions.fixed_points_not_singleton) << '/' << yes_no(r.conditions.sum_below_one) << '\n';
  os << "  perfect proxy       " << yes_no(r.perfect_proxy) << '\n';
  if (r.window_count) os << "  windows             " << *r.window_count << '\n';
  os << "  max cell diameter^2 " << to_decimal(r.max_cell_diameter_squared) << '\n';
  os << "  clopen split        " << (r.clopen_partition_found ? "found" : "none") << '\n';
  os << "  0-dim evidence at depth " << r.level << ": " << (r.zero_dim_evidence ? "yes" : "no") << '\n';
  return os.str();
}

}  // namespace fractop
