#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fractop/topology.hpp"

namespace fractop {

enum class ReportFormat { Text, Json };

ReportFormat parse_report_format(std::string_view name);

// Finite-resolution topological profile of X_k.
struct PropertyReport {
  std::string ifs_name;
  std::size_t dimension = 0;
  std::size_t level = 0;
  std::size_t map_count = 0;
  std::size_t cell_count = 0;
  std::size_t edge_count = 0;
  std::size_t component_count = 0;
  std::optional<MinGap> min_gap;  // absent at level 0
  bool clopen_partition_found = false;
  std::size_t clopen_y_size = 0;
  bool perfect_proxy = false;
  std::size_t perfect_proxy_level = 0;  // proxy compares this level with the next
  ConditionReport conditions;
  std::optional<std::size_t> window_count;  // 2-D only
  Rational lipschitz_sum = 0;
  Rational max_cell_diameter_squared = 0;
  std::vector<LevelConnectivity> nested;
  // Every level 1..k fully separated (components = m^level): finite evidence only.
  bool zero_dim_evidence = false;
};

PropertyReport analyze(const IFSPtr& ifs, std::size_t k, std::uint64_t budget = kDefaultCellBudget);

std::string format_report(const PropertyReport& r, ReportFormat format);

// Human summary, decimals with 6 significant digits.
std::string summarize_report(const PropertyReport& r);

}  // namespace fractop
