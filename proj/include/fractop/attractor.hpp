#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fractop/geometry.hpp"

namespace fractop {

inline constexpr std::uint64_t kDefaultCellBudget = 1'000'000;

// Index word j1...jk, most significant (outermost map) first. Symbols are 1-based.
class Address {
 public:
  Address() = default;
  explicit Address(std::vector<std::uint32_t> symbols) : symbols_(std::move(symbols)) {}

  std::size_t depth() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const std::vector<std::uint32_t>& symbols() const { return symbols_; }
  std::uint32_t operator[](std::size_t i) const { return symbols_[i]; }

  Address prepend(std::uint32_t j) const;
  Address append(std::uint32_t j) const;
  Address prefix(std::size_t len) const;
  Address drop_front(std::size_t count) const;
  bool starts_with(const Address& p) const;

  // Digits concatenated when every symbol < 10, otherwise dot separated; "-" when empty.
  std::string str() const;
  // Accepts "12", "1.2", "1,2" and "-".
  static Address parse(std::string_view text);

  friend auto operator<=>(const Address&, const Address&) = default;
  friend bool operator==(const Address&, const Address&) = default;

 private:
  std::vector<std::uint32_t> symbols_;
};

class IFSystem {
 public:
  IFSystem(std::string name, std::vector<AffineMap> maps, Box ambient);

  const std::string& name() const { return name_; }
  const std::vector<AffineMap>& maps() const { return maps_; }
  const Box& ambient() const { return ambient_; }
  std::size_t size() const { return maps_.size(); }
  std::size_t dim() const { return ambient_.dim(); }

  friend bool operator==(const IFSystem&, const IFSystem&) = default;

 private:
  std::string name_;
  std::vector<AffineMap> maps_;
  Box ambient_;
};

using IFSPtr = std::shared_ptr<const IFSystem>;

// "cmts", "sierpinski-carpet", "sierpinski-gasket".
IFSPtr preset(std::string_view name);
std::vector<std::string> preset_names();

Rational lipschitz_sum(const IFSystem& ifs);

struct Cell {
  Address address;
  Box box;
};

// Level-k approximation; cells sorted by address.
class CellSet {
 public:
  CellSet(IFSPtr ifs, std::size_t level, std::vector<Cell> cells);

  const IFSPtr& ifs() const { return ifs_; }
  std::size_t level() const { return level_; }
  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  std::size_t dim() const { return ifs_->dim(); }

  // Index of the cell with this address, or npos.
  std::size_t find(const Address& a) const;
  std::vector<Point> centers() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  IFSPtr ifs_;
  std::size_t level_;
  std::vector<Cell> cells_;
};

// Throws Error(ResourceLimit) naming m^k when it exceeds `budget`.
void check_budget(const IFSystem& ifs, std::size_t k, std::uint64_t budget);

CellSet level_zero(const IFSPtr& ifs);
CellSet hutchinson_step(const IFSystem& ifs, const CellSet& cells);
CellSet iterate_attractor(const IFSPtr& ifs, std::size_t k, std::uint64_t budget = kDefaultCellBudget);

Rational max_cell_diameter_squared(const CellSet& cells);

struct TraceEntry {
  std::size_t level;
  HausdorffDistance distance;  // between centers of X_level and X_{level+1}
};

std::vector<TraceEntry> convergence_trace(const IFSPtr& ifs, std::size_t k_max,
                                          std::uint64_t budget = kDefaultCellBudget);

// IFS definition text: name / dimension / box / map lines.
std::string format_ifs(const IFSystem& ifs);
IFSPtr parse_ifs(std::string_view text);

// CellSet export; embeds the IFS definition. Round-trips bit-exactly.
std::string export_cellset(const CellSet& cells);
CellSet import_cellset(std::string_view text);

}  // namespace fractop
