#include "fractop/attractor.hpp"

#include <algorithm>
#include <sstream>

#include "fractop/error.hpp"

namespace fractop {

// ---- Address ---------------------------------------------------------------

Address Address::prepend(std::uint32_t j) const {
  std::vector<std::uint32_t> s;
  s.reserve(symbols_.size() + 1);
  s.push_back(j);
  s.insert(s.end(), symbols_.begin(), symbols_.end());
  return Address(std::move(s));
}

Address Address::append(std::uint32_t j) const {
  auto s = symbols_;
  s.push_back(j);
  return Address(std::move(s));
}

Address Address::prefix(std::size_t len) const {
  len = std::min(len, symbols_.size());
  return Address(std::vector<std::uint32_t>(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(len)));
}

Address Address::drop_front(std::size_t count) const {
  count = std::min(count, symbols_.size());
  return Address(std::vector<std::uint32_t>(symbols_.begin() + static_cast<std::ptrdiff_t>(count), symbols_.end()));
}

bool Address::starts_with(const Address& p) const {
  return p.depth() <= depth() && std::equal(p.symbols_.begin(), p.symbols_.end(), symbols_.begin());
}

std::string Address::str() const {
  if (symbols_.empty()) return "-";
  bool compact = std::all_of(symbols_.begin(), symbols_.end(), [](auto s) { return s < 10; });
  std::string out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!compact && i) out += '.';
    out += std::to_string(symbols_[i]);
  }
  return out;
}

Address Address::parse(std::string_view text) {
  if (text == "-" || text.empty()) return Address();
  std::vector<std::uint32_t> s;
  bool separated = text.find_first_of(".,") != std::string_view::npos;
  if (!separated) {
    for (char c : text) {
      require(c >= '1' && c <= '9', "malformed address '" + std::string(text) + "'");
      s.push_back(static_cast<std::uint32_t>(c - '0'));
    }
    return Address(std::move(s));
  }
  std::uint32_t cur = 0;
  bool have = false;
  for (char c : text) {
    if (c == '.' || c == ',') {
      require(have && cur >= 1, "malformed address '" + std::string(text) + "'");
      s.push_back(cur);
      cur = 0;
      have = false;
    } else {
      require(c >= '0' && c <= '9', "malformed address '" + std::string(text) + "'");
      cur = cur * 10 + static_cast<std::uint32_t>(c - '0');
      have = true;
    }
  }
  require(have && cur >= 1, "malformed address '" + std::string(text) + "'");
  s.push_back(cur);
  return Address(std::move(s));
}

// ---- IFSystem --------------------------------------------------------------

namespace {

std::vector<Point> box_corners(const Box& b) {
  std::vector<Point> corners;
  const std::size_t n = b.dim();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Point c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1 ? b.upper()[i] : b.lower()[i];
    corners.push_back(std::move(c));
  }
  return corners;
}

}  // namespace

IFSystem::IFSystem(std::string name, std::vector<AffineMap> maps, Box ambient)
    : name_(std::move(name)), maps_(std::move(maps)), ambient_(std::move(ambient)) {
  require(maps_.size() >= 2, "an IFS needs at least 2 maps, got " + std::to_string(maps_.size()));
  require(ambient_.dim() <= 2, "ambient dimension must be 1 or 2");
  auto corners = box_corners(ambient_);
  for (std::size_t j = 0; j < maps_.size(); ++j) {
    require(maps_[j].dim() == ambient_.dim(), "map " + std::to_string(j + 1) + " has the wrong dimension");
    // Affine image of a box is the hull of its corner images.
    for (const auto& c : corners) {
      require(ambient_.contains(apply_map(maps_[j], c)),
              "map " + std::to_string(j + 1) + " does not send the ambient box into itself");
    }
  }
}

IFSPtr preset(std::string_view name) {
  const Rational third(1, 3), two_thirds(2, 3), half(1, 2);
  if (name == "cmts") {
    return std::make_shared<IFSystem>("cmts",
                                      std::vector{AffineMap::diagonal({third}, {Rational(0)}),
                                                  AffineMap::diagonal({third}, {two_thirds})},
                                      Box::unit(1));
  }
  if (name == "sierpinski-carpet") {
    // f_1..f_8: bottom row left to right, middle row without the centre, top row.
    const Rational offs[3] = {Rational(0), third, two_thirds};
    std::vector<AffineMap> maps;
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) {
        if (row == 1 && col == 1) continue;
        maps.push_back(AffineMap::diagonal({third, third}, {offs[col], offs[row]}));
      }
    }
    return std::make_shared<IFSystem>("sierpinski-carpet", std::move(maps), Box::unit(2));
  }
  if (name == "sierpinski-gasket") {
    std::vector<AffineMap> maps{AffineMap::diagonal({half, half}, {Rational(0), Rational(0)}),
                                AffineMap::diagonal({half, half}, {half, Rational(0)}),
                                AffineMap::diagonal({half, half}, {Rational(0), half})};
    return std::make_shared<IFSystem>("sierpinski-gasket", std::move(maps), Box::unit(2));
  }
  fail(ErrorCode::InvalidInput, "unknown preset '" + std::string(name) +
                                    "' (expected cmts, sierpinski-carpet or sierpinski-gasket)");
}

std::vector<std::string> preset_names() { return {"cmts", "sierpinski-carpet", "sierpinski-gasket"}; }

Rational lipschitz_sum(const IFSystem& ifs) {
  Rational s = 0;
  for (const auto& m : ifs.maps()) s += m.lipschitz();
  return s;
}

// ---- CellSet ---------------------------------------------------------------

namespace {

mpz_class cell_count(const IFSystem& ifs, std::size_t k) {
  mpz_class n;
  mpz_ui_pow_ui(n.get_mpz_t(), ifs.size(), k);
  return n;
}

}  // namespace

CellSet::CellSet(IFSPtr ifs, std::size_t level, std::vector<Cell> cells)
    : ifs_(std::move(ifs)), level_(level), cells_(std::move(cells)) {
  require(ifs_ != nullptr, "cell set needs its generating IFS");
  require(cell_count(*ifs_, level_) == cells_.size(),
          "cell set at level " + std::to_string(level_) + " must hold m^k cells");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const auto& c = cells_[i];
    require(c.address.depth() == level_, "cell address depth differs from level");
    require(c.box.dim() == ifs_->dim(), "cell box dimension differs from IFS dimension");
    for (auto s : c.address.symbols()) require(s >= 1 && s <= ifs_->size(), "address symbol out of range");
    require(i == 0 || cells_[i - 1].address < c.address, "cells must be sorted by address without duplicates");
  }
}

std::size_t CellSet::find(const Address& a) const {
  auto it = std::lower_bound(cells_.begin(), cells_.end(), a,
                             [](const Cell& c, const Address& key) { return c.address < key; });
  if (it == cells_.end() || it->address != a) return npos;
  return static_cast<std::size_t>(it - cells_.begin());
}

std::vector<Point> CellSet::centers() const {
  std::vector<Point> out;
  out.reserve(cells_.size());
  for (const auto& c : cells_) out.push_back(c.box.center());
  return out;
}

void check_budget(const IFSystem& ifs, std::size_t k, std::uint64_t budget) {
  mpz_class n = cell_count(ifs, k);
  if (n > mpz_class(std::to_string(budget))) {
    fail(ErrorCode::ResourceLimit, "resource limit: m^k = " + std::to_string(ifs.size()) + "^" +
                                       std::to_string(k) + " = " + n.get_str() + " cells exceeds budget " +
                                       std::to_string(budget));
  }
}

CellSet level_zero(const IFSPtr& ifs) {
  require(ifs != nullptr, "null IFS");
  return CellSet(ifs, 0, {Cell{Address(), ifs->ambient()}});
}

CellSet hutchinson_step(const IFSystem& ifs, const CellSet& cells) {
  require(cells.ifs().get() == &ifs || *cells.ifs() == ifs, "cell set was generated by a different IFS");
  std::vector<Cell> next;
  next.reserve(cells.size() * ifs.size());
  for (std::uint32_t j = 1; j <= ifs.size(); ++j) {
    const auto& f = ifs.maps()[j - 1];
    for (const auto& c : cells.cells()) next.push_back(Cell{c.address.prepend(j), map_box(f, c.box)});
  }
  return CellSet(cells.ifs(), cells.level() + 1, std::move(next));
}

CellSet iterate_attractor(const IFSPtr& ifs, std::size_t k, std::uint64_t budget) {
  require(ifs != nullptr, "null IFS");
  check_budget(*ifs, k, budget);
  CellSet cur = level_zero(ifs);
  for (std::size_t i = 0; i < k; ++i) cur = hutchinson_step(*ifs, cur);
  return cur;
}

Rational max_cell_diameter_squared(const CellSet& cells) {
  Rational best = 0;
  for (const auto& c : cells.cells()) best = std::max(best, c.box.squared_diameter());
  return best;
}

std::vector<TraceEntry> convergence_trace(const IFSPtr& ifs, std::size_t k_max, std::uint64_t budget) {
  require(ifs != nullptr, "null IFS");
  check_budget(*ifs, k_max, budget);
  std::vector<TraceEntry> trace;
  if (k_max == 0) return trace;
  CellSet cur = level_zero(ifs);
  auto cur_centers = cur.centers();
  for (std::size_t k = 0; k < k_max; ++k) {
    CellSet next = hutchinson_step(*ifs, cur);
    auto next_centers = next.centers();
    trace.push_back({k, hausdorff_distance(cur_centers, next_centers)});
    cur = std::move(next);
    cur_centers = std::move(next_centers);
  }
  return trace;
}

// ---- text formats ----------------------------------------------------------

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    auto nl = text.find('\n');
    out.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

std::uint64_t parse_count(std::string_view s, const char* what) {
  require(!s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos,
          std::string("malformed ") + what + " '" + std::string(s) + "'");
  return std::stoull(std::string(s));
}

}  // namespace

std::string format_ifs(const IFSystem& ifs) {
  std::ostringstream os;
  os << "name " << ifs.name() << '\n';
  os << "dimension " << ifs.dim() << '\n';
  os << "box " << to_string(ifs.ambient().lower()) << ' ' << to_string(ifs.ambient().upper()) << '\n';
  for (const auto& m : ifs.maps()) {
    if (m.is_diagonal()) {
      Point diag(m.dim());
      for (std::size_t i = 0; i < m.dim(); ++i) diag[i] = m.matrix()[i][i];
      os << "map diag=" << to_string(diag) << " offset=" << to_string(m.offset()) << '\n';
    } else {
      Point flat;
      for (const auto& row : m.matrix()) flat.insert(flat.end(), row.begin(), row.end());
      os << "map matrix=" << to_string(flat) << " offset=" << to_string(m.offset())
         << " lipschitz=" << to_string(m.lipschitz()) << '\n';
    }
  }
  return os.str();
}

IFSPtr parse_ifs(std::string_view text) {
  std::string name = "custom";
  std::optional<std::size_t> dim;
  std::optional<Box> box;
  std::vector<AffineMap> maps;
  std::size_t lineno = 0;
  for (auto raw : lines_of(text)) {
    ++lineno;
    auto tok = split_ws(strip_comment(raw));
    if (tok.empty()) continue;
    const std::string where = "ifs line " + std::to_string(lineno) + ": ";
    if (tok[0] == "name") {
      require(tok.size() == 2, where + "expected 'name <label>'");
      name = std::string(tok[1]);
    } else if (tok[0] == "dimension") {
      require(tok.size() == 2, where + "expected 'dimension <n>'");
      dim = parse_count(tok[1], "dimension");
      require(*dim == 1 || *dim == 2, where + "dimension must be 1 or 2");
    } else if (tok[0] == "box") {
      require(tok.size() == 3, where + "expected 'box <lower> <upper>'");
      box = Box(parse_point(tok[1]), parse_point(tok[2]));
    } else if (tok[0] == "map") {
      require(dim.has_value(), where + "'dimension' must precede maps");
      std::optional<Point> diag, flat, offset;
      std::optional<Rational> lip;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        auto eq = tok[i].find('=');
        require(eq != std::string_view::npos, where + "expected key=value, got '" + std::string(tok[i]) + "'");
        auto key = tok[i].substr(0, eq);
        auto val = tok[i].substr(eq + 1);
        if (key == "diag") {
          diag = parse_point(val);
        } else if (key == "matrix") {
          flat = parse_point(val);
        } else if (key == "offset") {
          offset = parse_point(val);
        } else if (key == "lipschitz") {
          lip = parse_rational(val);
        } else {
          fail(ErrorCode::InvalidInput, where + "unknown map key '" + std::string(key) + "'");
        }
      }
      require(offset && offset->size() == *dim, where + "map needs offset with " + std::to_string(*dim) + " entries");
      require(diag.has_value() != flat.has_value(), where + "map needs exactly one of diag= or matrix=");
      try {
        if (diag) {
          require(diag->size() == *dim, where + "diag needs " + std::to_string(*dim) + " entries");
          AffineMap::Matrix m(*dim, std::vector<Rational>(*dim, Rational(0)));
          for (std::size_t i = 0; i < *dim; ++i) m[i][i] = (*diag)[i];
          maps.emplace_back(std::move(m), *offset, lip);
        } else {
          require(flat->size() == *dim * *dim, where + "matrix needs n*n entries");
          AffineMap::Matrix m(*dim, std::vector<Rational>(*dim));
          for (std::size_t i = 0; i < *dim; ++i) {
            for (std::size_t j = 0; j < *dim; ++j) m[i][j] = (*flat)[i * *dim + j];
          }
          maps.emplace_back(std::move(m), *offset, lip);
        }
      } catch (const Error& e) {
        throw Error(e.code(), where + e.what());
      }
    } else {
      fail(ErrorCode::InvalidInput, where + "unknown directive '" + std::string(tok[0]) + "'");
    }
  }
  require(dim.has_value(), "ifs definition lacks 'dimension'");
  if (!box) box = Box::unit(*dim);
  require(box->dim() == *dim, "ifs box dimension differs from 'dimension'");
  return std::make_shared<IFSystem>(std::move(name), std::move(maps), std::move(*box));
}

std::string export_cellset(const CellSet& cells) {
  std::ostringstream os;
  os << "fractop-cellset 1\n";
  os << "ifs-begin\n" << format_ifs(*cells.ifs()) << "ifs-end\n";
  os << "level " << cells.level() << '\n';
  os << "cells " << cells.size() << '\n';
  for (const auto& c : cells.cells()) {
    os << "cell " << c.address.str() << ' ' << to_string(c.box.lower()) << ' ' << to_string(c.box.upper()) << '\n';
  }
  return os.str();
}

CellSet import_cellset(std::string_view text) {
  auto lines = lines_of(text);
  std::size_t i = 0;
  auto next = [&]() -> std::string_view {
    require(i < lines.size(), "truncated cell set export");
    return lines[i++];
  };
  require(next() == "fractop-cellset 1", "not a fractop cell set export");
  require(next() == "ifs-begin", "cell set export lacks ifs-begin");
  std::string ifs_text;
  for (auto l = next(); l != "ifs-end"; l = next()) {
    ifs_text.append(l);
    ifs_text += '\n';
  }
  IFSPtr ifs = parse_ifs(ifs_text);
  auto level_tok = split_ws(next());
  require(level_tok.size() == 2 && level_tok[0] == "level", "expected 'level <k>'");
  auto level = static_cast<std::size_t>(parse_count(level_tok[1], "level"));
  auto count_tok = split_ws(next());
  require(count_tok.size() == 2 && count_tok[0] == "cells", "expected 'cells <n>'");
  auto count = parse_count(count_tok[1], "cell count");
  std::vector<Cell> cells;
  cells.reserve(count);
  for (std::uint64_t c = 0; c < count; ++c) {
    auto tok = split_ws(next());
    require(tok.size() == 4 && tok[0] == "cell", "expected 'cell <address> <lower> <upper>'");
    cells.push_back(Cell{Address::parse(tok[1]), Box(parse_point(tok[2]), parse_point(tok[3]))});
  }
  while (i < lines.size()) require(split_ws(lines[i++]).empty(), "trailing content after cells");
  return CellSet(std::move(ifs), level, std::move(cells));
}

}  // namespace fractop
