#include "fractop/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fractop/error.hpp"

namespace fractop {

std::string to_string(const Point& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += to_string(p[i]);
  }
  return out;
}

Point parse_point(std::string_view text) {
  Point p;
  while (true) {
    auto comma = text.find(',');
    p.push_back(parse_rational(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return p;
}

Rational squared_distance(const Point& a, const Point& b) {
  require(a.size() == b.size(), "dimension mismatch in distance");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// ---- Box -------------------------------------------------------------------

Box::Box(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  require(!lower_.empty(), "box must have dimension >= 1");
  require(lower_.size() == upper_.size(), "box corner dimension mismatch");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    require(lower_[i] <= upper_[i], "box lower corner exceeds upper corner on axis " + std::to_string(i));
  }
}

Box Box::unit(std::size_t dim) { return Box(Point(dim, Rational(0)), Point(dim, Rational(1))); }

Rational Box::squared_diameter() const { return squared_distance(lower_, upper_); }

Point Box::center() const {
  Point c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = (lower_[i] + upper_[i]) / 2;
  return c;
}

bool Box::contains(const Point& p) const {
  if (p.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (p[i] < lower_[i] || p[i] > upper_[i]) return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.lower_[i] < lower_[i] || other.upper_[i] > upper_[i]) return false;
  }
  return true;
}

bool Box::intersects(const Box& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.lower_[i] > upper_[i] || lower_[i] > other.upper_[i]) return false;
  }
  return true;
}

std::optional<Box> Box::intersection(const Box& other) const {
  if (!intersects(other)) return std::nullopt;
  Point lo(dim()), hi(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    lo[i] = std::max(lower_[i], other.lower_[i]);
    hi[i] = std::min(upper_[i], other.upper_[i]);
  }
  return Box(std::move(lo), std::move(hi));
}

Rational Box::squared_distance_to(const Box& other) const {
  require(other.dim() == dim(), "dimension mismatch in box distance");
  Rational s = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    Rational gap = 0;
    if (other.lower_[i] > upper_[i]) {
      gap = other.lower_[i] - upper_[i];
    } else if (lower_[i] > other.upper_[i]) {
      gap = lower_[i] - other.upper_[i];
    }
    s += gap * gap;
  }
  return s;
}

// ---- AffineMap -------------------------------------------------------------

namespace {

AffineMap::Matrix diagonal_matrix(const std::vector<Rational>& diag) {
  AffineMap::Matrix m(diag.size(), std::vector<Rational>(diag.size(), Rational(0)));
  for (std::size_t i = 0; i < diag.size(); ++i) m[i][i] = diag[i];
  return m;
}

// L^2 I - A^T A positive semidefinite, for n <= 2.
bool bounds_operator_norm(const AffineMap::Matrix& a, const Rational& l) {
  const std::size_t n = a.size();
  if (n > 2) fail(ErrorCode::Unsupported, "lipschitz verification supports dimension <= 2");
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Rational ata = 0;
      for (std::size_t k = 0; k < n; ++k) ata += a[k][i] * a[k][j];
      m[i][j] = (i == j ? l * l : Rational(0)) - ata;
    }
  }
  if (n == 1) return m[0][0] >= 0;
  return m[0][0] >= 0 && m[1][1] >= 0 && m[0][0] * m[1][1] - m[0][1] * m[1][0] >= 0;
}

}  // namespace

AffineMap AffineMap::diagonal(std::vector<Rational> diag, Point offset) {
  auto m = diagonal_matrix(diag);
  return AffineMap(std::move(m), std::move(offset));
}

AffineMap::AffineMap(Matrix matrix, Point offset, std::optional<Rational> lipschitz)
    : matrix_(std::move(matrix)), offset_(std::move(offset)) {
  const std::size_t n = offset_.size();
  require(n >= 1, "affine map must have dimension >= 1");
  require(matrix_.size() == n, "affine map matrix/offset dimension mismatch");
  for (const auto& row : matrix_) require(row.size() == n, "affine map matrix must be square");

  if (is_diagonal()) {
    Rational exact = 0;
    for (std::size_t i = 0; i < n; ++i) exact = std::max(exact, fractop::abs(matrix_[i][i]));
    if (lipschitz && *lipschitz < exact) {
      fail(ErrorCode::InvalidInput,
           "supplied lipschitz " + to_string(*lipschitz) + " is below the exact value " + to_string(exact));
    }
    lipschitz_ = exact;
  } else {
    if (!lipschitz) fail(ErrorCode::InvalidInput, "non-diagonal affine map requires an explicit lipschitz bound");
    if (!bounds_operator_norm(matrix_, *lipschitz)) {
      fail(ErrorCode::InvalidInput, "lipschitz " + to_string(*lipschitz) + " does not bound the matrix norm");
    }
    lipschitz_ = *lipschitz;
  }
  if (!(lipschitz_ > 0 && lipschitz_ < 1)) {
    fail(ErrorCode::InvalidInput, "map is not a contraction: lipschitz = " + to_string(lipschitz_));
  }
}

bool AffineMap::is_diagonal() const {
  for (std::size_t i = 0; i < matrix_.size(); ++i) {
    for (std::size_t j = 0; j < matrix_.size(); ++j) {
      if (i != j && matrix_[i][j] != 0) return false;
    }
  }
  return true;
}

Rational AffineMap::determinant() const {
  // Exact Gaussian elimination; n is tiny.
  auto a = matrix_;
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

Point apply_map(const AffineMap& map, const Point& point) {
  require(point.size() == map.dim(), "point dimension " + std::to_string(point.size()) +
                                         " does not match map dimension " + std::to_string(map.dim()));
  Point out(map.offset());
  for (std::size_t i = 0; i < map.dim(); ++i) {
    for (std::size_t j = 0; j < map.dim(); ++j) {
      if (map.matrix()[i][j] != 0) out[i] += map.matrix()[i][j] * point[j];
    }
  }
  return out;
}

Box map_box(const AffineMap& map, const Box& box) {
  require(box.dim() == map.dim(), "box dimension does not match map dimension");
  if (!map.is_diagonal()) fail(ErrorCode::Unsupported, "map_box requires a diagonal map");
  for (std::size_t i = 0; i < map.dim(); ++i) {
    if (map.matrix()[i][i] <= 0) fail(ErrorCode::Unsupported, "map_box requires positive diagonal entries");
  }
  return Box(apply_map(map, box.lower()), apply_map(map, box.upper()));
}

Point fixed_point(const AffineMap& map) {
  // Solve (I - A) x = b by exact elimination on the augmented matrix.
  const std::size_t n = map.dim();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = (i == j ? Rational(1) : Rational(0)) - map.matrix()[i][j];
    m[i][n] = map.offset()[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) fail(ErrorCode::Internal, "I - A is singular for a contraction");
    std::swap(m[pivot], m[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  Point x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
  return x;
}

// ---- Hausdorff -------------------------------------------------------------

namespace {

// Uniform bucket grid over the first min(dim, 2) axes of a point set. Bucket
// side `h` is exact, so ring lower bounds are exact.
class BucketGrid {
 public:
  explicit BucketGrid(std::span<const Point> pts) : pts_(pts), axes_(std::min<std::size_t>(pts[0].size(), 2)) {
    origin_ = pts[0];
    Point top = pts[0];
    for (const auto& p : pts) {
      for (std::size_t a = 0; a < axes_; ++a) {
        if (p[a] < origin_[a]) origin_[a] = p[a];
        if (p[a] > top[a]) top[a] = p[a];
      }
    }
    Rational extent = 0;
    for (std::size_t a = 0; a < axes_; ++a) extent = std::max(extent, Rational(top[a] - origin_[a]));
    auto per_axis = static_cast<long>(axes_ == 1 ? pts.size() : std::ceil(std::sqrt(double(pts.size()))));
    h_ = extent == 0 ? Rational(1) : Rational(extent / per_axis);
    for (std::size_t a = 0; a < 2; ++a) {
      size_[a] = a < axes_ ? index_on(top[a], a).get_si() + 1 : 1;
    }
    buckets_.resize(static_cast<std::size_t>(size_[0] * size_[1]));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      auto [x, y] = clamped_index(pts[i]);
      buckets_[static_cast<std::size_t>(x * size_[1] + y)].push_back(i);
    }
  }

  Rational nearest_squared(const Point& q) const {
    auto [cx, cy] = clamped_index(q);
    std::optional<Rational> best;
    const long max_ring = std::max(size_[0], size_[1]);
    for (long r = 0; r <= max_ring; ++r) {
      for (long x = cx - r; x <= cx + r; ++x) {
        if (x < 0 || x >= size_[0]) continue;
        for (long y = cy - r; y <= cy + r; ++y) {
          if (y < 0 || y >= size_[1]) continue;
          if (std::max(std::labs(x - cx), std::labs(y - cy)) != r) continue;
          for (std::size_t idx : buckets_[static_cast<std::size_t>(x * size_[1] + y)]) {
            Rational d = squared_distance(q, pts_[idx]);
            if (!best || d < *best) best = std::move(d);
          }
        }
      }
      // Unvisited points are at least r*h away along some bucketed axis.
      if (best) {
        Rational bound = h_ * r;
        if (*best <= bound * bound) break;
      }
    }
    return *best;
  }

 private:
  mpz_class index_on(const Rational& v, std::size_t axis) const {
    return fractop::floor(Rational((v - origin_[axis]) / h_));
  }

  std::pair<long, long> clamped_index(const Point& p) const {
    long idx[2] = {0, 0};
    for (std::size_t a = 0; a < axes_; ++a) {
      mpz_class i = index_on(p[a], a);
      if (i < 0) i = 0;
      if (i >= size_[a]) i = size_[a] - 1;
      idx[a] = i.get_si();
    }
    return {idx[0], idx[1]};
  }

  std::span<const Point> pts_;
  std::size_t axes_;
  Point origin_;
  Rational h_;
  long size_[2] = {1, 1};
  std::vector<std::vector<std::size_t>> buckets_;
};

void check_sets(std::span<const Point> a, std::span<const Point> b) {
  require(!a.empty() && !b.empty(), "hausdorff distance needs non-empty point sets");
  const std::size_t dim = a[0].size();
  for (const auto& p : a) require(p.size() == dim, "inconsistent point dimension");
  for (const auto& p : b) require(p.size() == dim, "inconsistent point dimension");
}

}  // namespace

Rational directed_hausdorff_squared(std::span<const Point> from, std::span<const Point> to) {
  check_sets(from, to);
  BucketGrid grid(to);
  Rational worst = 0;
  for (const auto& p : from) {
    Rational d = grid.nearest_squared(p);
    if (d > worst) worst = std::move(d);
  }
  return worst;
}

HausdorffDistance hausdorff_distance(std::span<const Point> a, std::span<const Point> b) {
  check_sets(a, b);
  Rational ab = directed_hausdorff_squared(a, b);
  Rational ba = directed_hausdorff_squared(b, a);
  Rational sq = std::max(ab, ba);
  return {sq, std::sqrt(sq.get_d())};
}

}  // namespace fractop
