#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fractop/rational.hpp"

namespace fractop {

using Point = std::vector<Rational>;

std::string to_string(const Point& p);  // "a/b,c/d"
Point parse_point(std::string_view text);

Rational squared_distance(const Point& a, const Point& b);

// Closed axis-aligned box.
class Box {
 public:
  Box(Point lower, Point upper);

  static Box unit(std::size_t dim);

  std::size_t dim() const { return lower_.size(); }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }

  Rational squared_diameter() const;
  Point center() const;
  bool contains(const Point& p) const;
  bool contains(const Box& other) const;
  bool intersects(const Box& other) const;
  std::optional<Box> intersection(const Box& other) const;
  // Squared Euclidean distance between the two closed boxes (0 when they meet).
  Rational squared_distance_to(const Box& other) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  Point lower_;
  Point upper_;
};

// x -> A x + b with 0 < lipschitz < 1.
class AffineMap {
 public:
  using Matrix = std::vector<std::vector<Rational>>;

  // Diagonal map; lipschitz = max |d_i|.
  static AffineMap diagonal(std::vector<Rational> diag, Point offset);

  // General map; for non-diagonal matrices `lipschitz` must be supplied and is
  // verified to bound the operator norm (dimension <= 2).
  AffineMap(Matrix matrix, Point offset, std::optional<Rational> lipschitz = std::nullopt);

  std::size_t dim() const { return offset_.size(); }
  const Matrix& matrix() const { return matrix_; }
  const Point& offset() const { return offset_; }
  const Rational& lipschitz() const { return lipschitz_; }

  bool is_diagonal() const;
  Rational determinant() const;

  friend bool operator==(const AffineMap&, const AffineMap&) = default;

 private:
  Matrix matrix_;
  Point offset_;
  Rational lipschitz_;
};

Point apply_map(const AffineMap& map, const Point& point);

// Image of a box under a diagonal map with positive entries.
Box map_box(const AffineMap& map, const Box& box);

// Unique solution of A x + b = x.
Point fixed_point(const AffineMap& map);

struct HausdorffDistance {
  Rational squared;
  double approx;  // sqrt(squared), presentation only
};

// Exact Hausdorff distance between two finite non-empty point sets of equal dimension.
HausdorffDistance hausdorff_distance(std::span<const Point> a, std::span<const Point> b);

// sup_{x in from} inf_{y in to} |x - y|^2
Rational directed_hausdorff_squared(std::span<const Point> from, std::span<const Point> to);

}  // namespace fractop
