#include <algorithm>
#include <random>

#include "doctest.h"
#include "fractop/error.hpp"
#include "fractop/geometry.hpp"
#include "oracles.hpp"

using namespace fractop;

namespace {

Rational R(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

AffineMap cmts1() { return AffineMap::diagonal({R(1, 3)}, {R(0)}); }
AffineMap cmts2() { return AffineMap::diagonal({R(1, 3)}, {R(2, 3)}); }
AffineMap sc(long ox, long oy) { return AffineMap::diagonal({R(1, 3), R(1, 3)}, {R(ox, 3), R(oy, 3)}); }

}  // namespace

TEST_CASE("rational parse and format") {
  CHECK(parse_rational("6/9") == R(2, 3));
  CHECK(to_string(parse_rational("6/9")) == "2/3");
  CHECK(to_string(parse_rational("-4")) == "-4/1");
  CHECK(to_string(R(0)) == "0/1");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("1/-3"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational(""), Error);
  CHECK(R(1, 3) + R(1, 6) == R(1, 2));
  CHECK(to_decimal(R(2, 3)) == "0.666667");
}

TEST_CASE("apply_map") {
  CHECK(apply_map(cmts2(), {R(0)}) == Point{R(2, 3)});
  CHECK(apply_map(sc(2, 1), {R(0), R(0)}) == Point{R(2, 3), R(1, 3)});
  CHECK_THROWS_AS(apply_map(cmts1(), {R(0), R(0)}), Error);
  for (const auto& m : {cmts1(), cmts2()}) CHECK(apply_map(m, fixed_point(m)) == fixed_point(m));
}

TEST_CASE("map_box") {
  CHECK(map_box(cmts1(), Box::unit(1)) == Box({R(0)}, {R(1, 3)}));
  CHECK(map_box(sc(2, 2), Box::unit(2)) == Box({R(2, 3), R(2, 3)}, {R(1), R(1)}));
  // Every base-3 map shrinks diameter by exactly 1/3 (squared: 1/9).
  for (long ox : {0, 1, 2}) {
    for (long oy : {0, 1, 2}) {
      Box img = map_box(sc(ox, oy), Box::unit(2));
      CHECK(img.squared_diameter() == Box::unit(2).squared_diameter() / 9);
    }
  }
  CHECK(map_box(cmts2(), Box::unit(1)).squared_diameter() == R(1, 9));

  AffineMap flip = AffineMap::diagonal({R(-1, 2)}, {R(1, 2)});
  CHECK_THROWS_WITH_AS(map_box(flip, Box::unit(1)), doctest::Contains("positive"), Error);
  AffineMap shear({{R(1, 4), R(1, 8)}, {R(0), R(1, 4)}}, {R(0), R(0)}, R(1, 2));
  try {
    map_box(shear, Box::unit(2));
    FAIL("expected unsupported-map error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
}

TEST_CASE("fixed_point") {
  CHECK(fixed_point(cmts1()) == Point{R(0)});
  CHECK(fixed_point(cmts2()) == Point{R(1)});
  CHECK(fixed_point(sc(2, 1)) == Point{R(1), R(1, 2)});
  AffineMap shear({{R(1, 4), R(1, 8)}, {R(0), R(1, 4)}}, {R(1), R(1)}, R(1, 2));
  CHECK(apply_map(shear, fixed_point(shear)) == fixed_point(shear));
}

TEST_CASE("affine map construction rejects non-contractions") {
  CHECK_THROWS_WITH_AS(AffineMap::diagonal({R(1)}, {R(0)}), doctest::Contains("lipschitz = 1/1"), Error);
  CHECK_THROWS_AS(AffineMap::diagonal({R(0), R(0)}, {R(0), R(0)}), Error);
  CHECK(AffineMap::diagonal({R(-1, 3), R(1, 5)}, {R(0), R(0)}).lipschitz() == R(1, 3));
  // Non-diagonal needs an explicit, valid bound.
  CHECK_THROWS_AS(AffineMap({{R(0), R(1, 2)}, {R(1, 2), R(0)}}, {R(0), R(0)}), Error);
  CHECK_THROWS_AS(AffineMap({{R(1, 2), R(1, 2)}, {R(0), R(1, 2)}}, {R(0), R(0)}, R(1, 2)), Error);
  CHECK_NOTHROW(AffineMap({{R(0), R(1, 2)}, {R(1, 2), R(0)}}, {R(0), R(0)}, R(1, 2)));
}

TEST_CASE("hausdorff_distance basics") {
  std::vector<Point> a{{R(0)}, {R(1, 2)}, {R(3)}};
  CHECK(hausdorff_distance(a, a).squared == 0);
  std::vector<Point> zero{{R(0)}}, one{{R(1)}};
  auto d = hausdorff_distance(zero, one);
  CHECK(d.squared == 1);
  CHECK(d.approx == doctest::Approx(1.0));
  std::vector<Point> empty;
  CHECK_THROWS_AS(hausdorff_distance(empty, a), Error);
  std::vector<Point> planar{{R(0), R(0)}};
  CHECK_THROWS_AS(hausdorff_distance(planar, a), Error);
}

TEST_CASE("hausdorff between CMTS level 1 and level 2 centres") {
  std::vector<Point> x1{{R(1, 6)}, {R(5, 6)}};
  std::vector<Point> x2{{R(1, 18)}, {R(5, 18)}, {R(13, 18)}, {R(17, 18)}};
  // Frozen from the all-pairs oracle: every centre is 1/9 from its nearest partner.
  CHECK(oracle::hausdorff_squared(x1, x2) == R(1, 81));
  CHECK(hausdorff_distance(x1, x2).squared == R(1, 81));
}

TEST_CASE("hausdorff grid search agrees with all-pairs oracle") {
  std::mt19937_64 rng(20261018);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t dim = 1 + trial % 2;
    auto a = oracle::random_cloud(rng, dim, 60);
    auto b = oracle::random_cloud(rng, dim, 60);
    CHECK(hausdorff_distance(a, b).squared == oracle::hausdorff_squared(a, b));
  }
  // Query points far outside the target's bounding box.
  std::vector<Point> far{{R(1000), R(-1000)}};
  std::vector<Point> grid;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) grid.push_back({R(i, 10), R(j, 10)});
  }
  CHECK(hausdorff_distance(far, grid).squared == oracle::hausdorff_squared(far, grid));
}

TEST_CASE("hausdorff metric axioms on random rational clouds") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t dim = 1 + trial % 2;
    auto a = oracle::random_cloud(rng, dim);
    auto b = oracle::random_cloud(rng, dim);
    auto c = oracle::random_cloud(rng, dim);
    auto ab = hausdorff_distance(a, b), ba = hausdorff_distance(b, a);
    CHECK(ab.squared == ba.squared);
    CHECK(hausdorff_distance(a, a).squared == 0);
    auto sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
    sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
    CHECK((ab.squared == 0) == (sa == sb));
    CHECK((hausdorff_distance(a, sa).squared == 0));
    CHECK(oracle::triangle_on_squares(hausdorff_distance(a, c).squared, ab.squared, hausdorff_distance(b, c).squared));
  }
}

TEST_CASE("contraction inequality holds exactly") {
  std::mt19937_64 rng(99);
  std::vector<AffineMap> maps{cmts1(), cmts2(), sc(0, 0), sc(2, 1),
                              AffineMap({{R(0), R(1, 2)}, {R(1, 2), R(0)}}, {R(0), R(0)}, R(1, 2))};
  for (const auto& m : maps) {
    for (int t = 0; t < 50; ++t) {
      Point x(m.dim()), y(m.dim());
      for (auto& v : x) v = oracle::random_rational(rng);
      for (auto& v : y) v = oracle::random_rational(rng);
      CHECK(squared_distance(apply_map(m, x), apply_map(m, y)) <=
            m.lipschitz() * m.lipschitz() * squared_distance(x, y));
    }
  }
}

TEST_CASE("box relations") {
  Box a({R(0), R(0)}, {R(1, 3), R(1, 3)});
  Box b({R(1, 3), R(1, 3)}, {R(2, 3), R(2, 3)});
  Box c({R(2, 3), R(0)}, {R(1), R(1, 3)});
  CHECK(a.intersects(b));  // corner contact
  CHECK(!a.intersects(c));
  CHECK(a.squared_distance_to(c) == R(1, 9));
  CHECK(a.intersection(b)->lower() == Point{R(1, 3), R(1, 3)});
  CHECK(Box::unit(2).contains(a));
  CHECK_THROWS_AS(Box({R(1)}, {R(0)}), Error);
}
