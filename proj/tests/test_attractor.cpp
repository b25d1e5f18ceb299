#include <chrono>

#include "doctest.h"
#include "fractop/attractor.hpp"
#include "fractop/error.hpp"
#include "oracles.hpp"

using namespace fractop;

namespace {

Rational R(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Box box1(Rational lo, Rational hi) { return Box({lo}, {hi}); }
Box box2(Rational x0, Rational y0, Rational x1, Rational y1) { return Box({x0, y0}, {x1, y1}); }

}  // namespace

TEST_CASE("presets") {
  auto cmts = preset("cmts");
  REQUIRE(cmts->size() == 2);
  CHECK(cmts->maps()[0] == AffineMap::diagonal({R(1, 3)}, {R(0)}));
  CHECK(cmts->maps()[1] == AffineMap::diagonal({R(1, 3)}, {R(2, 3)}));
  CHECK(cmts->ambient() == Box::unit(1));

  auto sc = preset("sierpinski-carpet");
  REQUIRE(sc->size() == 8);
  const long offsets[8][2] = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {2, 1}, {0, 2}, {1, 2}, {2, 2}};
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(sc->maps()[j] == AffineMap::diagonal({R(1, 3), R(1, 3)}, {R(offsets[j][0], 3), R(offsets[j][1], 3)}));
    CHECK(sc->maps()[j].lipschitz() == R(1, 3));
  }

  auto gasket = preset("sierpinski-gasket");
  REQUIRE(gasket->size() == 3);
  for (const auto& m : gasket->maps()) {
    CHECK(m.lipschitz() == R(1, 2));
    CHECK(Box::unit(2).contains(map_box(m, Box::unit(2))));
  }
  CHECK_THROWS_AS(preset("menger"), Error);
}

TEST_CASE("lipschitz_sum") {
  CHECK(lipschitz_sum(*preset("cmts")) == R(2, 3));
  CHECK(lipschitz_sum(*preset("sierpinski-carpet")) == R(8, 3));
  CHECK(lipschitz_sum(*preset("sierpinski-gasket")) == R(3, 2));
}

TEST_CASE("IFS construction checks") {
  auto f = AffineMap::diagonal({R(1, 3)}, {R(0)});
  CHECK_THROWS_AS(IFSystem("one", {f}, Box::unit(1)), Error);
  auto escapes = AffineMap::diagonal({R(1, 2)}, {R(3, 4)});
  CHECK_THROWS_WITH_AS(IFSystem("bad", {f, escapes}, Box::unit(1)), doctest::Contains("ambient"), Error);
}

TEST_CASE("hutchinson_step") {
  auto cmts = preset("cmts");
  auto x1 = hutchinson_step(*cmts, level_zero(cmts));
  REQUIRE(x1.size() == 2);
  CHECK(x1.cells()[0].box == box1(R(0), R(1, 3)));
  CHECK(x1.cells()[1].box == box1(R(2, 3), R(1)));

  auto sc = preset("sierpinski-carpet");
  auto x2 = hutchinson_step(*sc, iterate_attractor(sc, 1));
  CHECK(x2.size() == 64);
  auto idx = x2.find(Address::parse("18"));
  REQUIRE(idx != CellSet::npos);
  CHECK(x2.cells()[idx].box == box2(R(2, 9), R(2, 9), R(3, 9), R(3, 9)));

  // Mismatched IFS is rejected.
  CHECK_THROWS_AS(hutchinson_step(*sc, x1), Error);

  // k steps from level 0 equal iterate_attractor(k).
  auto gasket = preset("sierpinski-gasket");
  CellSet cur = level_zero(gasket);
  for (int k = 0; k < 4; ++k) cur = hutchinson_step(*gasket, cur);
  auto direct = iterate_attractor(gasket, 4);
  REQUIRE(direct.size() == cur.size());
  for (std::size_t i = 0; i < cur.size(); ++i) {
    CHECK(cur.cells()[i].address == direct.cells()[i].address);
    CHECK(cur.cells()[i].box == direct.cells()[i].box);
  }
}

TEST_CASE("iterate_attractor") {
  auto cmts = preset("cmts");
  auto x2 = iterate_attractor(cmts, 2);
  REQUIRE(x2.size() == 4);
  CHECK(x2.cells()[0].box == box1(R(0), R(1, 9)));
  CHECK(x2.cells()[1].box == box1(R(2, 9), R(3, 9)));
  CHECK(x2.cells()[2].box == box1(R(6, 9), R(7, 9)));
  CHECK(x2.cells()[3].box == box1(R(8, 9), R(1)));

  auto x0 = iterate_attractor(preset("sierpinski-carpet"), 0);
  REQUIRE(x0.size() == 1);
  CHECK(x0.cells()[0].box == Box::unit(2));
  CHECK(x0.cells()[0].address.empty());

  CHECK(iterate_attractor(preset("sierpinski-carpet"), 2).size() == 64);
}

TEST_CASE("cell boxes match direct composition, nest, and count m^k") {
  for (const auto& name : preset_names()) {
    auto ifs = preset(name);
    CellSet prev = level_zero(ifs);
    for (std::size_t k = 1; k <= 4; ++k) {
      CellSet cur = hutchinson_step(*ifs, prev);
      std::size_t expect = 1;
      for (std::size_t i = 0; i < k; ++i) expect *= ifs->size();
      CHECK(cur.size() == expect);
      for (const auto& c : cur.cells()) {
        CHECK(c.box == oracle::composed_cell(*ifs, c.address));
        auto parent = prev.find(c.address.prefix(k - 1));
        REQUIRE(parent != CellSet::npos);
        CHECK(prev.cells()[parent].box.contains(c.box));
      }
      prev = std::move(cur);
    }
  }
}

TEST_CASE("cover identity at finite level") {
  // Union of hutchinson_step(cells) equals the union of the map images of the cells.
  auto sc = preset("sierpinski-carpet");
  auto x2 = iterate_attractor(sc, 2);
  auto x3 = hutchinson_step(*sc, x2);
  std::vector<Box> images;
  for (const auto& f : sc->maps()) {
    for (const auto& c : x2.cells()) images.push_back(map_box(f, c.box));
  }
  std::vector<Box> step;
  for (const auto& c : x3.cells()) step.push_back(c.box);
  auto key = [](const Box& b) { return to_string(b.lower()) + "|" + to_string(b.upper()); };
  std::vector<std::string> a, b;
  for (const auto& x : images) a.push_back(key(x));
  for (const auto& x : step) b.push_back(key(x));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("budget") {
  auto sc = preset("sierpinski-carpet");
  CHECK_NOTHROW(check_budget(*sc, 6, kDefaultCellBudget));
  try {
    iterate_attractor(sc, 7);
    FAIL("expected resource-limit error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResourceLimit);
    CHECK(std::string(e.what()).find("2097152") != std::string::npos);
  }
  CHECK_THROWS_AS(iterate_attractor(preset("cmts"), 5, 16), Error);
}

TEST_CASE("max_cell_diameter_squared") {
  auto cmts = preset("cmts");
  for (std::size_t k = 0; k <= 6; ++k) {
    CHECK(max_cell_diameter_squared(iterate_attractor(cmts, k)) == rational_pow(R(1, 9), k));
  }
  auto sc = preset("sierpinski-carpet");
  CHECK(max_cell_diameter_squared(iterate_attractor(sc, 0)) == 2);
  CHECK(max_cell_diameter_squared(iterate_attractor(sc, 1)) == R(2, 9));
  // Diameter law for all presets: (max lipschitz)^(2k) * diam^2(ambient).
  for (const auto& name : preset_names()) {
    auto ifs = preset(name);
    Rational lip = ifs->maps()[0].lipschitz();
    for (std::size_t k = 0; k <= 4; ++k) {
      CHECK(max_cell_diameter_squared(iterate_attractor(ifs, k)) ==
            rational_pow(lip, 2 * k) * ifs->ambient().squared_diameter());
    }
  }
}

TEST_CASE("convergence_trace") {
  CHECK(convergence_trace(preset("cmts"), 0).empty());

  auto trace = convergence_trace(preset("cmts"), 6);
  REQUIRE(trace.size() == 6);
  for (const auto& e : trace) {
    CHECK(e.distance.squared <= rational_pow(R(1, 9), e.level));
  }
  for (std::size_t i = 2; i < trace.size(); ++i) CHECK(trace[i].distance.squared <= trace[i - 1].distance.squared);

  auto sc = preset("sierpinski-carpet");
  auto sc_trace = convergence_trace(sc, 3);
  for (const auto& e : sc_trace) {
    CHECK(e.distance.squared <= 2 * rational_pow(R(1, 9), e.level));
    CHECK(e.distance.squared <= max_cell_diameter_squared(iterate_attractor(sc, e.level)));
    auto a = iterate_attractor(sc, e.level).centers();
    auto b = iterate_attractor(sc, e.level + 1).centers();
    CHECK(e.distance.squared == oracle::hausdorff_squared(a, b));
  }
  CHECK_THROWS_AS(convergence_trace(sc, 7), Error);
}

TEST_CASE("address text") {
  CHECK(Address::parse("18").str() == "18");
  CHECK(Address::parse("1,8") == Address::parse("18"));
  CHECK(Address::parse("-").empty());
  CHECK(Address({1, 12}).str() == "1.12");
  CHECK(Address::parse("1.12") == Address({1, 12}));
  CHECK_THROWS_AS(Address::parse("10"), Error);
  CHECK_THROWS_AS(Address::parse("1,,2"), Error);
}

TEST_CASE("IFS text format") {
  for (const auto& name : preset_names()) {
    auto ifs = preset(name);
    auto back = parse_ifs(format_ifs(*ifs));
    CHECK(*back == *ifs);
  }
  const char* custom = R"(# two-map Cantor variant
name quarter
dimension 1
box 0 1
map diag=1/4 offset=0
map diag=1/4 offset=3/4
)";
  auto ifs = parse_ifs(custom);
  CHECK(ifs->name() == "quarter");
  CHECK(lipschitz_sum(*ifs) == R(1, 2));
  CHECK_THROWS_WITH_AS(parse_ifs("dimension 1\nmap diag=1 offset=0\nmap diag=1/3 offset=0\n"),
                       doctest::Contains("lipschitz = 1/1"), Error);
  CHECK_THROWS_AS(parse_ifs("dimension 3\n"), Error);
  CHECK_THROWS_AS(parse_ifs("dimension 1\nmap diag=1/3\nmap diag=1/3 offset=0\n"), Error);
  CHECK_THROWS_AS(parse_ifs("frobnicate 1\n"), Error);
}

TEST_CASE("cell set export round-trips bit-exactly") {
  for (const auto& name : preset_names()) {
    for (std::size_t k : {0u, 1u, 3u}) {
      auto cells = iterate_attractor(preset(name), k);
      auto text = export_cellset(cells);
      auto back = import_cellset(text);
      CHECK(export_cellset(back) == text);
      CHECK(back.level() == k);
      CHECK(*back.ifs() == *cells.ifs());
    }
  }
  auto text = export_cellset(iterate_attractor(preset("cmts"), 1));
  CHECK(text.find("cell 1 0/1 1/3\n") != std::string::npos);
  CHECK(text.find("cell 2 2/3 1/1\n") != std::string::npos);
  CHECK_THROWS_AS(import_cellset(text.substr(0, text.size() - 10)), Error);
}
