#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "turnsolve/approx.hpp"

using namespace turnsolve;
using testutil::block;
using testutil::random_polyomino;

TEST_CASE("dominant strip selection with tie rule") {
  GridInstance inst = full_instance({{0, 0}, {1, 0}}, 0, 1);
  TransitionOracle oracle(inst);
  AtomicStripGraph g = strips_from_grid(inst, oracle);
  FractionalSolution frac;
  frac.y = {Rat(3, 4), Rat(1, 4), Rat(1, 2), Rat(1, 2)};
  auto chosen = dominant_strips(frac, g);
  CHECK(chosen[0] == 0);  // argmax
  CHECK(chosen[1] == 0);  // tie: horizontal before vertical
}

TEST_CASE("domino pipeline end to end") {
  GridInstance inst = full_instance({{0, 0}, {1, 0}}, 0, 1);
  ApproxResult res = approx_cycle_cover(inst);
  CHECK(res.lp_lower_bound == 4);
  CHECK(res.cost.total == 4);
  CHECK(res.guarantee == 4);
  REQUIRE(res.ratio().has_value());
  CHECK(*res.ratio() == 1);
  CHECK(validate_cycle_cover(inst, res.cover).ok());
}

TEST_CASE("extract_cycles realizes the documented domino matching") {
  GridInstance inst = full_instance({{0, 0}, {1, 0}}, 0, 1);
  TransitionOracle oracle(inst);
  AtomicStripGraph g = strips_from_grid(inst, oracle);
  // Both owners choose the horizontal strip; matching pairs (p,E)-(q,W)
  // and (p,W)-(q,E): matching vertex ids 2o+side with side 1 = East.
  std::vector<int> chosen{0, 0};
  Matching m;
  m.edges = {{0, 3}, {1, 2}};  // (p,W)-(q,E), (p,E)-(q,W)
  m.weight = g.cost(g.vertex_id(0, 0, 0), g.vertex_id(1, 0, 1)) +
             g.cost(g.vertex_id(0, 0, 1), g.vertex_id(1, 0, 0));
  CHECK(m.weight == 4);
  CycleCover cover = extract_cycles(chosen, m, g, oracle);
  REQUIRE(cover.cycles.size() == 1);
  CHECK(cycle_cost(cover.cycles[0], inst.kappa(), inst.tau()) == 4);
  CHECK(validate_cycle_cover(inst, cover).ok());
}

TEST_CASE("approximation guarantee on random polyominoes") {
  std::mt19937 rng(20240917);
  int done = 0;
  while (done < 30) {
    auto pixels = random_polyomino(rng, 6 + done % 7, 5);
    if (pixels.size() < 2) continue;
    Rat kappa(done % 2);
    GridInstance inst = build_grid_instance(pixels, CoverageVariant::Full, {}, {}, kappa, 1);
    ApproxResult res = approx_cycle_cover(inst);
    CHECK(validate_cycle_cover(inst, res.cover).ok());
    CHECK(res.lp_lower_bound > 0);
    CHECK(res.cost.total <= res.guarantee * res.lp_lower_bound);
    ++done;
  }
}

TEST_CASE("penalty instance with one expensive outlier skips it") {
  // A 2x2 block plus a corridor to a distant pixel with penalty 1.
  std::vector<Pixel> pixels = block(2, 2);
  for (int x = 2; x <= 6; ++x) pixels.push_back({x, 0});
  std::map<Pixel, Rat> pen;
  for (const Pixel& p : block(2, 2)) pen[p] = 100;
  pen[{6, 0}] = 1;
  GridInstance inst = build_grid_instance(pixels, CoverageVariant::Penalty, {}, pen, 1, 1);
  ApproxResult res = approx_cycle_cover(inst);
  CHECK(!res.cover.covers({6, 0}));
  CHECK(res.cost.penalty_paid == 1);
  CHECK(res.cost.total <= res.guarantee * res.lp_lower_bound);
}

TEST_CASE("merging intersecting cycles") {
  GridInstance inst = full_instance(block(3, 3), 0, 1);
  // Horizontal domino across (0,1)-(1,1) and vertical domino across
  // (1,0)-(1,1): they share pixel (1,1).
  Cycle h = testutil::domino_cycle({0, 1}, {1, 1});
  Cycle v = Cycle::from_steps({
      {{1, 0}, Heading::North},
      {{1, 1}, Heading::North},
      {{1, 1}, Heading::East},
      {{1, 1}, Heading::South},
      {{1, 0}, Heading::South},
      {{1, 0}, Heading::West},
  });
  CycleCover merged = merge_intersecting_cycles(CycleCover{{h, v}}, inst);
  REQUIRE(merged.cycles.size() == 1);
  // Each merge may add at most four simple turns.
  CHECK(merged.cycles[0].simple_turns() <= h.simple_turns() + v.simple_turns() + 4);
  ValidationReport report = validate_cycle_cover(inst, merged);
  CHECK(report.malformed_cycles.empty());
  CHECK(report.parity_violations.empty());
  // The merge never loses covered pixels.
  for (const Cycle& c : {h, v})
    for (const Pixel& p : c.covered_pixels()) CHECK(merged.covers(p));

  SUBCASE("disjoint cycles stay apart") {
    GridInstance wide = full_instance(block(6, 1), 0, 1);
    CycleCover cover{{testutil::domino_cycle({0, 0}, {1, 0}),
                      testutil::domino_cycle({4, 0}, {5, 0})}};
    CHECK(merge_intersecting_cycles(cover, wide).cycles.size() == 2);
  }
}

TEST_CASE("merging across a shared u-turn is free") {
  GridInstance inst = full_instance(block(3, 1), 0, 1);
  CycleCover cover{{testutil::domino_cycle({0, 0}, {1, 0}),
                    testutil::domino_cycle({1, 0}, {2, 0})}};
  // Both cycles u-turn at (1,0); merging saves those turns entirely:
  // 4 + 4 turns collapse to the corridor tour's 4.
  CycleCover merged = merge_intersecting_cycles(cover, inst);
  REQUIRE(merged.cycles.size() == 1);
  CHECK(merged.cycles[0].simple_turns() == 4);
  CHECK(validate_cycle_cover(inst, merged).ok());
}

TEST_CASE("full tour connector yields a valid single tour") {
  std::mt19937 rng(77);
  int done = 0;
  while (done < 12) {
    auto pixels = random_polyomino(rng, 8, 4);
    if (pixels.size() < 2) continue;
    GridInstance inst = build_grid_instance(pixels, CoverageVariant::Full, {}, {}, Rat(done % 2),
                                            Rat(1));
    ApproxResult res = approx_tour(inst);
    REQUIRE(res.cover.cycles.size() == 1);
    CHECK(validate_cycle_cover(inst, res.cover).ok());
    CHECK(res.cost.total <= res.guarantee * res.lp_lower_bound);
    ++done;
  }
}

TEST_CASE("tour connector keeps an existing tour unchanged") {
  GridInstance inst = full_instance({{0, 0}, {1, 0}}, 0, 1);
  ApproxResult cover = approx_cycle_cover(inst);
  REQUIRE(cover.cover.cycles.size() == 1);
  ApproxResult tour = connect_tour_full_grid(cover.cover, inst, cover.lp_lower_bound);
  CHECK(tour.cost.total == 4);
}

TEST_CASE("subset tours cover the subset with the mst connector") {
  // Two distant dominoes on a corridor; only their pixels are required.
  std::vector<Pixel> pixels;
  for (int x = 0; x < 8; ++x) pixels.push_back({x, 0});
  std::vector<Pixel> subset{{0, 0}, {1, 0}, {6, 0}, {7, 0}};
  GridInstance inst = build_grid_instance(pixels, CoverageVariant::Subset, subset, {}, 1, 1);
  ApproxResult res = approx_tour(inst);
  REQUIRE(res.cover.cycles.size() == 1);
  CHECK(validate_cycle_cover(inst, res.cover).ok());
  CHECK(res.guarantee == 10);
  CHECK(res.cost.total <= res.guarantee * res.lp_lower_bound);
}

TEST_CASE("penalty tour connector: connect when cheap, drop when expensive") {
  std::vector<Pixel> pixels;
  for (int x = 0; x < 6; ++x) pixels.push_back({x, 0});
  pixels.push_back({0, 1});
  pixels.push_back({5, 1});

  SUBCASE("high penalties force the connection") {
    std::map<Pixel, Rat> pen;
    for (const Pixel& p : pixels) pen[p] = 100;
    GridInstance inst = build_grid_instance(pixels, CoverageVariant::Penalty, {}, pen, 1, 1);
    ApproxResult res = approx_tour(inst);
    REQUIRE(res.cover.cycles.size() == 1);
    CHECK(res.cost.penalty_paid == 0);
    CHECK(res.cost.total <= res.guarantee * res.lp_lower_bound);
  }
  SUBCASE("tiny penalties are paid instead") {
    std::map<Pixel, Rat> pen;
    pen[{0, 1}] = Rat(1, 2);
    pen[{5, 1}] = Rat(1, 2);
    GridInstance inst = build_grid_instance(pixels, CoverageVariant::Penalty, {}, pen, 1, 1);
    ApproxResult res = approx_tour(inst);
    CHECK(res.cover.cycles.size() <= 1);
    CHECK(res.cost.total <= Rat(12) * res.lp_lower_bound + res.cost.penalty_paid);
  }
}

TEST_CASE("extraction output satisfies strip parity on random instances") {
  std::mt19937 rng(5150);
  int done = 0;
  while (done < 15) {
    auto pixels = random_polyomino(rng, 7, 4);
    if (pixels.size() < 2) continue;
    GridInstance inst = build_grid_instance(pixels, CoverageVariant::Full, {}, {}, Rat(1), Rat(1));
    ApproxResult res = approx_cycle_cover(inst);
    ValidationReport report = validate_cycle_cover(inst, res.cover);
    CHECK(report.parity_violations.empty());
    CHECK(report.ok());
    ++done;
  }
}

TEST_CASE("two distant clusters give two cycles") {
  std::vector<Pixel> pixels;
  for (int x = 0; x < 9; ++x) pixels.push_back({x, 0});
  pixels.push_back({0, 1});
  pixels.push_back({8, 1});
  std::vector<Pixel> subset{{0, 0}, {0, 1}, {8, 0}, {8, 1}};
  GridInstance inst = build_grid_instance(pixels, CoverageVariant::Subset, subset, {}, 1, 1);
  ApproxResult res = approx_cycle_cover(inst);
  CHECK(res.cover.cycles.size() == 2);
  CHECK(validate_cycle_cover(inst, res.cover).ok());
}
