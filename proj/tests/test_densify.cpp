#include <doctest.h>

#include <algorithm>
#include <set>

#include "dv/densify.hpp"
#include "dv/rng.hpp"
#include "support/oracles.hpp"

using namespace dv;

namespace {

DepthMap random_sparse(Rng& rng, int w, int h, int valid_count) {
  DepthMap map(w, h);
  int placed = 0;
  while (placed < valid_count) {
    const int u = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(w)));
    const int v = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(h)));
    if (!map.valid(u, v)) {
      // Distinct values per site so label mistakes are visible in depths.
      map.set(u, v, 1.0 + 0.001 * (v * w + u));
      ++placed;
    }
  }
  return map;
}

void check_against_oracle(const DepthMap& map) {
  const auto expected = oracle::densify_brute_force(map);
  const auto got = densify_labels(map);
  REQUIRE(got.size() == expected.size());
  for (size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i] == expected[i]);
  }
}

}  // namespace

TEST_CASE("single valid pixel floods the map") {
  DepthMap map(6, 5);
  map.set(3, 2, 7.0);
  DenseDepth dense = densify_nearest(map);
  for (double d : dense.depth_data()) CHECK(d == 7.0);
}

TEST_CASE("1x10 row splits at the midpoint") {
  DepthMap map(10, 1);
  map.set(0, 0, 1.0);
  map.set(9, 0, 9.0);
  DenseDepth dense = densify_nearest(map);
  for (int u = 0; u <= 4; ++u) CHECK(dense.at(u, 0) == 1.0);
  for (int u = 5; u <= 9; ++u) CHECK(dense.at(u, 0) == 9.0);
}

TEST_CASE("equidistant sites resolve by smallest row then column") {
  // Pixel (1,0) is distance 1 from both (0,0) and (2,0): smaller column wins.
  DepthMap row(3, 1);
  row.set(0, 0, 1.0);
  row.set(2, 0, 2.0);
  CHECK(densify_nearest(row).at(1, 0) == 1.0);

  // Pixel (0,1) equidistant from rows 0 and 2: smaller row wins.
  DepthMap col(1, 3);
  col.set(0, 0, 1.0);
  col.set(0, 2, 2.0);
  CHECK(densify_nearest(col).at(0, 1) == 1.0);

  // 3-4-5 style tie across distinct rows and columns: sites (4,3) and (0,5)
  // are both at squared distance 25 from pixel (0,0); row 3 < row 5 wins.
  DepthMap diag(8, 8);
  diag.set(4, 3, 1.0);  // (u=4, v=3)
  diag.set(0, 5, 2.0);  // (u=0, v=5)
  CHECK(densify_nearest(diag).at(0, 0) == 1.0);
  check_against_oracle(diag);
}

TEST_CASE("matches the brute-force oracle on random maps") {
  Rng rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const int w = 1 + static_cast<int>(rng.uniform_index(32));
    const int h = 1 + static_cast<int>(rng.uniform_index(32));
    const int max_sites = std::max(1, w * h / 4);
    const int sites = 1 + static_cast<int>(rng.uniform_index(static_cast<uint64_t>(max_sites)));
    check_against_oracle(random_sparse(rng, w, h, sites));
  }
}

TEST_CASE("matches the oracle on tie-heavy regular grids") {
  DepthMap grid(16, 16);
  for (int v = 0; v < 16; v += 4) {
    for (int u = 0; u < 16; u += 4) {
      grid.set(u, v, 1.0 + 0.01 * (v * 16 + u));
    }
  }
  check_against_oracle(grid);

  DepthMap checker(15, 15);
  for (int v = 0; v < 15; ++v) {
    for (int u = 0; u < 15; ++u) {
      if ((u + v) % 6 == 0) checker.set(u, v, 1.0 + 0.01 * (v * 15 + u));
    }
  }
  check_against_oracle(checker);
}

TEST_CASE("dense input densifies to itself") {
  Rng rng(9);
  DepthMap map(12, 8);
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 12; ++u) map.set(u, v, rng.uniform(0.0, 50.0));
  DenseDepth dense = densify_nearest(map);
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 12; ++u) CHECK(dense.at(u, v) == map.depth(u, v));
}

TEST_CASE("output value set is a subset of input values") {
  Rng rng(13);
  DepthMap map = random_sparse(rng, 20, 14, 9);
  std::set<double> inputs;
  for (int v = 0; v < 14; ++v)
    for (int u = 0; u < 20; ++u)
      if (map.valid(u, v)) inputs.insert(map.depth(u, v));
  DenseDepth dense = densify_nearest(map);
  for (double d : dense.depth_data()) CHECK(inputs.count(d) == 1);
}

TEST_CASE("empty sparse map is an error") {
  DepthMap map(4, 4);
  CHECK_THROWS_WITH_AS(densify_nearest(map), doctest::Contains("empty sparse map"),
                       std::invalid_argument);
}

TEST_CASE("encode_for_generator endpoints and clamping") {
  DenseDepth dense(3, 1, {0.0, 50.0, 200.0});
  ImageSigned enc = encode_for_generator(dense, 100.0);
  CHECK(enc.at(0, 0, 0) == -1.0);
  CHECK(enc.at(1, 0, 0) == 0.0);
  CHECK(enc.at(2, 0, 0) == 1.0);  // clamped at max_range

  DenseDepth full(1, 1, {100.0});
  CHECK(encode_for_generator(full, 100.0).at(0, 0, 0) == 1.0);
  CHECK_THROWS_AS(encode_for_generator(full, 0.0), std::invalid_argument);
}
