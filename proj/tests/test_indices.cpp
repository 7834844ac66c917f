#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "qzv/indices.hpp"

using idx = qzv::index;

TEST_CASE("index statistics") {
  idx k = {3, 1, 2, 1};
  CHECK(qzv::weight(k) == 7);
  CHECK(qzv::depth(k) == 4);
  CHECK(qzv::height(k, 1) == 2);  // parts >= 2
  CHECK(qzv::height(k, 2) == 1);  // parts >= 3
  CHECK(qzv::height(k, 3) == 0);
  CHECK(qzv::admissible(k));
  CHECK_FALSE(qzv::admissible({1, 2}));
  CHECK_FALSE(qzv::admissible({}));
  CHECK(qzv::in_I({4, 1}, 2));
  CHECK_FALSE(qzv::in_I({3, 1}, 2));
  CHECK(qzv::index_to_string({2, 1}) == "(2,1)");
}

TEST_CASE("attached monomial exponents") {
  // r = 1: e = (wt - dep - h1, #parts==1, #parts>=2).
  CHECK(qzv::index_monomial({2, 1}, 1) == std::vector<int>{0, 1, 1});
  CHECK(qzv::index_monomial({3}, 1) == std::vector<int>{1, 0, 1});
  CHECK(qzv::monomial_degree({3}, 1) == 2);
  // r = 2: parts >= 3 land in the top slot.
  CHECK(qzv::index_monomial({4, 2, 1}, 2) == std::vector<int>{1, 1, 1, 1});
  CHECK(qzv::monomial_degree({4, 2, 1}, 2) == 4);
  // Degree equals the sum of the exponents plus the height weighting.
  idx k = {5, 2, 2, 1};
  for (int r = 1; r <= 3; ++r) {
    std::vector<int> e = qzv::index_monomial(k, r);
    int total = 0;
    for (int v : e) total += v;
    // u_1 carries degree 1 each, the others 1 each; the monomial degree is
    // e_1 + dep by construction.
    CHECK(total == qzv::monomial_degree(k, r));
  }
}

TEST_CASE("budget-driven enumeration") {
  // Budget 2 at r = 1: every index with sum_i max(1, k_i - 1) <= 2.
  std::set<idx> seen;
  qzv::for_each_index(1, 2, 1, [&](const idx& k) { seen.insert(k); });
  std::set<idx> expect = {{1}, {2}, {3}, {1, 1}, {1, 2}, {2, 1}, {2, 2}};
  CHECK(seen == expect);
  // min_first = 2 removes the indices starting with 1.
  seen.clear();
  qzv::for_each_index(1, 2, 2, [&](const idx& k) { seen.insert(k); });
  expect = {{2}, {3}, {2, 1}, {2, 2}};
  CHECK(seen == expect);
  // Larger parts are reachable within a small budget when r is larger:
  // at r = 3, part 4 costs 1.
  bool saw_4441 = false;
  qzv::for_each_index(3, 4, 1, [&](const idx& k) {
    if (k == idx{4, 4, 4, 1}) saw_4441 = true;
  });
  CHECK(saw_4441);
}

TEST_CASE("weight and depth slices") {
  using qzv::enumerate_I;
  // I_0 of weight 3, depth 2, height (1): only (2,1).
  CHECK(enumerate_I(3, 2, 0, {1}) == std::vector<idx>{{2, 1}});
  // Height filter (2) at weight 4, depth 2: only (2,2).
  CHECK(enumerate_I(4, 2, 0, {2}) == std::vector<idx>{{2, 2}});
  // No height filter: all admissible weight-4 depth-2 indices.
  CHECK(enumerate_I(4, 2, 0, {}) == std::vector<idx>{{2, 2}, {3, 1}});
  // j = -1 includes first part 1.
  CHECK(enumerate_I(3, 2, -1, {}) == std::vector<idx>{{1, 2}, {2, 1}});
  // When depth equals the 1-height, strict and admissible slices coincide:
  // I_{-1} minus I_0 with h_1 = dep is empty.
  for (int wt = 2; wt <= 6; ++wt) {
    for (int dep = 1; dep <= wt - 1; ++dep) {
      auto all = enumerate_I(wt, dep, -1, {dep});
      auto adm = enumerate_I(wt, dep, 0, {dep});
      CHECK(all == adm);
    }
  }
  // Empty-index conventions.
  CHECK(enumerate_I(0, 0, -1, {}) == std::vector<idx>{{}});
  CHECK(enumerate_I(0, 0, 0, {}).empty());
  CHECK(enumerate_I(1, 0, -1, {}).empty());
  CHECK(enumerate_I(0, 0, -1, {1}).empty());
}
