#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "qzv/mzv.hpp"

using idx = qzv::index;
using qzv::qpoly;
using qzv::rational;
using qzv::tpoly;

namespace {

bool same(const qpoly& a, const qpoly& b) { return (a - b).is_zero(); }

bool same_tpoly(const tpoly& a, const tpoly& b) {
  size_t n = std::max(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    qpoly av = i < a.size() ? a[i] : qpoly();
    qpoly bv = i < b.size() ? b[i] : qpoly();
    if (!same(av, bv)) return false;
  }
  return true;
}

qpoly from_coeffs(std::vector<long long> v) {
  std::vector<rational> c(v.begin(), v.end());
  return qpoly(std::move(c));
}

}  // namespace

// Reference expansions computed by hand from the defining sums
// (q^m / [m]^2 etc., expanding each 1/(1-q^m) as a geometric series).
TEST_CASE("zeta values against hand-computed expansions") {
  CHECK(same(qzv::zeta_q({2}, 8), from_coeffs({0, 1, 1, -1, 2, -4, 7, -10, 11})));
  CHECK(same(qzv::zeta_q({3}, 8), from_coeffs({0, 0, 1, 0, 1, -3, 7, -13, 19})));
  CHECK(same(qzv::zeta_q({2, 1}, 8), from_coeffs({0, 0, 1, 0, 1, -3, 7, -13, 19})));
  CHECK_THROWS_AS(qzv::zeta_q({1, 2}, 8), qzv::domain_error);
}

TEST_CASE("depth sums collapse to the single zeta value") {
  const int N = 20;
  CHECK(same(qzv::zeta_q({2, 1}, N), qzv::zeta_q({3}, N)));
  CHECK(same(qzv::zeta_q({3, 1}, N) + qzv::zeta_q({2, 2}, N), qzv::zeta_q({4}, N)));
  CHECK(same(qzv::zeta_q({2, 1, 1}, N), qzv::zeta_q({4}, N)));
}

TEST_CASE("weak minus strict double zeta") {
  const int N = 16;
  qpoly one_minus_q = qpoly::constant(rational(1)) - qpoly::monomial(1);
  qpoly diff = qzv::zeta_star_q({2, 1}, N) - qzv::zeta_q({2, 1}, N);
  qpoly expect = qzv::zeta_q({3}, N) + qpoly::mul(one_minus_q, qzv::zeta_q({2}, N), N);
  CHECK(same(diff, expect));
}

TEST_CASE("interpolated zeta of (2,1)") {
  const int N = 10;
  tpoly zt = qzv::zeta_t_q({2, 1}, N);
  REQUIRE(zt.size() == 2);
  qpoly one_minus_q = qpoly::constant(rational(1)) - qpoly::monomial(1);
  CHECK(same(zt[0], qzv::zeta_q({2, 1}, N)));
  CHECK(same(zt[1], qzv::zeta_q({3}, N) +
                        qpoly::mul(one_minus_q, qzv::zeta_q({2}, N), N)));
  // t = 0 is the strict sum, t = 1 the weak sum.
  CHECK(same(qzv::tpoly_eval(zt, rational(0), N), qzv::zeta_q({2, 1}, N)));
  CHECK(same(qzv::tpoly_eval(zt, rational(1), N), qzv::zeta_star_q({2, 1}, N)));
}

TEST_CASE("interpolation hits the weak sum at t = 1") {
  const int N = 12;
  for (const idx& k :
       {idx{2}, idx{3}, idx{2, 2}, idx{3, 1}, idx{2, 1, 1}, idx{4, 2}}) {
    tpoly zt = qzv::zeta_t_q(k, N);
    CHECK(same(qzv::tpoly_eval(zt, rational(0), N), qzv::zeta_q(k, N)));
    CHECK(same(qzv::tpoly_eval(zt, rational(1), N), qzv::zeta_star_q(k, N)));
  }
}

TEST_CASE("box fillings match the weak sum weighted by equalities") {
  const int N = 12;
  for (const idx& k :
       {idx{2}, idx{2, 1}, idx{2, 2}, idx{3, 1}, idx{2, 1, 1}}) {
    CHECK(same_tpoly(qzv::zeta_t_q(k, N), qzv::zeta_t_direct_candidate(k, N)));
  }
}

TEST_CASE("polylog z-coefficients") {
  const int M = 6, N = 6;
  std::vector<qpoly> li3 = qzv::li_q({3}, M, N);
  CHECK(li3[0].is_zero());
  for (int m = 1; m <= M; ++m) {
    qpoly inv = qzv::q_int_inverse(m, N);
    qpoly cube = qpoly::mul(qpoly::mul(inv, inv, N), inv, N);
    CHECK(same(li3[static_cast<size_t>(m)], cube));
  }
  // Depth 2: the z^m coefficient of Li_{(2,1)} is 1/[m]^2 sum_{j<m} 1/[j].
  std::vector<qpoly> li21 = qzv::li_q({2, 1}, M, N);
  for (int m = 1; m <= M; ++m) {
    qpoly inner;
    for (int j = 1; j < m; ++j) inner += qzv::q_int_inverse(j, N);
    qpoly inv = qzv::q_int_inverse(m, N);
    CHECK(same(li21[static_cast<size_t>(m)],
               qpoly::mul(qpoly::mul(inv, inv, N), inner, N)));
  }
  CHECK_THROWS_AS(qzv::li_q({}, M, N), qzv::domain_error);
}

TEST_CASE("interpolated polylog merges two-way") {
  const int M = 6, N = 6;
  std::vector<tpoly> lt = qzv::li_t_q({2, 1}, M, N);
  std::vector<qpoly> a = qzv::li_q({2, 1}, M, N);
  std::vector<qpoly> b = qzv::li_q({3}, M, N);
  for (int m = 0; m <= M; ++m) {
    tpoly expect;
    expect.push_back(a[static_cast<size_t>(m)]);
    expect.push_back(b[static_cast<size_t>(m)]);
    CHECK(same_tpoly(lt[static_cast<size_t>(m)], expect));
  }
}

TEST_CASE("polylog at z = q reduces to interpolated zetas") {
  const int N = 8;
  for (const idx& k : {idx{2}, idx{3}, idx{2, 1}, idx{2, 2}}) {
    CHECK(same_tpoly(qzv::li_t_at_q(k, N), qzv::li_at_q_binomial_rhs(k, N)));
  }
  CHECK_THROWS_AS(qzv::li_at_q_binomial_rhs({1, 2}, N), qzv::domain_error);
}

TEST_CASE("tpoly to series in each t mode") {
  tpoly tp;
  tp.push_back(qpoly::monomial(1));           // q
  tp.push_back(qpoly::constant(rational(2))); // + 2t
  {
    qzv::context_spec s;
    s.q_order = 4;
    s.has_t = true;
    qzv::context_ptr c = qzv::context::make(std::move(s));
    qzv::series got = qzv::series_from_tpoly(c, tp);
    qzv::series want = qzv::series::var(c, "t").scaled(rational(2)) +
                       qzv::series::from_qpoly(c, qpoly::monomial(1));
    CHECK(got == want);
  }
  {
    qzv::context_spec s;
    s.q_order = 4;
    s.t_is_value = true;
    s.t_value = rational(1, 2);
    qzv::context_ptr c = qzv::context::make(std::move(s));
    CHECK(qzv::series_from_tpoly(c, tp) ==
          qzv::series::from_qpoly(c, qpoly::monomial(1)) +
              qzv::series::constant(c, rational(1)));
  }
  {
    qzv::context_spec s;
    s.q_order = 4;
    qzv::context_ptr c = qzv::context::make(std::move(s));
    CHECK_THROWS_AS(qzv::series_from_tpoly(c, tp), qzv::config_error);
    tpoly tfree;
    tfree.push_back(qpoly::monomial(2));
    CHECK(qzv::series_from_tpoly(c, tfree) ==
          qzv::series::from_qpoly(c, qpoly::monomial(2)));
  }
}
