#include <catch2/catch_amalgamated.hpp>

#include "qzv/hypergeom.hpp"

using qzv::context;
using qzv::context_ptr;
using qzv::context_spec;
using qzv::qpoly;
using qzv::rational;
using qzv::series;

namespace {

bool same(const qpoly& a, const qpoly& b) { return (a - b).is_zero(); }

context_ptr two_var_ctx(int N, int cap) {
  context_spec s;
  s.q_order = N;
  s.u_names = {"u1", "u2"};
  s.u_total_cap = cap;
  return context::make(std::move(s));
}

}  // namespace

TEST_CASE("bracket matches the explicit two-root product") {
  context_ptr c = two_var_ctx(8, 4);
  series a1 = series::var(c, "u1"), a2 = series::var(c, "u2");
  std::vector<series> esym = {a1 + a2, a1 * a2};
  qpoly q1 = qzv::detail_hg::one_minus_q();
  for (int shift : {0, 1, 2}) {
    qzv::sym_family fam = qzv::sym_family::make(shift, esym);
    // P = (1 + (1-q) a1)(1 + (1-q) a2)
    series unit1 = series::one(c) + a1.mul_qpoly(q1);
    series unit2 = series::one(c) + a2.mul_qpoly(q1);
    CHECK(fam.P == unit1 * unit2);
    CHECK(fam.P * fam.invP == series::one(c));
    for (int m = 0; m <= 4; ++m) {
      // 1 - a_i q^m with a_i = q^shift / (1 + (1-q) alpha_i)
      series f1 = series::one(c) -
                  unit1.inverse().mul_qpoly(qpoly::monomial(shift + m));
      series f2 = series::one(c) -
                  unit2.inverse().mul_qpoly(qpoly::monomial(shift + m));
      CHECK(fam.bracket(m) == fam.P * f1 * f2);
    }
  }
}

TEST_CASE("term streams") {
  context_spec s;
  s.q_order = 10;
  context_ptr c = context::make(std::move(s));
  // Geometric stream: T_{n+1} = q T_n sums to 1/(1-q).
  series geo = qzv::phi_sum(
      c, [](int, const series& t) { return t.mul_qpoly(qpoly::monomial(1)); }, 32);
  CHECK(geo == series::from_qpoly(c, qzv::geom_inverse(1, 10)));
  // A stream that never dies is reported, not truncated away.
  CHECK_THROWS_AS(
      qzv::phi_sum(c, [](int, const series& t) { return t; }, 8),
      qzv::summability_error);
}

TEST_CASE("explicit series against classical product identities") {
  const int ord = 16;
  // q-binomial theorem: sum_n (q^a;q)_n z^n/(q;q)_n = (q^a z;q)oo/(z;q)oo
  // at z = q^c.
  for (int a = 1; a <= 3; ++a)
    for (int cpow = 1; cpow <= 3; ++cpow) {
      qpoly lhs = qpoly::mul(qzv::phi_qpoly({a}, {}, qpoly::monomial(cpow), ord),
                             qzv::pochhammer_inf_qpow(cpow, ord), ord);
      CHECK(same(lhs, qzv::pochhammer_inf_qpow(a + cpow, ord)));
    }
  // Euler: sum_n z^n/(q;q)_n = 1/(z;q)oo at z = q^c.
  for (int cpow = 1; cpow <= 3; ++cpow) {
    qpoly lhs = qpoly::mul(qzv::phi_qpoly({}, {}, qpoly::monomial(cpow), ord),
                           qzv::pochhammer_inf_qpow(cpow, ord), ord);
    CHECK(same(lhs, qpoly::constant(rational(1))));
  }
  CHECK_THROWS_AS(qzv::phi_qpoly({1}, {}, qpoly::constant(rational(1)), ord),
                  qzv::domain_error);
}

TEST_CASE("pinned summation and transformation instances") {
  auto [h_lhs, h_rhs] = qzv::heine_pair(12);
  CHECK(same(h_lhs, h_rhs));
  auto [k_lhs, k_rhs] = qzv::ktw_pair(12);
  CHECK(same(k_lhs, k_rhs));
}
