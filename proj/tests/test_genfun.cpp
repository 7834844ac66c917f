#include <catch2/catch_amalgamated.hpp>

#include "qzv/genfun.hpp"
#include "qzv/mzv.hpp"

using qzv::context;
using qzv::context_ptr;
using qzv::context_spec;
using qzv::qpoly;
using qzv::rational;
using qzv::series;
using qzv::tpoly;

namespace {

context_ptr u_ctx(int r, int cap, int N, bool symbolic_t = true) {
  context_spec s;
  s.q_order = N;
  if (symbolic_t) {
    s.has_t = true;
  } else {
    s.t_is_value = true;
    s.t_value = rational(0);
  }
  for (int i = 1; i <= r + 2; ++i) s.u_names.push_back(qzv::u_name(i));
  s.u_total_cap = cap;
  return context::make(std::move(s));
}

bool same_tpoly(const tpoly& a, const tpoly& b) {
  size_t n = std::max(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    qpoly av = i < a.size() ? a[i] : qpoly();
    qpoly bv = i < b.size() ? b[i] : qpoly();
    if (!(av - bv).is_zero()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("substitution formulas at r = 1") {
  context_ptr c = u_ctx(1, 5, 8);
  series u1 = series::var(c, "u1"), u2 = series::var(c, "u2"),
         u3 = series::var(c, "u3");
  series invU = qzv::one_plus_q1_var(c, "u1").inverse();
  qpoly q1 = qzv::detail_hg::one_minus_q();
  std::vector<series> xs = qzv::x_from_u(c, 1);
  CHECK(xs[1] == u1 * invU);
  // x_2 = u_2 - (1-q) u_3 / (1 + (1-q)u_1): the divided route is complete one
  // degree below the cap.
  CHECK(xs[2] == (u2 - (u3 * invU).mul_qpoly(q1)).truncated_to_u_total(4));
  CHECK(xs[3] == u3 * invU * invU);
}

TEST_CASE("substitution round trip at r = 1") {
  const int cap = 5, keep = 4;  // one division each way costs one degree
  context_ptr c = u_ctx(1, cap, 6);
  std::vector<series> xs = qzv::x_from_u(c, 1);
  series unit = qzv::one_plus_q1_var(c, "u1");
  std::vector<series> up = {series::one(c), unit, unit * unit, unit * unit * unit};
  std::vector<series> us = qzv::u_of_x(xs, 1, [&](const series& s, int e) {
    return s.monomial_div("u1", e) * up[static_cast<size_t>(e)];
  });
  for (int j = 1; j <= 3; ++j) {
    CHECK(us[static_cast<size_t>(j)].truncated_to_u_total(keep) ==
          series::var(c, qzv::u_name(j)).truncated_to_u_total(keep));
  }
}

TEST_CASE("denominator constant routes agree") {
  for (int r : {1, 2}) {
    context_ptr c = u_ctx(r, 4, 6);
    series cu = qzv::c_constant_u_route(c, r);
    series cx = qzv::c_constant_x_route(c, r);
    CHECK(cx.truncated_to_u_total(4 - r) == cu.truncated_to_u_total(4 - r));
    // t = 0 face: (1 - q u_1)/(1 + (1-q) u_1).
    series expect0 = (series::one(c) -
                      series::var(c, "u1").mul_qpoly(qpoly::monomial(1))) *
                     qzv::one_plus_q1_var(c, "u1").inverse();
    CHECK(cu.subst_t(rational(0)) == expect0);
  }
}

TEST_CASE("sum formula instance at weight 3 depth 2") {
  const int N = 10;
  tpoly lhs = qzv::sum_formula_lhs(3, 2, N);
  tpoly rhs = qzv::sum_formula_rhs(3, 2, N);
  // Only (2,1) is admissible, so both sides are zeta(3) + t(zeta(3)+(1-q)zeta(2)).
  qpoly z3 = qzv::zeta_q({3}, N), z2 = qzv::zeta_q({2}, N);
  qpoly one_minus_q = qpoly::constant(rational(1)) - qpoly::monomial(1);
  tpoly expect;
  expect.push_back(z3);
  expect.push_back(z3 + qpoly::mul(one_minus_q, z2, N));
  CHECK(same_tpoly(lhs, expect));
  CHECK(same_tpoly(rhs, expect));
  // t = 1 face: 2 zeta(3) + (1-q) zeta(2).
  qpoly at1 = qzv::tpoly_eval(lhs, rational(1), N);
  CHECK((at1 - z3 - z3 - qpoly::mul(one_minus_q, z2, N)).is_zero());
}

TEST_CASE("scalar logarithm identity behind the full-height product") {
  // log prod_{n>=1} (1 - (q^n/[n]) x)
  //   = (1/(q-1)) log(1 + (1-q)x) sum_n q^n/[n]
  //     - sum_{n>=2} zeta(n) sum_{m>=0} (q-1)^m/(m+n) x^{m+n}.
  const int N = 12, cap = 6;
  context_spec s;
  s.q_order = N;
  s.u_names = {"u1"};
  s.u_total_cap = cap;
  context_ptr c = context::make(std::move(s));
  series x = series::var(c, "u1");
  qpoly q1 = qzv::detail_hg::one_minus_q();

  series lhs = series::zero(c);
  for (int n = 1; n <= N; ++n) {
    qpoly f = qpoly::mul(qpoly::monomial(n), qzv::q_int_inverse(n, N), N);
    lhs += x.mul_qpoly(f).scaled(rational(-1)).log1p();
  }

  series big_l = series::zero(c);
  for (int n = 1; n <= N; ++n)
    big_l += series::from_qpoly(
        c, qpoly::mul(qpoly::monomial(n), qzv::q_int_inverse(n, N), N));
  series q_minus_1_inv =
      series::from_qpoly(c, qpoly::monomial(1) - qpoly::constant(rational(1))).inverse();
  series rhs = x.mul_qpoly(q1).log1p() * big_l * q_minus_1_inv;
  for (int n = 2; n <= cap; ++n) {
    qpoly zn = qzv::zeta_q({n}, N);
    qpoly qm1 = qpoly::constant(rational(1));
    for (int m = 0; m + n <= cap; ++m) {
      series term = x.pow(m + n).mul_qpoly(qpoly::mul(zn, qm1, N))
                        .scaled(rational(1, m + n));
      rhs -= term;
      qm1 = qpoly::mul(qm1, qpoly::monomial(1) - qpoly::constant(rational(1)), N);
    }
  }
  CHECK(lhs == rhs);
}

TEST_CASE("full-height generating function at small caps") {
  context_spec s;
  s.q_order = 6;
  s.has_t = true;
  s.u_names = {"u1", "u3"};
  s.u_total_cap = 4;
  context_ptr c = context::make(std::move(s));
  CHECK(qzv::fullheight_lhs(c) == qzv::fullheight_rhs(c));
}

TEST_CASE("closed forms match the direct sums at tiny caps") {
  const int D = 3, N = 6;
  {  // generic assembly, r = 1
    context_ptr work = u_ctx(1, D + 1, N);
    context_ptr box = u_ctx(1, D, N);
    series closed =
        qzv::psi0_closed_form(work, 1).truncated_to_u_total(D).transported(box);
    CHECK(closed == qzv::brute_psi0(box, 1));
  }
  {  // explicit r = 1 form
    context_ptr box = u_ctx(1, D, N);
    CHECK(qzv::psi0_closed_form_r1(box) == qzv::brute_psi0(box, 1));
  }
  {  // t = 0 form, r = 1
    context_ptr work = u_ctx(1, 2 * D + 3, N, /*symbolic_t=*/false);
    context_ptr box = u_ctx(1, D, N, /*symbolic_t=*/false);
    series closed =
        qzv::psi0_t0_closed_form(work, 1).truncated_to_u_total(D).transported(box);
    CHECK(closed == qzv::brute_psi0(box, 1));
  }
}

TEST_CASE("free-coefficient closed forms at tiny caps") {
  context_spec s;
  s.q_order = 6;
  s.has_t = true;
  s.u_names = {"x1", "x2", "x3"};
  s.u_total_cap = 3;
  s.z_order = 6;
  context_ptr cz = context::make(std::move(s));
  for (int j = -1; j <= 0; ++j) {
    CHECK(qzv::phi_closed_z(cz, 1, j) == qzv::brute_phi_j_z(cz, 1, j));
  }
  context_spec s2;
  s2.q_order = 6;
  s2.has_t = true;
  s2.u_names = {"x1", "x2", "x3"};
  s2.u_total_cap = 3;
  context_ptr cq = context::make(std::move(s2));
  CHECK(qzv::phi_closed_at_q(cq, 1, 0) == qzv::brute_phi_j_at_q(cq, 1, 0));
}
