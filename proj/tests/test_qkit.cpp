#include <catch2/catch_amalgamated.hpp>

#include "qzv/qkit.hpp"

using qzv::binomial;
using qzv::qpoly;
using qzv::rational;

namespace {
bool same(const qpoly& a, const qpoly& b) { return (a - b).is_zero(); }
}  // namespace

TEST_CASE("q-integers and their truncated inverses") {
  CHECK(same(qzv::q_int(1), qpoly::constant(rational(1))));
  CHECK(same(qzv::q_int(3), qpoly({rational(1), rational(1), rational(1)})));
  const int ord = 16;
  for (int n = 1; n <= 6; ++n) {
    qpoly one_minus_qn = qpoly::constant(rational(1)) - qpoly::monomial(n);
    CHECK(same(qpoly::mul(one_minus_qn, qzv::geom_inverse(n, ord), ord),
               qpoly::constant(rational(1))));
    CHECK(same(qpoly::mul(qzv::q_int(n), qzv::q_int_inverse(n, ord), ord),
               qpoly::constant(rational(1))));
  }
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(0, 0) == rational(1));
  CHECK(binomial(5, 2) == rational(10));
  CHECK(binomial(5, 7) == rational(0));
  CHECK(binomial(5, -1) == rational(0));
  // Vandermonde-style convolution used by the index slicing:
  //   sum_{i=0}^{j} C(i+k, i) C(j-i+m, j-i) = C(k+m+j+1, j).
  int k = 2, m = 1, j = 2;
  rational s(0);
  for (int i = 0; i <= j; ++i) s += binomial(i + k, i) * binomial(j - i + m, j - i);
  CHECK(s == rational(15));
  CHECK(s == binomial(k + m + j + 1, j));
}

TEST_CASE("q-Stirling numbers of the second kind") {
  CHECK(same(qzv::q_stirling2(0, 0), qpoly::constant(rational(1))));
  CHECK(qzv::q_stirling2(3, 0).is_zero());
  CHECK(qzv::q_stirling2(2, 3).is_zero());
  CHECK(same(qzv::q_stirling2(2, 2), qpoly::monomial(1)));
  // S(3,2) = q S(2,1) + [2] S(2,2) = q + (1+q) q = 2q + q^2.
  CHECK(same(qzv::q_stirling2(3, 2),
             qpoly({rational(0), rational(2), rational(1)})));
  // Row sums at q = 1 are the Bell numbers.
  long long bell[] = {1, 1, 2, 5, 15, 52, 203, 877};
  for (int n = 0; n <= 7; ++n) {
    rational sum(0);
    for (int kk = 0; kk <= n; ++kk) sum += qzv::q_stirling2(n, kk).eval_at_one();
    CHECK(sum == rational(bell[n]));
  }
}

TEST_CASE("finite q-Pochhammer splits multiplicatively") {
  qzv::context_spec spec;
  spec.q_order = 12;
  qzv::context_ptr c = qzv::context::make(std::move(spec));
  qzv::series a = qzv::series::from_qpoly(c, qpoly::monomial(1, rational(2)));
  // (a; q)_{m+n} = (a; q)_m * (a q^m; q)_n
  int m = 3, n = 4;
  qzv::series lhs = qzv::q_pochhammer(a, m + n);
  qzv::series rhs = qzv::q_pochhammer(a, m) *
                    qzv::q_pochhammer(a.mul_qpoly(qpoly::monomial(m)), n);
  CHECK(lhs == rhs);
}

TEST_CASE("infinite q-Pochhammer agrees with a long finite one") {
  const int ord = 10;
  qpoly a = qpoly::monomial(2);  // factors 1 - q^{2+m} vanish beyond the order
  qpoly inf = qzv::q_pochhammer_inf_qpoly(a, ord);
  qpoly fin = qpoly::constant(rational(1));
  for (int m = 0; m <= ord; ++m)
    fin = qpoly::mul(fin, qpoly::constant(rational(1)) - qpoly::monomial(2 + m), ord);
  CHECK(same(inf, fin));

  qzv::context_spec spec;
  spec.q_order = ord;
  qzv::context_ptr c = qzv::context::make(std::move(spec));
  qzv::series sa = qzv::series::from_qpoly(c, a);
  CHECK(qzv::q_pochhammer_inf(sa) == qzv::series::from_qpoly(c, inf));
  qzv::series bad = qzv::series::one(c);
  CHECK_THROWS_AS(qzv::q_pochhammer_inf(bad), qzv::summability_error);
}
