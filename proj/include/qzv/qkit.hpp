#pragma once

// q-combinatorics toolkit: q-integers, q-Pochhammer symbols, q-Stirling
// numbers of the second kind, and exact binomial coefficients. These are the
// scalar building blocks shared by the zeta/Li evaluators and the
// hypergeometric machinery.

#include <mutex>
#include <vector>

#include "qzv/errors.hpp"
#include "qzv/qpoly.hpp"
#include "qzv/series.hpp"

namespace qzv {

// [n] = 1 + q + ... + q^{n-1}. Defined for n >= 1.
inline qpoly q_int(int n) {
  if (n < 1) throw domain_error("q_int: n must be >= 1");
  std::vector<rational> c(static_cast<size_t>(n), rational(1));
  return qpoly(std::move(c));
}

// 1/(1 - q^n) truncated at q-order `ord`: the geometric series in q^n.
inline qpoly geom_inverse(int n, int ord) {
  if (n < 1) throw domain_error("geom_inverse: n must be >= 1");
  std::vector<rational> c(static_cast<size_t>(ord) + 1, rational(0));
  for (int j = 0; n * j <= ord; ++j) c[static_cast<size_t>(n) * j] = rational(1);
  return qpoly(std::move(c));
}

// 1/[n] = (1-q)/(1-q^n) truncated at q-order `ord`.
inline qpoly q_int_inverse(int n, int ord) {
  qpoly one_minus_q = qpoly::constant(rational(1)) + qpoly::monomial(1, rational(-1));
  return qpoly::mul(one_minus_q, geom_inverse(n, ord), ord);
}

// Exact binomial coefficient C(n, k) for n >= 0; C(n, k) = 0 when k < 0 or
// k > n. Negative n has no use here and is rejected.
inline rational binomial(int n, int k) {
  if (n < 0) throw domain_error("binomial: negative n");
  if (k < 0 || k > n) return rational(0);
  if (k > n - k) k = n - k;
  rational r(1);
  for (int i = 1; i <= k; ++i) {
    r *= rational(n - k + i);
    r /= rational(i);
  }
  return r;
}

// q-Stirling numbers of the second kind, defined by the recurrence
//   S(n, k) = q^{k-1} S(n-1, k-1) + [k] S(n-1, k),  S(0, 0) = 1,
// and S(n, k) = 0 for k < 0, k > n, or n < 0. At q = 1 these reduce to the
// classical Stirling set numbers. Values are memoized; the table is built
// under a mutex and rows are only appended, so returned copies are safe.
inline qpoly q_stirling2(int n, int k) {
  if (k < 0 || n < 0 || k > n) return qpoly();
  static std::mutex mu;
  static std::vector<std::vector<qpoly>> table;  // table[n][k], k <= n
  std::lock_guard<std::mutex> lock(mu);
  if (table.empty()) table.push_back({qpoly::constant(rational(1))});
  while (static_cast<int>(table.size()) <= n) {
    int m = static_cast<int>(table.size());
    std::vector<qpoly> row(static_cast<size_t>(m) + 1);
    for (int j = 1; j <= m; ++j) {
      qpoly a = qpoly::mul(qpoly::monomial(j - 1), table[m - 1][j - 1]);
      if (j <= m - 1) a += qpoly::mul(q_int(j), table[m - 1][j]);
      row[j] = std::move(a);
    }
    table.push_back(std::move(row));
  }
  return table[n][k];
}

// Finite q-Pochhammer symbol (a; q)_n = prod_{m=0}^{n-1} (1 - a q^m) for a
// series argument a.
inline series q_pochhammer(const series& a, int n) {
  if (n < 0) throw domain_error("q_pochhammer: n must be >= 0");
  context_ptr c = a.ctx();
  series r = series::one(c);
  series aq = a;
  qpoly q = qpoly::monomial(1);
  for (int m = 0; m < n; ++m) {
    r = r * (series::one(c) - aq);
    aq = aq.mul_qpoly(q);
  }
  return r;
}

// Infinite q-Pochhammer symbol (a; q)_infty under truncation. Requires the
// factors to converge to 1, i.e. a q^m must vanish under truncation for
// large m (a must have positive combined grade).
inline series q_pochhammer_inf(const series& a) {
  context_ptr c = a.ctx();
  if (!a.coeff({}).is_zero())
    throw summability_error("q_pochhammer_inf: argument needs a vanishing constant term");
  series r = series::one(c);
  series aq = a;
  qpoly q = qpoly::monomial(1);
  int guard = c->grade_bound() + 2;
  for (int m = 0; !aq.is_zero(); ++m) {
    if (m > guard)
      throw summability_error("q_pochhammer_inf: factors do not converge to 1 under truncation");
    r = r * (series::one(c) - aq);
    aq = aq.mul_qpoly(q);
  }
  return r;
}

// (a; q)_infty for a = coeff * q^p with p >= 1, as a dense q-polynomial.
// Used by the explicit hypergeometric identity checks, which live entirely
// in the scalar q-world.
inline qpoly q_pochhammer_inf_qpoly(const qpoly& a, int ord) {
  if (!a.coeff(0).is_zero())
    throw summability_error("q_pochhammer_inf_qpoly: argument needs positive q-valuation");
  qpoly r = qpoly::constant(rational(1));
  qpoly aq = a.truncated(ord);
  for (int m = 0; !aq.is_zero(); ++m) {
    qpoly factor = qpoly::constant(rational(1)) - aq;
    r = qpoly::mul(r, factor, ord);
    aq = qpoly::mul(aq, qpoly::monomial(1), ord);
  }
  return r;
}

}  // namespace qzv
