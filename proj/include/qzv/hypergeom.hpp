#pragma once

// Basic hypergeometric machinery over truncated series.
//
// Parameter families here always have the shape a_i = q^s / (1 + (1-q) α_i),
// and individual roots α_i are never constructed: a family is represented by
// the elementary symmetric functions e_1..e_d of its α's. Writing
//   P = Π_i (1 + (1-q) α_i) = 1 + Σ_{j=1}^{d} (1-q)^j e_j,
// every Pochhammer-type product factors as
//   Π_i (1 - a_i q^m) = bracket(m) / P,
//   bracket(m) = Σ_{i=0}^{d} (1 - q^{m+s})^{d-i} (1-q)^i e_i   (e_0 = 1),
// and in all term ratios assembled downstream the unit P cancels between
// numerator and denominator families, leaving only brackets and their
// inverses.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qzv/errors.hpp"
#include "qzv/qkit.hpp"
#include "qzv/qpoly.hpp"
#include "qzv/series.hpp"

namespace qzv {

namespace detail_hg {

inline qpoly one_minus_q() {
  return qpoly::constant(rational(1)) + qpoly::monomial(1, rational(-1));
}

// 1 - q^e truncated to the context order (collapses to 1 past the cap).
inline qpoly one_minus_qpow(int e, int ord) {
  qpoly p = qpoly::constant(rational(1));
  if (e <= ord) p += qpoly::monomial(e, rational(-1));
  return p;
}

}  // namespace detail_hg

struct sym_family {
  int d = 0;      // number of roots
  int shift = 0;  // s in a_i = q^s / (1 + (1-q) α_i)
  std::vector<series> e;  // e[j-1] = e_j(α), j = 1..d
  series P;               // Π_i (1 + (1-q) α_i), a unit
  series invP;

  static sym_family make(int shift, std::vector<series> esym) {
    if (esym.empty()) throw config_error("sym_family: empty symmetric-function list");
    sym_family f;
    f.d = static_cast<int>(esym.size());
    f.shift = shift;
    f.e = std::move(esym);
    const context_ptr& c = f.e[0].ctx();
    int ord = c->q_order();
    qpoly q1 = detail_hg::one_minus_q();
    qpoly w = qpoly::constant(rational(1));
    f.P = series::one(c);
    for (int j = 1; j <= f.d; ++j) {
      w = qpoly::mul(w, q1, ord);
      f.P += f.e[j - 1].mul_qpoly(w);
    }
    f.invP = f.P.inverse();
    return f;
  }

  // P * Π_i (1 - a_i q^m).
  series bracket(int m) const {
    const context_ptr& c = P.ctx();
    int ord = c->q_order();
    qpoly base = detail_hg::one_minus_qpow(m + shift, ord);
    qpoly q1 = detail_hg::one_minus_q();
    std::vector<qpoly> bp(d + 1), qp(d + 1);
    bp[0] = qp[0] = qpoly::constant(rational(1));
    for (int j = 1; j <= d; ++j) {
      bp[j] = qpoly::mul(bp[j - 1], base, ord);
      qp[j] = qpoly::mul(qp[j - 1], q1, ord);
    }
    series out = series::from_qpoly(c, bp[d]);
    for (int i = 1; i <= d; ++i)
      out += e[i - 1].mul_qpoly(qpoly::mul(bp[d - i], qp[i], ord));
    return out;
  }
};

// Sums a hypergeometric term stream T_0 + T_1 + ... with T_0 = 1 and
// T_{n+1} = step(n, T_n). Every stream formed in this library gains at least
// one power of q (or of z) per step, so in a truncated context the terms
// eventually vanish identically; surviving past n_max signals a transcription
// error upstream and is reported loudly instead of being truncated away.
inline series phi_sum(const context_ptr& c,
                      const std::function<series(int, const series&)>& step,
                      int n_max) {
  series total = series::one(c);
  series term = series::one(c);
  for (int n = 0;; ++n) {
    term = step(n, term);
    if (term.is_zero()) break;
    if (n >= n_max)
      throw summability_error("phi_sum: term stream still alive after " +
                              std::to_string(n_max) + " steps");
    total += term;
  }
  return total;
}

// ₍A₎φ₍B₎ value as a dense q-polynomial when all parameters are explicit
// powers of q: upper parameters q^a for a in a_pows, lower parameters q^b for
// b in b_pows (the conventional (q;q)_n factor is implicit and must not be
// listed), argument w with positive q-valuation.
inline qpoly phi_qpoly(const std::vector<int>& a_pows, const std::vector<int>& b_pows,
                       const qpoly& w, int ord) {
  if (w.is_zero() || !w.coeff(0).is_zero())
    throw domain_error("phi_qpoly: argument needs positive q-valuation");
  qpoly total = qpoly::constant(rational(1));
  qpoly term = total;
  for (int n = 0;; ++n) {
    qpoly nxt = qpoly::mul(term, w, ord);
    for (int a : a_pows)
      nxt = qpoly::mul(nxt, detail_hg::one_minus_qpow(a + n, ord), ord);
    nxt = qpoly::mul(nxt, geom_inverse(n + 1, ord), ord);
    for (int b : b_pows) nxt = qpoly::mul(nxt, geom_inverse(b + n, ord), ord);
    term = std::move(nxt);
    if (term.is_zero()) break;
    if (n > ord + 1) throw summability_error("phi_qpoly: stream did not terminate");
    total += term;
  }
  return total;
}

// (q^e; q)_∞ as a q-polynomial.
inline qpoly pochhammer_inf_qpow(int e, int ord) {
  return q_pochhammer_inf_qpoly(qpoly::monomial(e), ord);
}

// Summation instance ₂φ₁[q, q³; q⁵; q, q] — the argument equals b₁/(a₁a₂), so
// the series telescopes to an infinite-product ratio:
//   lhs = ₂φ₁ value, rhs = (q⁴;q)_∞ (q²;q)_∞ / ((q⁵;q)_∞ (q;q)_∞).
inline std::pair<qpoly, qpoly> heine_pair(int ord) {
  qpoly lhs = phi_qpoly({1, 3}, {5}, qpoly::monomial(1), ord);
  qpoly num = qpoly::mul(pochhammer_inf_qpow(4, ord), pochhammer_inf_qpow(2, ord), ord);
  qpoly den = qpoly::mul(pochhammer_inf_qpow(5, ord), pochhammer_inf_qpow(1, ord), ord);
  qpoly rhs = qpoly::mul(num, qpoly::inverse(den, ord), ord);
  return {lhs, rhs};
}

// Three-term transformation instance (Kummer–Thomae–Whipple type) at
// (a₁,a₂,a₃;b₁,b₂) = (q,q²,q³;q⁶,q⁴), argument b₁b₂/(a₁a₂a₃) = q⁴:
//   lhs = ₃φ₂[q,q²,q³; q⁶,q⁴; q, q⁴],
//   rhs = (q⁵;q)_∞ (q⁵;q)_∞ / ((q⁶;q)_∞ (q⁴;q)_∞) · ₃φ₂[q,q²,q; q⁴,q⁵; q, q⁵].
inline std::pair<qpoly, qpoly> ktw_pair(int ord) {
  qpoly lhs = phi_qpoly({1, 2, 3}, {6, 4}, qpoly::monomial(4), ord);
  qpoly num = qpoly::mul(pochhammer_inf_qpow(5, ord), pochhammer_inf_qpow(5, ord), ord);
  qpoly den = qpoly::mul(pochhammer_inf_qpow(6, ord), pochhammer_inf_qpow(4, ord), ord);
  qpoly pre = qpoly::mul(num, qpoly::inverse(den, ord), ord);
  qpoly rhs = qpoly::mul(pre, phi_qpoly({1, 2, 1}, {4, 5}, qpoly::monomial(5), ord), ord);
  return {lhs, rhs};
}

}  // namespace qzv
