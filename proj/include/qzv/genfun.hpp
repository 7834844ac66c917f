#pragma once

// Closed forms of the height/depth generating functions: the u <-> x change of
// variables, the alpha/beta symmetric families attached to an interpolation
// parameter t, and the hypergeometric assemblies whose truncations the check
// layer compares against brute-force sums. Everything here works over a
// floor-0 box context; the one place negative u1-exponents would appear (the
// c_m coefficients of the generic closed form) is cleared by a global u1^r
// factor that is divided back out of the final result, the divisibility being
// checked term-by-term.

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qzv/hypergeom.hpp"
#include "qzv/indices.hpp"
#include "qzv/mzv.hpp"
#include "qzv/qkit.hpp"
#include "qzv/series.hpp"

namespace qzv {

namespace detail_gf {

// (q - 1)^e with e >= -1; the e = -1 case is the geometric series -1/(1-q).
inline qpoly q_minus_one_pow(int e, int ord) {
  if (e < -1) throw domain_error("q_minus_one_pow: exponent below -1");
  if (e == -1) {
    qpoly g = geom_inverse(1, ord);
    g.scale(rational(-1));
    return g;
  }
  qpoly r = qpoly::constant(rational(1));
  qpoly base = qpoly::monomial(1) - qpoly::constant(rational(1));
  for (int i = 0; i < e; ++i) r = qpoly::mul(r, base, ord);
  return r;
}

// Memoized integer-indexed series table (bracket ratios, Pochhammer steps).
class series_table {
 public:
  explicit series_table(std::function<series(int)> f) : f_(std::move(f)) {}
  const series& operator()(int m) {
    if (m < 0) throw domain_error("series_table: negative index");
    while (static_cast<int>(v_.size()) <= m)
      v_.push_back(f_(static_cast<int>(v_.size())));
    return v_[static_cast<size_t>(m)];
  }

 private:
  std::function<series(int)> f_;
  std::vector<series> v_;
};

}  // namespace detail_gf

inline std::string u_name(int i) { return "u" + std::to_string(i); }
inline std::string x_name(int i) { return "x" + std::to_string(i); }

// t as a series: the symbolic variable when the context carries one, the
// pinned value otherwise.
inline series t_series(const context_ptr& c) {
  if (c->has_t()) return series::var(c, "t");
  if (c->spec().t_is_value) return series::constant(c, c->spec().t_value);
  throw config_error("t_series: context carries neither symbolic nor pinned t");
}

inline series one_plus_q1_var(const context_ptr& c, const std::string& name) {
  return series::one(c) + series::var(c, name).mul_qpoly(detail_hg::one_minus_q());
}

// The context's variables (index 0 unused, 1..r+2 in order).
inline std::vector<series> free_vars(const context_ptr& c, int r,
                                     const std::function<std::string(int)>& nm) {
  std::vector<series> v(static_cast<size_t>(r) + 3, series::zero(c));
  for (int j = 1; j <= r + 2; ++j) v[static_cast<size_t>(j)] = series::var(c, nm(j));
  return v;
}
inline std::vector<series> free_u_vars(const context_ptr& c, int r) {
  return free_vars(c, r, u_name);
}
inline std::vector<series> free_x_vars(const context_ptr& c, int r) {
  return free_vars(c, r, x_name);
}

// Change of variables u -> x:
//   x_1 = u_1 / (1 + (1-q)u_1)  and, for 2 <= j <= r+2,
//   x_j = u_1^{-(r+2-j)} { sum_{k=j}^{r+1} C(k-2,j-2) ((q-1)u_1)^{k-j}
//                              (u_1^{r+2-k} u_k - u_{r+2})
//                          + u_{r+2} (1 + (1-q)u_1)^{-(j-1)} }.
// The division by u_1^{r+2-j} is exact; div(s, e) performs it in whatever
// representation the caller works in (free u-variables: plain monomial
// division; composed series: division plus a unit correction).
inline std::vector<series> x_of_u(const std::vector<series>& us, int r,
                                  const std::function<series(const series&, int)>& div) {
  const context_ptr& c = us[1].ctx();
  series one = series::one(c);
  qpoly q1 = detail_hg::one_minus_q();
  series inv_unit = (one + us[1].mul_qpoly(q1)).inverse();
  const series& utop = us[static_cast<size_t>(r) + 2];
  std::vector<series> u1p(static_cast<size_t>(r) + 2), ip(static_cast<size_t>(r) + 2);
  u1p[0] = one;
  ip[0] = one;
  for (int e = 1; e <= r + 1; ++e) {
    u1p[static_cast<size_t>(e)] = u1p[static_cast<size_t>(e) - 1] * us[1];
    ip[static_cast<size_t>(e)] = ip[static_cast<size_t>(e) - 1] * inv_unit;
  }
  std::vector<series> gp(static_cast<size_t>(std::max(r, 1)));  // ((q-1)u_1)^e
  gp[0] = one;
  if (r >= 2) {
    series g = us[1].mul_qpoly(detail_gf::q_minus_one_pow(1, c->q_order()));
    for (int e = 1; e <= r - 1; ++e) gp[static_cast<size_t>(e)] = gp[static_cast<size_t>(e) - 1] * g;
  }
  std::vector<series> x(static_cast<size_t>(r) + 3, series::zero(c));
  x[1] = us[1] * inv_unit;
  for (int j = 2; j <= r + 2; ++j) {
    series num = utop * ip[static_cast<size_t>(j) - 1];
    for (int k = j; k <= r + 1; ++k) {
      series piece = us[static_cast<size_t>(k)] * u1p[static_cast<size_t>(r + 2 - k)] - utop;
      num += (gp[static_cast<size_t>(k - j)] * piece).scaled(binomial(k - 2, j - 2));
    }
    x[static_cast<size_t>(j)] = div(num, r + 2 - j);
  }
  return x;
}

// Inverse change of variables x -> u:
//   u_1 = x_1 / (1 - (1-q)x_1)  and, for 2 <= j <= r+2,
//   u_j = x_1^{-(r+2-j)} { sum_{i=j-1}^{r} C(i-1,j-2) ((1-q)x_1)^{i-j+1}
//                              (x_1^{r+1-i} x_{i+1} - x_{r+2})
//                          + x_{r+2} (1 - (1-q)x_1)^{-(j-1)} }.
inline std::vector<series> u_of_x(const std::vector<series>& xs, int r,
                                  const std::function<series(const series&, int)>& div) {
  const context_ptr& c = xs[1].ctx();
  series one = series::one(c);
  qpoly q1 = detail_hg::one_minus_q();
  series inv_lower = (one - xs[1].mul_qpoly(q1)).inverse();
  const series& xtop = xs[static_cast<size_t>(r) + 2];
  std::vector<series> x1p(static_cast<size_t>(r) + 2), ip(static_cast<size_t>(r) + 2);
  x1p[0] = one;
  ip[0] = one;
  for (int e = 1; e <= r + 1; ++e) {
    x1p[static_cast<size_t>(e)] = x1p[static_cast<size_t>(e) - 1] * xs[1];
    ip[static_cast<size_t>(e)] = ip[static_cast<size_t>(e) - 1] * inv_lower;
  }
  std::vector<series> gp(static_cast<size_t>(std::max(r, 1)));  // ((1-q)x_1)^e
  gp[0] = one;
  if (r >= 2) {
    series g = xs[1].mul_qpoly(q1);
    for (int e = 1; e <= r - 1; ++e) gp[static_cast<size_t>(e)] = gp[static_cast<size_t>(e) - 1] * g;
  }
  std::vector<series> u(static_cast<size_t>(r) + 3, series::zero(c));
  u[1] = xs[1] * inv_lower;
  for (int j = 2; j <= r + 2; ++j) {
    series num = xtop * ip[static_cast<size_t>(j) - 1];
    for (int i = j - 1; i <= r; ++i) {
      series piece = xs[static_cast<size_t>(i) + 1] * x1p[static_cast<size_t>(r + 1 - i)] - xtop;
      num += (gp[static_cast<size_t>(i - j) + 1] * piece).scaled(binomial(i - 1, j - 2));
    }
    u[static_cast<size_t>(j)] = div(num, r + 2 - j);
  }
  return u;
}

// u -> x over the context's own u-variables.
inline std::vector<series> x_from_u(const context_ptr& c, int r) {
  return x_of_u(free_u_vars(c, r), r,
                [](const series& s, int e) { return s.monomial_div("u1", e); });
}

// Elementary symmetric functions of the two root families. Alpha:
// e_1 = (1-t)x_2 - x_1, e_j = (1-t)(x_{j+1} - x_1 x_j). Beta: e_1 =
// -(x_1 + t x_2), e_j = -t(x_{j+1} - x_1 x_j).
inline std::vector<series> alpha_esyms(const std::vector<series>& xs, const series& t, int r) {
  series omt = series::one(xs[1].ctx()) - t;
  std::vector<series> e;
  e.reserve(static_cast<size_t>(r) + 1);
  e.push_back(omt * xs[2] - xs[1]);
  for (int j = 2; j <= r + 1; ++j)
    e.push_back(omt * (xs[static_cast<size_t>(j) + 1] - xs[1] * xs[static_cast<size_t>(j)]));
  return e;
}
inline std::vector<series> beta_esyms(const std::vector<series>& xs, const series& t, int r) {
  std::vector<series> e;
  e.reserve(static_cast<size_t>(r) + 1);
  e.push_back(-(xs[1] + t * xs[2]));
  for (int j = 2; j <= r + 1; ++j)
    e.push_back(-(t * (xs[static_cast<size_t>(j) + 1] - xs[1] * xs[static_cast<size_t>(j)])));
  return e;
}

// The denominator constant of the difference system, written in the x's:
//   c = 1 - (x_1 + t x_2) - t sum_{i=0}^{r-1} (x_{r+2-i} - x_1 x_{r+1-i}).
inline series c_constant_from_xs(const std::vector<series>& xs, const series& t, int r) {
  const context_ptr& c = xs[1].ctx();
  series hsum = series::zero(c);
  for (int i = 0; i <= r - 1; ++i)
    hsum += xs[static_cast<size_t>(r + 2 - i)] - xs[1] * xs[static_cast<size_t>(r + 1 - i)];
  return series::one(c) - (xs[1] + t * xs[2]) - t * hsum;
}

// Same constant routed through the u-substitution and simplified by hand:
//   c = { (1 - qu_1) - t(1 - qu_1) sum_{k=2}^{r+1} q^{k-2} u_k - t q^r u_{r+2} }
//       / (1 + (1-q)u_1).
// The two routes agreeing (and (1 + (1-q)u_1) c matching the closed-form
// denominator) is one of the cross-checks the CLI runs.
inline series c_constant_u_route(const context_ptr& c, int r) {
  series one = series::one(c);
  series u1 = series::var(c, "u1");
  series t = t_series(c);
  series inv_unit = one_plus_q1_var(c, "u1").inverse();
  series one_minus_qu1 = one - u1.mul_qpoly(qpoly::monomial(1));
  series mid = series::zero(c);
  for (int k = 2; k <= r + 1; ++k)
    mid += series::var(c, u_name(k)).mul_qpoly(qpoly::monomial(k - 2));
  return (one_minus_qu1 - t * one_minus_qu1 * mid -
          (t * series::var(c, u_name(r + 2))).mul_qpoly(qpoly::monomial(r))) *
         inv_unit;
}
inline series c_constant_x_route(const context_ptr& c, int r) {
  return c_constant_from_xs(x_from_u(c, r), t_series(c), r);
}

// u_1^r * c_m for m = 0..r-1: the coefficient polynomials of the generic
// closed form, cleared of their u_1^{k-r-2} u_{r+2} monomials so the whole
// assembly stays at nonnegative exponents.  (q-1)^{k-r+m-2} runs down to
// exponent -1, which is the geometric series above.
inline std::vector<series> c_hat(const context_ptr& c, int r) {
  const int ord = c->q_order();
  series one = series::one(c);
  series u1 = series::var(c, "u1");
  series inv_unit = one_plus_q1_var(c, "u1").inverse();
  series utop = series::var(c, u_name(r + 2));
  series w = u1.pow(r) * inv_unit;
  series lever = u1.mul_qpoly(detail_hg::one_minus_q()) * inv_unit;  // (1-q)u_1/(1+(1-q)u_1)
  std::vector<series> u1p(static_cast<size_t>(r));
  if (r >= 1) u1p[0] = one;
  for (int e = 1; e <= r - 1; ++e) u1p[static_cast<size_t>(e)] = u1p[static_cast<size_t>(e) - 1] * u1;
  qpoly q1 = detail_hg::one_minus_q();
  std::vector<series> ch(static_cast<size_t>(r), series::zero(c));
  for (int m = 0; m <= r - 1; ++m) {
    series acc = series::zero(c);
    for (int k = r - m + 1; k <= r + 1; ++k) {
      series br = series::constant(c, binomial(k - 2, r - m)) + lever.scaled(binomial(k - 2, r - m - 1));
      int knext = (k == r + 1) ? r + 2 : k + 1;
      series f = series::var(c, u_name(k)) * w - utop * u1p[static_cast<size_t>(k) - 2] +
                 (series::var(c, u_name(knext)) * w).mul_qpoly(q1);
      acc += (br * f).mul_qpoly(detail_gf::q_minus_one_pow(k - r + m - 2, ord));
    }
    ch[static_cast<size_t>(m)] = acc;
  }
  return ch;
}

// Generic closed form of the height-graded generating function Psi_0^t over a
// (u_1..u_{r+2}, t) box context.  All unit prefactors of the hypergeometric
// parameters cancel inside the term ratios, so each series is folded as a
// product of bracket ratios; the final result is exact for total u-degree
// <= u_total_cap - 2r + 1 (one division by u_1^r after a completeness
// truncation at u_total_cap - r + 1).
inline series psi0_closed_form(const context_ptr& c, int r) {
  if (r < 1) throw config_error("psi0_closed_form: r must be >= 1");
  if (c->laurent_floor() != 0)
    throw config_error("psi0_closed_form: expects a floor-0 context");
  const int ord = c->q_order();
  const int cap = c->u_total_cap();
  series one = series::one(c);
  series u1 = series::var(c, "u1");
  series t = t_series(c);
  series unit = one_plus_q1_var(c, "u1");
  series inv_unit = unit.inverse();

  std::vector<series> xs = x_from_u(c, r);
  sym_family A = sym_family::make(1, alpha_esyms(xs, t, r));
  sym_family B = sym_family::make(2, beta_esyms(xs, t, r));
  detail_gf::series_table F(
      [&](int m) { return A.bracket(m) * B.bracket(m).inverse(); });

  std::vector<series> ch = c_hat(c, r);
  series base2 = u1.pow(r + 1) * series::var(c, "u2") * inv_unit * inv_unit;

  qpoly qg = qpoly::mul(qpoly::monomial(1), geom_inverse(1, ord), ord);  // q/(1-q)
  series prefix = one;                     // prod_{m<j} F(m)
  qpoly qqj = qpoly::constant(rational(1));  // (q;q)_j
  series total = series::zero(c);
  for (int j = 0; j <= r - 1; ++j) {
    if (j > 0) {
      prefix = prefix * F(j - 1);
      qqj = qpoly::mul(qqj, detail_hg::one_minus_qpow(j, ord), ord);
    }
    series ahat = series::zero(c);
    for (int m = j; m <= r - 1; ++m)
      ahat += ch[static_cast<size_t>(m)].mul_qpoly(q_stirling2(m + 1, j + 1));
    ahat += base2.mul_qpoly(q_stirling2(r, j + 1));

    qpoly bscal = qpoly::mul(qpoly::monomial(1), qqj, ord);
    for (int i = 0; i < j; ++i) bscal = qpoly::mul(bscal, qg, ord);
    series btilde = prefix.mul_qpoly(bscal);

    series v = phi_sum(
        c,
        [&](int n, const series& T) {
          qpoly sc = qpoly::mul(
              qpoly::monomial(1),
              qpoly::mul(detail_hg::one_minus_qpow(j + n + 1, ord),
                         geom_inverse(n + 1, ord), ord),
              ord);
          return (T * F(j + n)).mul_qpoly(sc);
        },
        c->grade_bound() + 2);
    total += ahat * btilde * v;
  }

  series one_minus_qu1 = one - u1.mul_qpoly(qpoly::monomial(1));
  series mid = series::zero(c);
  for (int k = 2; k <= r + 1; ++k)
    mid += series::var(c, u_name(k)).mul_qpoly(qpoly::monomial(k - 2));
  series denom = one_minus_qu1 - t * one_minus_qu1 * mid -
                 (t * series::var(c, u_name(r + 2))).mul_qpoly(qpoly::monomial(r));
  series num = (unit * unit) * denom.inverse() * total;
  return num.truncated_to_u_total(cap - r + 1).monomial_div("u1", r);
}

// Explicit r = 1 form over (u_1, u_2, u_3, t):
//   Psi_0^t = q u_3 / ((1-qu_1)(1-tu_2) - tqu_3) * phi,
// with phi a single 3x2 basic series whose argument equals q P_alpha/P_beta
// identically -- checked structurally before the stream is folded.
inline series psi0_closed_form_r1(const context_ptr& c) {
  const int ord = c->q_order();
  series one = series::one(c);
  series u1 = series::var(c, "u1");
  series u2 = series::var(c, "u2");
  series u3 = series::var(c, "u3");
  series t = t_series(c);
  series inv_unit = one_plus_q1_var(c, "u1").inverse();
  qpoly q1 = detail_hg::one_minus_q();

  series cross = u1 * u2 - u3;
  series omt = one - t;
  std::vector<series> ea = {(omt * (u2 + cross.mul_qpoly(q1)) - u1) * inv_unit,
                            (omt * (-cross)) * inv_unit};
  std::vector<series> eb = {(-(u1 + t * (u2 + cross.mul_qpoly(q1)))) * inv_unit,
                            (t * cross) * inv_unit};
  sym_family A = sym_family::make(1, ea);
  sym_family B = sym_family::make(2, eb);

  series warg = (one + (omt * u2).mul_qpoly(q1)).mul_qpoly(qpoly::monomial(1)) *
                (one - (t * u2).mul_qpoly(q1)).inverse();
  series folded = A.invP * B.P * warg;
  structural_check(folded == series::from_qpoly(c, qpoly::monomial(1)),
                   "r=1 series argument folds to q at the bracket level");

  detail_gf::series_table F(
      [&](int m) { return A.bracket(m) * B.bracket(m).inverse(); });
  series phi = phi_sum(
      c,
      [&](int n, const series& T) {
        return (T * F(n)).mul_qpoly(qpoly::monomial(1));
      },
      c->grade_bound() + 2);

  series denom = (one - u1.mul_qpoly(qpoly::monomial(1))) * (one - t * u2) -
                 (t * u3).mul_qpoly(qpoly::monomial(1));
  return u3.mul_qpoly(qpoly::monomial(1)) * denom.inverse() * phi;
}

// Exact division of S (complete for total u-degree <= budget) by
// u_{r+2} - u_1 u_{r+1}, slicing along powers of u_{r+2}:
//   S_d = Q_{d-1} - u_1 u_{r+1} Q_d  =>  Q_d = (Q_{d-1} - S_d) / (u_1 u_{r+1}).
// Slice d is exact to budget - 2(d+1); the reassembled quotient is exact for
// total degree <= D whenever budget >= 2D + 2.
inline series divide_by_u_binomial(const series& S, int r, int budget) {
  const context_ptr& c = S.ctx();
  const std::string top = u_name(r + 2), mid = u_name(r + 1);
  series acc = series::zero(c);
  series prev = series::zero(c);
  for (int d = 0; 2 * d + 2 <= budget; ++d) {
    series sd = S.coeff_of({{top, d}});
    series numd = (prev - sd).truncated_to_u_total(budget - 2 * d);
    series qd = numd.monomial_div("u1", 1).monomial_div(mid, 1);
    acc += qd.monomial_mul(top, d);
    prev = qd;
  }
  return acc;
}

// Closed form of Psi_0^0 (the t = 0 face): a shift-0 family with the single
// composite lower parameter b = q(1 + (1-q)u_1), the j = 0 term subtracted
// back off, and a final exact division by u_{r+2} - u_1 u_{r+1}.  The result
// is exact for total u-degree <= D whenever u_total_cap >= 2D + 2r + 1.
inline series psi0_t0_closed_form(const context_ptr& c, int r) {
  if (r < 1) throw config_error("psi0_t0_closed_form: r must be >= 1");
  if (c->laurent_floor() != 0)
    throw config_error("psi0_t0_closed_form: expects a floor-0 context");
  const int ord = c->q_order();
  const int cap = c->u_total_cap();
  series one = series::one(c);
  series u1 = series::var(c, "u1");
  series unit = one_plus_q1_var(c, "u1");
  series inv_unit = unit.inverse();

  std::vector<series> xs = x_from_u(c, r);
  sym_family A = sym_family::make(0, alpha_esyms(xs, series::zero(c), r));
  series bstar = unit.mul_qpoly(qpoly::monomial(1));  // q(1 + (1-q)u_1)
  detail_gf::series_table invb([&](int m) {
    return (one - bstar.mul_qpoly(qpoly::monomial(m))).inverse();
  });
  detail_gf::series_table G(
      [&](int m) { return A.bracket(m) * bstar * invb(m); });

  std::vector<series> ch = c_hat(c, r);
  series base2 = u1.pow(r + 1) * series::var(c, "u2") * inv_unit * inv_unit;
  series bq = bstar.mul_qpoly(geom_inverse(1, ord));  // b/(1-q)

  series total = series::zero(c);
  series ahat0 = series::zero(c);
  for (int j = 0; j <= r - 1; ++j) {
    series ahat = series::zero(c);
    for (int m = j; m <= r - 1; ++m)
      ahat += ch[static_cast<size_t>(m)].mul_qpoly(q_stirling2(m, j));
    ahat += base2.mul_qpoly(q_stirling2(r - 1, j));
    if (j == 0) ahat0 = ahat;

    series bs = bq.pow(j);
    for (int m = 0; m < j; ++m) bs = bs * A.bracket(m);
    qpoly scal = qpoly::constant(rational(1));
    for (int rep = 0; rep < r - 1; ++rep)
      for (int i = 1; i <= j; ++i) scal = qpoly::mul(scal, geom_inverse(i, ord), ord);
    bs = bs.mul_qpoly(scal) * q_pochhammer(bstar, j).inverse();

    series phi = phi_sum(
        c,
        [&](int n, const series& T) {
          qpoly sc = geom_inverse(n + 1, ord);
          for (int rep = 0; rep < r - 1; ++rep)
            sc = qpoly::mul(sc, geom_inverse(j + n + 1, ord), ord);
          return (T * G(j + n)).mul_qpoly(sc);
        },
        c->grade_bound() + 2);
    total += ahat * bs * phi;
  }
  total -= ahat0;

  series num = (unit * unit) * total;
  num = num.truncated_to_u_total(cap - r + 1).monomial_div("u1", r);
  return divide_by_u_binomial(num, r, cap - 2 * r + 1);
}

// Both sides of the weight/depth sum formula as polynomials in t.  LHS: the
// sum of the interpolated values over all admissible indices of weight k and
// depth n.  RHS:
//   1/(k-1) sum_{0<=l<=j<=n-1} C(k-1,j) C(j,l) (k-1-l) t^j (1-t)^{n-1-j}
//                              (1-q)^l  zeta_q(k-l).
inline tpoly sum_formula_lhs(int k, int n, int N) {
  tpoly out;
  for (const index& idx : enumerate_I(k, n, 0, {})) tpoly_add(out, zeta_t_q(idx, N));
  tpoly_trim(out);
  return out;
}
inline tpoly sum_formula_rhs(int k, int n, int N) {
  if (!(k > n && n >= 1)) throw domain_error("sum_formula_rhs: needs k > n >= 1");
  tpoly out(static_cast<size_t>(n));
  qpoly q1 = detail_hg::one_minus_q();
  for (int j = 0; j <= n - 1; ++j) {
    for (int l = 0; l <= j; ++l) {
      rational coef = binomial(k - 1, j) * binomial(j, l) * rational(k - 1 - l, k - 1);
      if (coef.is_zero()) continue;
      qpoly term = zeta_q({k - l}, N);
      for (int i = 0; i < l; ++i) term = qpoly::mul(term, q1, N);
      term.scale(coef);
      for (int s = 0; s <= n - 1 - j; ++s) {
        qpoly piece = term;
        piece.scale(binomial(n - 1 - j, s) * rational(s % 2 == 0 ? 1 : -1));
        out[static_cast<size_t>(j + s)] += piece;
      }
    }
  }
  tpoly_trim(out);
  return out;
}

// Power sums of a quadratic system from its elementary symmetric functions:
// p_1 = e_1, p_2 = e_1 p_1 - 2 e_2, p_k = e_1 p_{k-1} - e_2 p_{k-2}.
inline std::vector<series> newton_power_sums(const series& e1, const series& e2, int K) {
  std::vector<series> p(static_cast<size_t>(K) + 1, series::zero(e1.ctx()));
  if (K >= 1) p[1] = e1;
  if (K >= 2) p[2] = e1 * p[1] - e2.scaled(rational(2));
  for (int k = 3; k <= K; ++k)
    p[static_cast<size_t>(k)] =
        e1 * p[static_cast<size_t>(k) - 1] - e2 * p[static_cast<size_t>(k) - 2];
  return p;
}

// Full-height generating function over a (u_1, u_3, t) box: LHS sums the
// interpolated values of all-parts->=2 indices against u_1^{k-2l} u_3^l; RHS
// exponentiates power-sum differences of two quadratic systems against the
// kernel c_K = (1/K) sum_{n=2}^{K} (q-1)^{K-n} zeta_q(n).
inline series fullheight_lhs(const context_ptr& c) {
  const int N = c->q_order();
  std::vector<std::pair<std::uint64_t, rational>> terms;
  for_each_index(1, c->u_total_cap(), 2, [&](const index& k) {
    for (int p : k)
      if (p < 2) return;
    int wt = weight(k), dep = depth(k);
    add_tpoly_terms(terms, c, zeta_t_q(k, N), {wt - 2 * dep, dep});
  });
  return series::from_terms(c, std::move(terms));
}
inline series fullheight_rhs(const context_ptr& c) {
  const int N = c->q_order();
  const int K = 2 * c->u_total_cap();
  series u1 = series::var(c, "u1");
  series u3 = series::var(c, "u3");
  series t = t_series(c);
  series omt = series::one(c) - t;
  qpoly q1 = detail_hg::one_minus_q();

  series ez1 = u1 - (omt * u3).mul_qpoly(q1);
  series ez2 = omt * u3;
  series ew1 = u1 + (t * u3).mul_qpoly(q1);
  series ew2 = -(t * u3);
  std::vector<series> pz = newton_power_sums(ez1, ez2, K);
  std::vector<series> pw = newton_power_sums(ew1, ew2, K);

  std::vector<qpoly> qm1p(static_cast<size_t>(K) - 1);  // (q-1)^e
  qm1p[0] = qpoly::constant(rational(1));
  for (int e = 1; e <= K - 2; ++e)
    qm1p[static_cast<size_t>(e)] =
        qpoly::mul(qm1p[static_cast<size_t>(e) - 1], detail_gf::q_minus_one_pow(1, N), N);

  series arg = series::zero(c);
  for (int k = 2; k <= K; ++k) {
    qpoly ck;
    for (int n = 2; n <= k; ++n)
      ck += qpoly::mul(zeta_q({n}, N), qm1p[static_cast<size_t>(k - n)], N);
    ck.scale(rational(1, k));
    arg += (pw[static_cast<size_t>(k)] - pz[static_cast<size_t>(k)]).mul_qpoly(ck);
  }
  return arg.exp() - series::one(c);
}

// Closed forms of the free-coefficient generating functions Phi_j^t over a
// free (x_1..x_{r+2}, t) context, -1 <= j <= r-1: as a z-series (context with
// z) and evaluated at z = q (context without z).  Shared skeleton:
//   Phi_j^t = (1/c) sum_{i=0}^{r-1-j} A_i^{(j)} B_i z^{i+1} phi_i + [j = -1],
//   A_i^{(j)} = sum_{m=i}^{r-1-j} (x_{r+2-m} - x_1 x_{r+1-m}) S_q(m+1, i+1)
//               + x_1 x_{j+2} S_q(r-j, i+1)          (x_{j+2} -> x_1 at j = -1),
// with every phi_i stream folded through the same bracket-ratio cache.
namespace detail_gf {
inline series phi_closed_common(const context_ptr& c, int r, int j, bool at_q) {
  if (j < -1 || j > r - 1) throw config_error("phi_closed: j out of range");
  const int ord = c->q_order();
  std::vector<series> xs = free_x_vars(c, r);
  series t = t_series(c);
  sym_family A = sym_family::make(1, alpha_esyms(xs, t, r));
  sym_family B = sym_family::make(2, beta_esyms(xs, t, r));
  series_table F([&](int m) { return A.bracket(m) * B.bracket(m).inverse(); });
  series inv_c = c_constant_from_xs(xs, t, r).inverse();

  series total = series::zero(c);
  series bprefix = series::one(c);  // prod_{m<i} F(m)
  qpoly qints = qpoly::constant(rational(1));  // [1][2]...[i]
  for (int i = 0; i <= r - 1 - j; ++i) {
    if (i > 0) {
      bprefix = bprefix * F(i - 1);
      qints = qpoly::mul(qints, q_int(i), ord);
    }
    series at = series::zero(c);
    for (int m = i; m <= r - 1 - j; ++m)
      at += (xs[static_cast<size_t>(r + 2 - m)] - xs[1] * xs[static_cast<size_t>(r + 1 - m)])
                .mul_qpoly(q_stirling2(m + 1, i + 1));
    const series& xj2 = (j == -1) ? xs[1] : xs[static_cast<size_t>(j) + 2];
    at += (xs[1] * xj2).mul_qpoly(q_stirling2(r - j, i + 1));

    series bi = bprefix.mul_qpoly(qints);
    series phi;
    if (at_q) {
      phi = phi_sum(
          c,
          [&](int n, const series& T) {
            qpoly sc = qpoly::mul(
                qpoly::monomial(1),
                qpoly::mul(detail_hg::one_minus_qpow(i + 1 + n, ord),
                           geom_inverse(n + 1, ord), ord),
                ord);
            return (T * F(i + n)).mul_qpoly(sc);
          },
          c->grade_bound() + 2);
      total += (at * bi * phi).mul_qpoly(qpoly::monomial(i + 1));
    } else {
      phi = phi_sum(
          c,
          [&](int n, const series& T) {
            qpoly sc = qpoly::mul(detail_hg::one_minus_qpow(i + 1 + n, ord),
                                  geom_inverse(n + 1, ord), ord);
            return (T * F(i + n)).monomial_mul("z", 1).mul_qpoly(sc);
          },
          c->z_order() + 2);
      total += (at * bi * phi).monomial_mul("z", i + 1);
    }
  }
  total = inv_c * total;
  if (j == -1) total += series::one(c);
  return total;
}
}  // namespace detail_gf

inline series phi_closed_z(const context_ptr& c, int r, int j) {
  if (!c->has_z()) throw config_error("phi_closed_z: context needs z");
  return detail_gf::phi_closed_common(c, r, j, false);
}
inline series phi_closed_at_q(const context_ptr& c, int r, int j) {
  return detail_gf::phi_closed_common(c, r, j, true);
}

}  // namespace qzv
