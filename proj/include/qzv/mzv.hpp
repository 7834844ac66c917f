#pragma once

// Brute-force evaluators for the q-zeta values and q-polylogarithms, their
// t-interpolations, and the generating functions built from them. Everything
// here is computed straight from the defining sums, with truncation bounds
// made explicit; these are the reference values the closed forms are checked
// against.
//
// Conventions:
//  - zeta_q(k):      sum over m_1 > ... > m_l >= 1 of
//                    q^{sum (k_i - 1) m_i} / prod [m_i]^{k_i}, k_1 >= 2.
//  - zeta_star_q(k): same with weak inequalities m_1 >= ... >= m_l >= 1.
//  - zeta_t_q(k):    sum over the 3-way box fillings of k (separator ",",
//                    merge "+", merge-with-drop "-1+") of
//                    (1-q)^{#drops} zeta_q(p) t^{#merges}.
//  - li_q(k; z):     sum over m_1 > ... > m_l >= 1 of z^{m_1} / prod
//                    [m_i]^{k_i}; any k_1 >= 1.
//  - li_t_q(k; z):   sum over the 2-way fillings ("," or "+") of
//                    li_q(p; z) t^{#merges}; no (1-q) weights.
//
// Truncation soundness: a term with q-valuation above the q-order, or
// z-exponent above the z-order, contributes nothing; the recursions prune on
// exactly those bounds, so results are exact truncations.

#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "qzv/errors.hpp"
#include "qzv/indices.hpp"
#include "qzv/qkit.hpp"
#include "qzv/qpoly.hpp"
#include "qzv/series.hpp"

namespace qzv {

// Polynomial in t with q-polynomial coefficients; index = t-exponent.
using tpoly = std::vector<qpoly>;

inline void tpoly_add(tpoly& a, const tpoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}

inline void tpoly_trim(tpoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

inline qpoly tpoly_eval(const tpoly& a, const rational& t, int ord) {
  qpoly r;
  rational p(1);
  for (size_t i = 0; i < a.size(); ++i) {
    qpoly s = a[i];
    s.scale(p);
    r += s.truncated(ord);
    p *= t;
  }
  return r;
}

namespace detail_mzv {

// Shared product recursion for the strict/weak nested sums. Visits every
// tuple m_1 (rel) m_2 (rel) ... >= 1 with accumulated q-valuation <= N and
// adds q^{qv} * prod 1/[m_i]^{k_i} to `out`.
inline void nested_sum(const index& k, int N, bool strict, qpoly& out) {
  size_t l = k.size();
  std::vector<std::vector<qpoly>> inv_pow(static_cast<size_t>(N) + 1);
  auto inv_p = [&](int m, int e) -> const qpoly& {
    auto& v = inv_pow[static_cast<size_t>(m)];
    if (v.empty()) v.push_back(qpoly::constant(rational(1)));
    while (static_cast<int>(v.size()) <= e)
      v.push_back(qpoly::mul(v.back(), q_int_inverse(m, N), N));
    return v[static_cast<size_t>(e)];
  };
  std::function<void(size_t, int, int, const qpoly&)> rec = [&](size_t pos, int m_prev, int qv,
                                                                const qpoly& prod) {
    if (pos == l) {
      qpoly t = qpoly::mul(prod, qpoly::monomial(qv), N);
      out += t;
      return;
    }
    int hi = (pos == 0) ? N : (strict ? m_prev - 1 : m_prev);
    for (int m = 1; m <= hi; ++m) {
      int qv2 = qv + (k[pos] - 1) * m;
      if (qv2 > N) break;  // (k_i - 1) m only grows with m
      rec(pos + 1, m, qv2, qpoly::mul(prod, inv_p(m, k[pos]), N));
    }
  };
  rec(0, 0, 0, qpoly::constant(rational(1)));
}

struct key2 {
  index k;
  int N;
  bool operator<(const key2& o) const { return std::tie(k, N) < std::tie(o.k, o.N); }
};

struct key3 {
  index k;
  int M;
  int N;
  bool operator<(const key3& o) const {
    return std::tie(k, M, N) < std::tie(o.k, o.M, o.N);
  }
};

}  // namespace detail_mzv

// zeta_q(k) truncated at q-order N. Requires an admissible index (k_1 >= 2).
inline qpoly zeta_q(const index& k, int N) {
  if (!admissible(k)) throw domain_error("zeta_q: index must have first part >= 2");
  static std::mutex mu;
  static std::map<detail_mzv::key2, qpoly> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, fresh] = cache.try_emplace({k, N});
  if (fresh) detail_mzv::nested_sum(k, N, /*strict=*/true, it->second);
  return it->second;
}

inline qpoly zeta_star_q(const index& k, int N) {
  if (!admissible(k)) throw domain_error("zeta_star_q: index must have first part >= 2");
  static std::mutex mu;
  static std::map<detail_mzv::key2, qpoly> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, fresh] = cache.try_emplace({k, N});
  if (fresh) detail_mzv::nested_sum(k, N, /*strict=*/false, it->second);
  return it->second;
}

// zeta_t_q(k) truncated at q-order N, as a polynomial in t.
inline tpoly zeta_t_q(const index& k, int N) {
  if (!admissible(k)) throw domain_error("zeta_t_q: index must have first part >= 2");
  static std::mutex mu;
  static std::map<detail_mzv::key2, tpoly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({k, N});
    if (it != cache.end()) return it->second;
  }
  tpoly out;
  size_t l = k.size();
  index p;
  // gap = index of the next box; cur = part being grown; drops = #"-1+".
  std::function<void(size_t, int, int)> rec = [&](size_t gap, int cur, int drops) {
    if (gap == l) {
      p.push_back(cur);
      structural_check(admissible(p), "box filling produced a non-admissible index");
      int merges = static_cast<int>(l - p.size());
      qpoly v = zeta_q(p, N);
      for (int d = 0; d < drops; ++d)
        v = qpoly::mul(v, qpoly::constant(rational(1)) - qpoly::monomial(1), N);
      if (static_cast<int>(out.size()) <= merges) out.resize(static_cast<size_t>(merges) + 1);
      out[static_cast<size_t>(merges)] += v;
      p.pop_back();
      return;
    }
    // ","
    p.push_back(cur);
    rec(gap + 1, k[gap], drops);
    p.pop_back();
    // "+"
    rec(gap + 1, cur + k[gap], drops);
    // "-1+"
    rec(gap + 1, cur + k[gap] - 1, drops + 1);
  };
  rec(1, k[0], 0);
  tpoly_trim(out);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(detail_mzv::key2{k, N}, std::move(out)).first->second;
}

// Weak-inequality t-candidate: sum over m_1 >= ... >= m_l >= 1 of
// q^{sum (k_i-1) m_i} / prod [m_i]^{k_i} * t^{#equalities}. Experimental
// cross-check only; it is not part of any closed-form pipeline.
inline tpoly zeta_t_direct_candidate(const index& k, int N) {
  if (!admissible(k)) throw domain_error("zeta_t_direct_candidate: non-admissible index");
  tpoly out;
  size_t l = k.size();
  std::function<void(size_t, int, int, int, const qpoly&)> rec =
      [&](size_t pos, int m_prev, int qv, int eqs, const qpoly& prod) {
        if (pos == l) {
          if (static_cast<int>(out.size()) <= eqs) out.resize(static_cast<size_t>(eqs) + 1);
          out[static_cast<size_t>(eqs)] += qpoly::mul(prod, qpoly::monomial(qv), N);
          return;
        }
        int hi = (pos == 0) ? N : m_prev;
        for (int m = 1; m <= hi; ++m) {
          int qv2 = qv + (k[pos] - 1) * m;
          if (qv2 > N) break;
          qpoly nxt = prod;
          for (int e = 0; e < k[pos]; ++e) nxt = qpoly::mul(nxt, q_int_inverse(m, N), N);
          rec(pos + 1, m, qv2, eqs + (pos > 0 && m == m_prev ? 1 : 0), nxt);
        }
      };
  rec(0, 0, 0, 0, qpoly::constant(rational(1)));
  tpoly_trim(out);
  return out;
}

// li_q(k; z): coefficients by z-exponent (index m_1 <= M), each a
// q-polynomial truncated at N. Defined for any nonempty index.
inline std::vector<qpoly> li_q(const index& k, int M, int N) {
  if (k.empty() || k[0] < 1) throw domain_error("li_q: index must be nonempty with parts >= 1");
  static std::mutex mu;
  static std::map<detail_mzv::key3, std::vector<qpoly>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({k, M, N});
    if (it != cache.end()) return it->second;
  }
  std::vector<qpoly> out(static_cast<size_t>(M) + 1);
  size_t l = k.size();
  // No q-valuation pruning here: 1/[m]^k has a nonzero constant term, so
  // every tuple contributes at q-order 0. Only the z-exponent cap and the
  // strict nesting bound the recursion.
  std::function<void(size_t, int, int, const qpoly&)> rec =
      [&](size_t pos, int m_prev, int m1, const qpoly& prod) {
        if (pos == l) {
          out[static_cast<size_t>(m1)] += prod;
          return;
        }
        int hi = (pos == 0) ? M : m_prev - 1;
        for (int m = 1; m <= hi; ++m) {
          qpoly nxt = prod;
          for (int e = 0; e < k[pos]; ++e) nxt = qpoly::mul(nxt, q_int_inverse(m, N), N);
          rec(pos + 1, m, pos == 0 ? m : m1, nxt);
        }
      };
  rec(0, 0, 0, qpoly::constant(rational(1)));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(detail_mzv::key3{k, M, N}, std::move(out)).first->second;
}

// li_t_q(k; z): z-coefficients, each a polynomial in t. 2-way fillings.
inline std::vector<tpoly> li_t_q(const index& k, int M, int N) {
  if (k.empty() || k[0] < 1)
    throw domain_error("li_t_q: index must be nonempty with parts >= 1");
  std::vector<tpoly> out(static_cast<size_t>(M) + 1);
  size_t l = k.size();
  index p;
  std::function<void(size_t, int)> rec = [&](size_t gap, int cur) {
    if (gap == l) {
      p.push_back(cur);
      int merges = static_cast<int>(l - p.size());
      std::vector<qpoly> v = li_q(p, M, N);
      for (int m = 0; m <= M; ++m) {
        if (v[static_cast<size_t>(m)].is_zero()) continue;
        auto& tp = out[static_cast<size_t>(m)];
        if (static_cast<int>(tp.size()) <= merges) tp.resize(static_cast<size_t>(merges) + 1);
        tp[static_cast<size_t>(merges)] += v[static_cast<size_t>(m)];
      }
      p.pop_back();
      return;
    }
    p.push_back(cur);
    rec(gap + 1, k[gap]);
    p.pop_back();
    rec(gap + 1, cur + k[gap]);
  };
  rec(1, k[0]);
  return out;
}

// li_t at z = q: substitute z^m -> q^m (valid since every z-coefficient has
// its own exact truncation and m <= N terms are the only contributors).
inline tpoly li_t_at_q(const index& k, int N) {
  std::vector<tpoly> lz = li_t_q(k, N, N);
  tpoly out;
  for (int m = 1; m <= N; ++m) {
    const tpoly& tp = lz[static_cast<size_t>(m)];
    for (size_t j = 0; j < tp.size(); ++j) {
      if (tp[j].is_zero()) continue;
      if (out.size() <= j) out.resize(j + 1);
      out[j] += qpoly::mul(tp[j], qpoly::monomial(m), N);
    }
  }
  tpoly_trim(out);
  return out;
}

// Right-hand side of the Li-at-q reduction: a binomially weighted sum of
// zeta_t values over componentwise-smaller indices,
//   sum_{a_1=2}^{k_1} ... sum_{a_l=1}^{k_l} C(k_1-2, a_1-2)
//     prod_{j>=2} C(k_j-1, a_j-1) (1-q)^{sum (k_i - a_i)} zeta_t_q(a).
inline tpoly li_at_q_binomial_rhs(const index& k, int N) {
  if (!admissible(k)) throw domain_error("li_at_q_binomial_rhs: non-admissible index");
  tpoly out;
  size_t l = k.size();
  index a(l, 0);
  qpoly one_minus_q = qpoly::constant(rational(1)) - qpoly::monomial(1);
  std::function<void(size_t, rational, int)> rec = [&](size_t pos, rational cf, int dropped) {
    if (pos == l) {
      tpoly zt = zeta_t_q(a, N);
      qpoly w = qpoly::constant(cf);
      for (int d = 0; d < dropped; ++d) w = qpoly::mul(w, one_minus_q, N);
      for (size_t j = 0; j < zt.size(); ++j) {
        if (zt[j].is_zero()) continue;
        if (out.size() <= j) out.resize(j + 1);
        out[j] += qpoly::mul(w, zt[j], N);
      }
      return;
    }
    int lo = pos == 0 ? 2 : 1;
    for (int v = lo; v <= k[pos]; ++v) {
      a[pos] = v;
      rational c = pos == 0 ? binomial(k[0] - 2, v - 2) : binomial(k[pos] - 1, v - 1);
      if (!c.is_zero()) rec(pos + 1, cf * c, dropped + (k[pos] - v));
    }
  };
  rec(0, rational(1), 0);
  tpoly_trim(out);
  return out;
}

// ---- injection into series contexts -------------------------------------

// Adds tp * t^{..} * monomial(uexps) to `terms`, where uexps are exponents
// for the context's u-variables in order (z exponent given separately).
inline void add_tpoly_terms(std::vector<std::pair<std::uint64_t, rational>>& terms,
                            const context_ptr& c, const tpoly& tp,
                            const std::vector<int>& uexps, int zexp = 0) {
  int N = c->q_order();
  std::vector<int> e(c->fields().size(), 0);
  for (int i = 0; i < c->num_u(); ++i)
    e[static_cast<size_t>(c->u_begin() + i)] = uexps[static_cast<size_t>(i)];
  if (zexp != 0) {
    if (!c->has_z()) throw config_error("add_tpoly_terms: context has no z");
    e[static_cast<size_t>(c->z_index())] = zexp;
  }
  auto add_qpoly = [&](const qpoly& p) {
    for (int n = 0; n <= p.degree() && n <= N; ++n) {
      if (p.coeff(n).is_zero()) continue;
      e[static_cast<size_t>(c->q_index())] = n;
      terms.emplace_back(c->pack(e), p.coeff(n));
    }
  };
  if (c->has_t()) {
    for (size_t j = 0; j < tp.size(); ++j) {
      if (tp[j].is_zero()) continue;
      e[static_cast<size_t>(c->t_index())] = static_cast<int>(j);
      add_qpoly(tp[j]);
    }
  } else if (c->spec().t_is_value) {
    add_qpoly(tpoly_eval(tp, c->spec().t_value, N));
  } else {
    if (tp.size() > 1)
      throw config_error("add_tpoly_terms: t-dependent value in a t-free context");
    if (!tp.empty()) add_qpoly(tp[0]);
  }
}

inline series series_from_tpoly(const context_ptr& c, const tpoly& tp,
                                const std::vector<int>& uexps = {}, int zexp = 0) {
  std::vector<int> ue = uexps;
  ue.resize(static_cast<size_t>(c->num_u()), 0);
  std::vector<std::pair<std::uint64_t, rational>> terms;
  add_tpoly_terms(terms, c, tp, ue, zexp);
  return series::from_terms(c, std::move(terms));
}

inline series series_from_qpoly_z(const context_ptr& c, const std::vector<qpoly>& zc) {
  std::vector<std::pair<std::uint64_t, rational>> terms;
  std::vector<int> ue(static_cast<size_t>(c->num_u()), 0);
  for (size_t m = 0; m < zc.size(); ++m) {
    if (zc[m].is_zero()) continue;
    tpoly tp{zc[m]};
    add_tpoly_terms(terms, c, tp, ue, static_cast<int>(m));
  }
  return series::from_terms(c, std::move(terms));
}

// ---- brute-force generating functions -----------------------------------

// Psi_0 over a u-context: sum over admissible indices whose monomial fits
// the context's total-degree cap of zeta_t_q(k) * u-monomial(k).
inline series brute_psi0(const context_ptr& c, int r) {
  if (c->num_u() != r + 2) throw config_error("brute_psi0: context needs r+2 u-variables");
  int N = c->q_order();
  std::vector<std::pair<std::uint64_t, rational>> terms;
  for_each_index(r, c->u_total_cap(), 2, [&](const index& k) {
    add_tpoly_terms(terms, c, zeta_t_q(k, N), index_monomial(k, r));
  });
  return series::from_terms(c, std::move(terms));
}

// Phi_j over an x-context with z: sum over indices with first part >= j+2 of
// li_t_q(k; z) * x-monomial(k), plus the constant 1 when j = -1.
inline series brute_phi_j_z(const context_ptr& c, int r, int j) {
  if (c->num_u() != r + 2) throw config_error("brute_phi_j_z: context needs r+2 x-variables");
  if (!c->has_z()) throw config_error("brute_phi_j_z: context needs z");
  int N = c->q_order(), M = c->z_order();
  std::vector<std::pair<std::uint64_t, rational>> terms;
  int min_first = j + 2 < 1 ? 1 : j + 2;
  for_each_index(r, c->u_total_cap(), min_first, [&](const index& k) {
    std::vector<tpoly> lz = li_t_q(k, M, N);
    std::vector<int> x = index_monomial(k, r);
    for (int m = 0; m <= M; ++m)
      if (!lz[static_cast<size_t>(m)].empty())
        add_tpoly_terms(terms, c, lz[static_cast<size_t>(m)], x, m);
  });
  series s = series::from_terms(c, std::move(terms));
  if (j == -1) s += series::one(c);
  return s;
}

// Phi_j at z = q over an x-context without z.
inline series brute_phi_j_at_q(const context_ptr& c, int r, int j) {
  if (c->num_u() != r + 2)
    throw config_error("brute_phi_j_at_q: context needs r+2 x-variables");
  int N = c->q_order();
  std::vector<std::pair<std::uint64_t, rational>> terms;
  int min_first = j + 2 < 1 ? 1 : j + 2;
  for_each_index(r, c->u_total_cap(), min_first, [&](const index& k) {
    add_tpoly_terms(terms, c, li_t_at_q(k, N), index_monomial(k, r));
  });
  series s = series::from_terms(c, std::move(terms));
  if (j == -1) s += series::one(c);
  return s;
}

// G_j of a signature (wt, dep, heights) as a z-series in a (q, t, z)
// context: sum of li_t_q over the indices of the slice. The empty signature
// with j = -1 contributes the constant 1.
inline series brute_G(const context_ptr& c, int wt, int dep, int j, const std::vector<int>& h) {
  if (!c->has_z()) throw config_error("brute_G: context needs z");
  int N = c->q_order(), M = c->z_order();
  std::vector<std::pair<std::uint64_t, rational>> terms;
  std::vector<int> ue(static_cast<size_t>(c->num_u()), 0);
  if (wt == 0 && dep == 0 && j <= -1) return series::one(c);
  for (const index& k : enumerate_I(wt, dep, j, h)) {
    std::vector<tpoly> lz = li_t_q(k, M, N);
    for (int m = 0; m <= M; ++m)
      if (!lz[static_cast<size_t>(m)].empty())
        add_tpoly_terms(terms, c, lz[static_cast<size_t>(m)], ue, m);
  }
  return series::from_terms(c, std::move(terms));
}

}  // namespace qzv
