#pragma once

// Named verification checks behind the CLI. Each check builds both sides of
// one family of identities at pinned truncation parameters, compares exactly
// (tolerance zero) over the exact-rational coefficient ring, and reports the
// first differing monomial as a witness on failure. Wall-clock time is kept
// out of the reports so that repeated runs are byte-identical.

#include <atomic>
#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qzv/diffops.hpp"
#include "qzv/genfun.hpp"
#include "qzv/hypergeom.hpp"
#include "qzv/indices.hpp"
#include "qzv/mzv.hpp"
#include "qzv/qkit.hpp"
#include "qzv/series.hpp"

namespace qzv {

struct check_params {
  int r = 1;
  int u_deg = 4;      // final comparison box: total u-degree cap
  int q_ord = 8;
  int z_ord = 8;
  bool t_symbolic = true;
  rational t_value{0};
  int max_weight = 6;
};

struct check_report {
  std::string name;
  std::string params;
  std::string status = "pass";  // pass | fail | error
  std::string detail;           // which comparison failed, or the error text
  std::string witness_monomial;
  std::string lhs_coeff, rhs_coeff;
  double seconds = 0.0;  // reported on stderr only, never in stdout output
};

inline std::string params_string(const check_params& p) {
  std::ostringstream os;
  os << "r=" << p.r << " u-deg=" << p.u_deg << " q-ord=" << p.q_ord
     << " z-ord=" << p.z_ord << " t=" << (p.t_symbolic ? std::string("symbolic") : p.t_value.to_string())
     << " max-weight=" << p.max_weight;
  return os.str();
}

namespace detail_ck {

// Exact comparison against a report: keeps the first witness, later expects
// become no-ops once the report has failed.
class comparer {
 public:
  explicit comparer(check_report& rep) : rep_(rep) {}
  bool ok() const { return rep_.status == "pass"; }
  void expect(const series& lhs, const series& rhs, const std::string& what) {
    if (!ok()) return;
    series::mismatch mm = series::first_mismatch(lhs, rhs);
    if (mm.equal) return;
    rep_.status = "fail";
    rep_.detail = what;
    rep_.witness_monomial = mm.monomial;
    rep_.lhs_coeff = mm.lhs.to_string();
    rep_.rhs_coeff = mm.rhs.to_string();
  }
  void expect_qpoly(const context_ptr& qc, const qpoly& l, const qpoly& r,
                    const std::string& what) {
    expect(series::from_qpoly(qc, l), series::from_qpoly(qc, r), what);
  }

 private:
  check_report& rep_;
};

inline void apply_t(context_spec& s, const check_params& p) {
  if (p.t_symbolic) {
    s.has_t = true;
  } else {
    s.t_is_value = true;
    s.t_value = p.t_value;
  }
}

inline context_ptr u_ctx(int r, int cap, int N, const check_params& p) {
  context_spec s;
  s.q_order = N;
  apply_t(s, p);
  for (int i = 1; i <= r + 2; ++i) s.u_names.push_back(u_name(i));
  s.u_total_cap = cap;
  return context::make(std::move(s));
}

inline context_ptr u_ctx_t0(int r, int cap, int N) {
  context_spec s;
  s.q_order = N;
  s.t_is_value = true;
  s.t_value = rational(0);
  for (int i = 1; i <= r + 2; ++i) s.u_names.push_back(u_name(i));
  s.u_total_cap = cap;
  return context::make(std::move(s));
}

inline context_ptr x_ctx(int r, int cap, int N, int z_ord, const check_params& p) {
  context_spec s;
  s.q_order = N;
  apply_t(s, p);
  for (int i = 1; i <= r + 2; ++i) s.u_names.push_back(x_name(i));
  s.u_total_cap = cap;
  s.z_order = z_ord;  // -1: no z
  return context::make(std::move(s));
}

inline context_ptr scalar_ctx(int N, const check_params& p) {
  context_spec s;
  s.q_order = N;
  apply_t(s, p);
  return context::make(std::move(s));
}

inline context_ptr q_only_ctx(int N) {
  context_spec s;
  s.q_order = N;
  return context::make(std::move(s));
}

inline context_ptr tz_ctx(int N, int M, const check_params& p) {
  context_spec s;
  s.q_order = N;
  apply_t(s, p);
  s.z_order = M;
  return context::make(std::move(s));
}

// The interpolated polylog of one index as a z-series over a (q, t, z)
// context.
inline series li_t_series(const context_ptr& c, const index& k) {
  std::vector<tpoly> lz = li_t_q(k, c->z_order(), c->q_order());
  std::vector<std::pair<std::uint64_t, rational>> terms;
  for (size_t m = 0; m < lz.size(); ++m)
    if (!lz[m].empty()) add_tpoly_terms(terms, c, lz[m], {}, static_cast<int>(m));
  return series::from_terms(c, std::move(terms));
}

// All compositions of weight 1..wt_max (first part >= min_first).
inline std::vector<index> compositions_up_to(int wt_max, int min_first) {
  std::vector<index> out;
  index cur;
  std::function<void(int, bool)> rec = [&](int left, bool first) {
    if (!cur.empty()) out.push_back(cur);
    int lo = first ? min_first : 1;
    for (int p = lo; p <= left; ++p) {
      cur.push_back(p);
      rec(left - p, false);
      cur.pop_back();
    }
  };
  rec(wt_max, true);
  std::sort(out.begin(), out.end(), [](const index& a, const index& b) {
    int wa = weight(a), wb = weight(b);
    if (wa != wb) return wa < wb;
    return a < b;
  });
  return out;
}

}  // namespace detail_ck

// --- individual checks -----------------------------------------------------

// Generic closed form vs the brute-force triple sum over indices.
inline void run_main(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  const int r = p.r, D = p.u_deg, N = p.q_ord;
  context_ptr work = detail_ck::u_ctx(r, D + 2 * r - 1, N, p);
  context_ptr box = detail_ck::u_ctx(r, D, N, p);
  series closed = psi0_closed_form(work, r).truncated_to_u_total(D).transported(box);
  series brute = brute_psi0(box, r);
  cmp.expect(closed, brute, "closed form vs direct sum over indices");
}

// Explicit r = 1 closed form vs both the direct sum and the generic assembly.
inline void run_cor_r1(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  const int D = p.u_deg, N = p.q_ord;
  context_ptr box = detail_ck::u_ctx(1, D, N, p);
  context_ptr work = detail_ck::u_ctx(1, D + 1, N, p);
  series explicit_r1 = psi0_closed_form_r1(box);
  cmp.expect(explicit_r1, brute_psi0(box, 1), "explicit r=1 form vs direct sum");
  series generic = psi0_closed_form(work, 1).truncated_to_u_total(D).transported(box);
  cmp.expect(explicit_r1, generic, "explicit r=1 form vs generic assembly");
}

// Weight/depth sum formula, plus its t = 0 and t = 1 faces.
inline void run_sum_formula(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  const int N = p.q_ord;
  context_ptr tc = detail_ck::scalar_ctx(N, p);
  context_ptr qc = detail_ck::q_only_ctx(N);
  qpoly one_minus_q = detail_hg::one_minus_q();
  for (int k = 2; k <= p.max_weight && cmp.ok(); ++k) {
    for (int n = 1; n <= k - 1 && cmp.ok(); ++n) {
      std::string at = " at weight " + std::to_string(k) + " depth " + std::to_string(n);
      tpoly lhs = sum_formula_lhs(k, n, N);
      tpoly rhs = sum_formula_rhs(k, n, N);
      cmp.expect(series_from_tpoly(tc, lhs), series_from_tpoly(tc, rhs),
                 "sum over admissible indices vs closed form" + at);
      if (!cmp.ok()) break;
      // t = 0 face: the single zeta value.
      cmp.expect_qpoly(qc, tpoly_eval(lhs, rational(0), N), zeta_q({k}, N),
                       "t=0 face vs single zeta value" + at);
      // t = 1 face: the weak-inequality sum and its closed form.
      qpoly star;
      for (const index& idx : enumerate_I(k, n, 0, {})) star += zeta_star_q(idx, N);
      qpoly at1 = tpoly_eval(lhs, rational(1), N);
      cmp.expect_qpoly(qc, at1, star, "t=1 face vs weak-inequality sum" + at);
      qpoly closed1;
      for (int l = 0; l <= n - 1; ++l) {
        qpoly term = zeta_q({k - l}, N);
        for (int i = 0; i < l; ++i) term = qpoly::mul(term, one_minus_q, N);
        term.scale(binomial(n - 1, l) * rational(k - 1 - l, 1));
        closed1 += term;
      }
      closed1.scale(binomial(k - 1, n - 1) * rational(1, k - 1));
      cmp.expect_qpoly(qc, at1, closed1, "t=1 face vs its closed form" + at);
    }
  }
}

// Full-height generating function over the (u1, u3) plane.
inline void run_full_height(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  context_spec s;
  s.q_order = p.q_ord;
  detail_ck::apply_t(s, p);
  s.u_names = {"u1", "u3"};
  s.u_total_cap = p.u_deg;
  context_ptr c = context::make(std::move(s));
  cmp.expect(fullheight_lhs(c), fullheight_rhs(c),
             "all-parts->=2 sum vs exponential closed form");
}

// The t = 0 closed form vs the generic one at t = 0 and vs the direct sum.
inline void run_li_t0(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  const int r = p.r, D = p.u_deg, N = p.q_ord;
  context_ptr work0 = detail_ck::u_ctx_t0(r, 2 * D + 2 * r + 1, N);
  context_ptr box = detail_ck::u_ctx_t0(r, D, N);
  series t0 = psi0_t0_closed_form(work0, r).truncated_to_u_total(D).transported(box);
  cmp.expect(t0, brute_psi0(box, r), "t=0 closed form vs direct sum");
  context_ptr workm = detail_ck::u_ctx_t0(r, D + 2 * r - 1, N);
  series main0 = psi0_closed_form(workm, r).truncated_to_u_total(D).transported(box);
  cmp.expect(t0, main0, "t=0 closed form vs generic closed form at t=0");
}

// Free-coefficient generating functions: closed forms vs direct sums, both as
// z-series and at z = q, for every j in -1..r-1.
inline void run_phi(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  const int r = p.r, D = p.u_deg, N = p.q_ord, M = p.z_ord;
  context_ptr cq = detail_ck::x_ctx(r, D, N, -1, p);
  context_ptr cz = detail_ck::x_ctx(r, D, N, M, p);
  for (int j = -1; j <= r - 1 && cmp.ok(); ++j) {
    std::string at = " at j=" + std::to_string(j);
    cmp.expect(phi_closed_at_q(cq, r, j), brute_phi_j_at_q(cq, r, j),
               "closed form vs direct sum at z=q" + at);
    if (!cmp.ok()) break;
    cmp.expect(phi_closed_z(cz, r, j), brute_phi_j_z(cz, r, j),
               "closed form vs direct sum as z-series" + at);
  }
}

// Value of the interpolated polylog at z = q as a binomial transform of the
// interpolated zeta values.
inline void run_lemma1(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  const int N = p.q_ord;
  context_ptr tc = detail_ck::scalar_ctx(N, p);
  for (const index& k : detail_ck::compositions_up_to(p.max_weight, 2)) {
    if (!cmp.ok()) break;
    cmp.expect(series_from_tpoly(tc, li_t_at_q(k, N)),
               series_from_tpoly(tc, li_at_q_binomial_rhs(k, N)),
               "polylog value at z=q vs binomial transform, index " + index_to_string(k));
  }
}

// The difference-operator system: single polylogs, graded slices, the ODE for
// the top generating function, and the theta-power expansion.
inline void run_diff_system(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  const int N = p.q_ord, M = p.z_ord;
  context_ptr zc = detail_ck::tz_ctx(N, M, p);
  series t = t_series(zc);
  series gz = geom_z(zc);
  const int zcap = M - 1;  // a q-difference loses the top z-order

  // (a) the operator on a single interpolated polylog.
  for (const index& k : detail_ck::compositions_up_to(p.max_weight, 1)) {
    if (!cmp.ok()) break;
    series li = detail_ck::li_t_series(zc, k);
    series rhs;
    if (k[0] >= 2) {
      index k2 = k;
      k2[0] -= 1;
      rhs = detail_ck::li_t_series(zc, k2).monomial_div("z", 1);
    } else if (k.size() >= 2) {
      index rest(k.begin() + 1, k.end());
      series lr = detail_ck::li_t_series(zc, rest);
      rhs = (t * lr).monomial_div("z", 1) + gz * lr;
    } else {
      rhs = gz;
    }
    cmp.expect(d_q(li).truncated_to_exponent("z", zcap),
               rhs.truncated_to_exponent("z", zcap),
               "difference operator on the polylog of index " + index_to_string(k));
  }

  // (b) graded height slices. Signatures: depth l, exact heights
  // l >= h_1 >= ... >= h_r >= 0, weight up to (sum of heights) + 3.
  for (int r = 1; r <= std::min(p.r, 2) && cmp.ok(); ++r) {
    std::vector<std::vector<int>> chains;
    std::vector<int> h(static_cast<size_t>(r), 0);
    int lmax = 3;
    std::function<void(int, int)> build = [&](int pos, int hi) {
      if (pos == r) {
        chains.push_back(h);
        return;
      }
      for (int v = 0; v <= hi; ++v) {
        h[static_cast<size_t>(pos)] = v;
        build(pos + 1, v);
      }
    };
    for (int l = 1; l <= lmax && cmp.ok(); ++l) {
      chains.clear();
      build(0, l);
      for (const std::vector<int>& hh : chains) {
        if (!cmp.ok()) break;
        int hs = 0;
        for (int v : hh) hs += v;
        for (int k = std::max(l + hs, 2); k <= hs + 3 && cmp.ok(); ++k) {
          std::ostringstream sig;
          sig << "r=" << r << " weight=" << k << " depth=" << l << " heights=(";
          for (size_t i = 0; i < hh.size(); ++i) sig << (i ? "," : "") << hh[i];
          sig << ")";
          auto G = [&](int j, int wt, int dep, const std::vector<int>& hv) {
            return brute_G(zc, wt, dep, j, hv);
          };
          if (hh[static_cast<size_t>(r) - 1] >= 1) {
            std::vector<int> hd = hh;
            hd[static_cast<size_t>(r) - 1] -= 1;
            series rhs = (G(r - 1, k - 1, l, hh) + G(r - 2, k - 1, l, hd) -
                          G(r - 1, k - 1, l, hd))
                             .monomial_div("z", 1);
            cmp.expect(d_q(G(r - 1, k, l, hh)).truncated_to_exponent("z", zcap),
                       rhs.truncated_to_exponent("z", zcap),
                       "top-slice difference relation, " + sig.str());
          }
          for (int j = 0; j <= r - 2 && cmp.ok(); ++j) {
            if (hh[static_cast<size_t>(j)] < 1) continue;
            std::vector<int> hd = hh;
            hd[static_cast<size_t>(j)] -= 1;
            series rhs =
                (G(j - 1, k - 1, l, hd) - G(j, k - 1, l, hd)).monomial_div("z", 1);
            cmp.expect(
                d_q(G(j, k, l, hh) - G(j + 1, k, l, hh)).truncated_to_exponent("z", zcap),
                rhs.truncated_to_exponent("z", zcap),
                "middle-slice difference relation j=" + std::to_string(j) + ", " + sig.str());
          }
          if (cmp.ok() && l >= 2) {
            series glow = G(-1, k - 1, l - 1, hh);
            series rhs = (t * glow).monomial_div("z", 1) + gz * glow;
            cmp.expect(
                d_q(G(-1, k, l, hh) - G(0, k, l, hh)).truncated_to_exponent("z", zcap),
                rhs.truncated_to_exponent("z", zcap),
                "depth-lowering difference relation, " + sig.str());
          }
        }
      }
    }
  }

  // (c) the ODE satisfied by the top generating function.
  for (int r = 1; r <= std::min(p.r, 2) && cmp.ok(); ++r) {
    context_ptr cx = detail_ck::x_ctx(r, p.u_deg, N, M, p);
    series tx = t_series(cx);
    series one = series::one(cx);
    std::vector<series> xs = free_x_vars(cx, r);
    series y0 = brute_phi_j_z(cx, r, r - 1);
    std::vector<series> th(static_cast<size_t>(r) + 2);
    th[0] = y0;
    for (int i = 1; i <= r + 1; ++i) th[static_cast<size_t>(i)] = theta_q(th[static_cast<size_t>(i) - 1]);
    series g1 = th[static_cast<size_t>(r) + 1] - (xs[1] + tx * xs[2]) * th[static_cast<size_t>(r)];
    series g2 = th[static_cast<size_t>(r) + 1] +
                ((one - tx) * xs[2] - xs[1]) * th[static_cast<size_t>(r)];
    for (int j = 0; j <= r - 1; ++j) {
      series hx = xs[static_cast<size_t>(r + 2 - j)] - xs[1] * xs[static_cast<size_t>(r + 1 - j)];
      g1 -= tx * hx * th[static_cast<size_t>(j)];
      g2 += (one - tx) * hx * th[static_cast<size_t>(j)];
    }
    cmp.expect(g1 - g2.monomial_mul("z", 1),
               xs[static_cast<size_t>(r) + 2].monomial_mul("z", 1),
               "operator annihilates the top generating function, r=" + std::to_string(r));
  }

  // (d) theta powers expand through the q-Stirling triangle.
  {
    std::mt19937 gen(20240817u);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    std::vector<std::pair<std::uint64_t, rational>> terms;
    for (int j = 0; j <= M; ++j)
      for (int a = 0; a <= std::min(N, 3); ++a) {
        rational v(num(gen), den(gen));
        if (v.is_zero()) continue;
        series mono = series::monomial(zc, {{"z", j}}, v).mul_qpoly(qpoly::monomial(a));
        for (const auto& [kk, vv] : mono.terms()) terms.emplace_back(kk, vv);
      }
    series f = series::from_terms(zc, std::move(terms));
    for (int n = 1; n <= 5 && cmp.ok(); ++n) {
      series acc = series::zero(zc);
      for (int m = 0; m <= n; ++m)
        acc += d_q_pow(f, m).monomial_mul("z", m).mul_qpoly(q_stirling2(n, m));
      cmp.expect(theta_q_pow(f, n), acc,
                 "theta power vs q-Stirling expansion, n=" + std::to_string(n));
    }
  }
}

// Product-form summation of the 2x1 series at its natural argument.
inline void run_heine(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  context_ptr qc = detail_ck::q_only_ctx(p.q_ord);
  auto [lhs, rhs] = heine_pair(p.q_ord);
  cmp.expect_qpoly(qc, lhs, rhs, "series vs product form");
}

// Two-term transformation of the 3x2 series.
inline void run_ktw(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  context_ptr qc = detail_ck::q_only_ctx(p.q_ord);
  auto [lhs, rhs] = ktw_pair(p.q_ord);
  cmp.expect_qpoly(qc, lhs, rhs, "series vs transformed series with prefactor");
}

// The denominator constant: substitution route vs direct route, its relation
// to the closed-form denominator, and its t = 0 collapse.  Runs r = 1..p.r.
inline void run_c_const(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  const int D = p.u_deg, N = p.q_ord;
  for (int r = 1; r <= std::max(p.r, 1) && cmp.ok(); ++r) {
    std::string at = " at r=" + std::to_string(r);
    context_ptr c = detail_ck::u_ctx(r, D + r, N, p);
    series cu = c_constant_u_route(c, r);
    series cx = c_constant_x_route(c, r);
    cmp.expect(cx.truncated_to_u_total(D), cu.truncated_to_u_total(D),
               "substitution route vs direct route" + at);
    if (!cmp.ok()) break;
    series t = t_series(c);
    series u1 = series::var(c, "u1");
    series one = series::one(c);
    series one_minus_qu1 = one - u1.mul_qpoly(qpoly::monomial(1));
    series mid = series::zero(c);
    for (int k = 2; k <= r + 1; ++k)
      mid += series::var(c, u_name(k)).mul_qpoly(qpoly::monomial(k - 2));
    series denom = one_minus_qu1 - t * one_minus_qu1 * mid -
                   (t * series::var(c, u_name(r + 2))).mul_qpoly(qpoly::monomial(r));
    cmp.expect((one_plus_q1_var(c, "u1") * cu).truncated_to_u_total(D),
               denom.truncated_to_u_total(D),
               "unit times constant vs closed-form denominator" + at);
    if (!cmp.ok()) break;
    if (p.t_symbolic) {
      series cu0 = cu.subst_t(rational(0));
      series target = (one_minus_qu1 * one_plus_q1_var(c, "u1").inverse());
      cmp.expect(cu0.truncated_to_u_total(D), target.truncated_to_u_total(D),
                 "t=0 collapse of the constant" + at);
    }
  }
}

// Substitution round trips in both directions.  Runs r = 1..p.r.
inline void run_roundtrip_xu(const check_params& p, check_report& rep) {
  detail_ck::comparer cmp(rep);
  const int D = p.u_deg, N = p.q_ord;
  for (int r = 1; r <= std::max(p.r, 1) && cmp.ok(); ++r) {
    std::string at = " at r=" + std::to_string(r);
    {  // u -> x -> u
      context_ptr c = detail_ck::u_ctx(r, D + r, N, p);
      std::vector<series> xs = x_from_u(c, r);
      series unit = one_plus_q1_var(c, "u1");
      std::vector<series> up(static_cast<size_t>(r) + 3);
      up[0] = series::one(c);
      for (int e = 1; e <= r + 2; ++e) up[static_cast<size_t>(e)] = up[static_cast<size_t>(e) - 1] * unit;
      std::vector<series> us = u_of_x(xs, r, [&](const series& s, int e) {
        return s.monomial_div("u1", e) * up[static_cast<size_t>(e)];
      });
      for (int j = 1; j <= r + 2 && cmp.ok(); ++j)
        cmp.expect(us[static_cast<size_t>(j)].truncated_to_u_total(D),
                   series::var(c, u_name(j)).truncated_to_u_total(D),
                   "u -> x -> u round trip, variable " + u_name(j) + at);
    }
    if (!cmp.ok()) break;
    {  // x -> u -> x
      context_ptr c = detail_ck::x_ctx(r, D + r, N, -1, p);
      std::vector<series> us = u_of_x(free_x_vars(c, r), r, [](const series& s, int e) {
        return s.monomial_div("x1", e);
      });
      series lower =
          series::one(c) - series::var(c, "x1").mul_qpoly(detail_hg::one_minus_q());
      std::vector<series> lp(static_cast<size_t>(r) + 3);
      lp[0] = series::one(c);
      for (int e = 1; e <= r + 2; ++e) lp[static_cast<size_t>(e)] = lp[static_cast<size_t>(e) - 1] * lower;
      std::vector<series> xs = x_of_u(us, r, [&](const series& s, int e) {
        return s.monomial_div("x1", e) * lp[static_cast<size_t>(e)];
      });
      for (int j = 1; j <= r + 2 && cmp.ok(); ++j)
        cmp.expect(xs[static_cast<size_t>(j)].truncated_to_u_total(D),
                   series::var(c, x_name(j)).truncated_to_u_total(D),
                   "x -> u -> x round trip, variable " + x_name(j) + at);
    }
  }
}

// q-Stirling triangle: both recurrences, the q = 1 specialization against
// explicitly enumerated set partitions, and the binomial Pascal-matrix
// inverse that underlies the slice solution.
inline void run_stirling(const check_params&, check_report& rep) {
  detail_ck::comparer cmp(rep);
  context_ptr qc = detail_ck::q_only_ctx(32);
  const int n_max = 8;
  // alternate recurrence S(m+1, j+1) = q^j S(m, j) + [j+1] S(m, j+1)
  for (int m = 0; m <= n_max - 1 && cmp.ok(); ++m)
    for (int j = 0; j <= m && cmp.ok(); ++j) {
      qpoly rhs = qpoly::mul(qpoly::monomial(j), q_stirling2(m, j)) +
                  qpoly::mul(q_int(j + 1), q_stirling2(m, j + 1));
      cmp.expect_qpoly(qc, q_stirling2(m + 1, j + 1), rhs,
                       "alternate recurrence at (" + std::to_string(m + 1) + "," +
                           std::to_string(j + 1) + ")");
    }
  // q = 1: count set partitions of {1..n} by number of blocks.
  for (int n = 1; n <= n_max && cmp.ok(); ++n) {
    std::vector<long long> counts(static_cast<size_t>(n) + 1, 0);
    std::function<void(int, int)> rec = [&](int i, int blocks) {
      if (i == n) {
        counts[static_cast<size_t>(blocks)]++;
        return;
      }
      for (int b = 1; b <= blocks + 1; ++b) rec(i + 1, std::max(blocks, b));
    };
    rec(0, 0);
    for (int k = 1; k <= n && cmp.ok(); ++k) {
      rational got = q_stirling2(n, k).eval_at_one();
      if (got != rational(counts[static_cast<size_t>(k)])) {
        // surface through the comparer for a uniform witness
        cmp.expect_qpoly(qc, qpoly::constant(got),
                         qpoly::constant(rational(counts[static_cast<size_t>(k)])),
                         "q=1 value vs set-partition count at (" + std::to_string(n) +
                             "," + std::to_string(k) + ")");
      }
    }
  }
  // Pascal-type matrix T = (C(i-1,j-1) x^{i-j}) has inverse with alternating
  // signs; check T * S = identity with x a formal variable.
  for (int n = 1; n <= n_max && cmp.ok(); ++n) {
    for (int i = 1; i <= n && cmp.ok(); ++i)
      for (int k = 1; k <= n && cmp.ok(); ++k) {
        qpoly acc;
        for (int j = k; j <= i; ++j) {
          rational coef = binomial(i - 1, j - 1) * binomial(j - 1, k - 1);
          if ((j - k) % 2 != 0) coef.negate();
          acc += qpoly::monomial(i - k, coef);
        }
        qpoly want = (i == k) ? qpoly::constant(rational(1)) : qpoly();
        cmp.expect_qpoly(qc, acc, want,
                         "binomial matrix inverse entry (" + std::to_string(i) + "," +
                             std::to_string(k) + ") at n=" + std::to_string(n));
      }
  }
}

// --- registry and runner ---------------------------------------------------

inline const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "main",   "cor-r1",      "sum-formula", "full-height", "li-t0",
      "phi",    "lemma1",      "diff-system", "heine",       "ktw",
      "c-const", "roundtrip-xu", "stirling"};
  return names;
}

inline check_report run_check(const std::string& name, const check_params& p) {
  check_report rep;
  rep.name = name;
  rep.params = params_string(p);
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (name == "main") {
      run_main(p, rep);
    } else if (name == "cor-r1") {
      run_cor_r1(p, rep);
    } else if (name == "sum-formula") {
      run_sum_formula(p, rep);
    } else if (name == "full-height") {
      run_full_height(p, rep);
    } else if (name == "li-t0") {
      run_li_t0(p, rep);
    } else if (name == "phi") {
      run_phi(p, rep);
    } else if (name == "lemma1") {
      run_lemma1(p, rep);
    } else if (name == "diff-system") {
      run_diff_system(p, rep);
    } else if (name == "heine") {
      run_heine(p, rep);
    } else if (name == "ktw") {
      run_ktw(p, rep);
    } else if (name == "c-const") {
      run_c_const(p, rep);
    } else if (name == "roundtrip-xu") {
      run_roundtrip_xu(p, rep);
    } else if (name == "stirling") {
      run_stirling(p, rep);
    } else {
      throw config_error("unknown check: " + name);
    }
  } catch (const error& e) {
    rep.status = "error";
    rep.detail = e.what();
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

struct check_job {
  std::string name;
  check_params params;
};

// The job lists behind `check all`: a fast smoke profile and the full grid.
inline std::vector<check_job> profile_jobs(const std::string& profile) {
  auto base = [](int r, int D, int N) {
    check_params p;
    p.r = r;
    p.u_deg = D;
    p.q_ord = N;
    return p;
  };
  std::vector<check_job> v;
  if (profile == "quick") {
    check_params p = base(1, 4, 8);
    v.push_back({"main", p});
    v.push_back({"cor-r1", p});
    v.push_back({"sum-formula", p});
    v.push_back({"full-height", p});
    v.push_back({"li-t0", p});
    v.push_back({"phi", p});
    v.push_back({"lemma1", p});
    {
      check_params s = p;
      s.max_weight = 5;
      v.push_back({"diff-system", s});
    }
    v.push_back({"heine", base(1, 4, 20)});
    v.push_back({"ktw", base(1, 4, 20)});
    v.push_back({"c-const", p});
    v.push_back({"roundtrip-xu", p});
    v.push_back({"stirling", p});
  } else if (profile == "full") {
    v.push_back({"main", base(1, 5, 10)});
    v.push_back({"main", base(2, 4, 8)});
    v.push_back({"cor-r1", base(1, 5, 10)});
    {
      check_params s = base(1, 4, 15);
      s.max_weight = 8;
      v.push_back({"sum-formula", s});
    }
    v.push_back({"full-height", base(1, 8, 12)});
    v.push_back({"li-t0", base(1, 4, 8)});
    v.push_back({"li-t0", base(2, 4, 8)});
    v.push_back({"phi", base(1, 4, 8)});
    v.push_back({"phi", base(2, 4, 8)});
    {
      check_params s = base(1, 4, 12);
      s.max_weight = 6;
      v.push_back({"lemma1", s});
    }
    {
      check_params s = base(2, 4, 8);
      s.max_weight = 5;
      v.push_back({"diff-system", s});
    }
    v.push_back({"heine", base(1, 4, 20)});
    v.push_back({"ktw", base(1, 4, 20)});
    v.push_back({"c-const", base(3, 4, 8)});
    v.push_back({"roundtrip-xu", base(3, 4, 8)});
    v.push_back({"stirling", base(1, 4, 8)});
  } else {
    throw config_error("unknown profile: " + profile);
  }
  return v;
}

// Runs the jobs (optionally across threads); results keep the given order, so
// output is byte-identical regardless of the worker count.
inline std::vector<check_report> run_jobs(const std::vector<check_job>& jobs, int workers) {
  std::vector<check_report> out(jobs.size());
  if (workers < 1) workers = 1;
  workers = std::min<int>(workers, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) out[i] = run_check(jobs[i].name, jobs[i].params);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        out[i] = run_check(jobs[i].name, jobs[i].params);
      }
    });
  for (std::thread& th : pool) th.join();
  return out;
}

// --- rendering -------------------------------------------------------------

inline std::string report_text(const check_report& r) {
  std::string out;
  if (r.status == "pass") {
    out = "PASS " + r.name + " " + r.params + "\n";
  } else if (r.status == "fail") {
    out = "FAIL " + r.name + " " + r.params + "\n";
    out += "  where: " + r.detail + "\n";
    out += "  witness monomial: " + r.witness_monomial + "\n";
    out += "  lhs: " + r.lhs_coeff + "\n";
    out += "  rhs: " + r.rhs_coeff + "\n";
  } else {
    out = "ERROR " + r.name + " " + r.params + "\n";
    out += "  " + r.detail + "\n";
  }
  return out;
}

}  // namespace qzv
