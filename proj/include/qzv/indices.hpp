#pragma once

// Multi-indices of positive integers, their statistics (weight, depth,
// i-heights), admissibility, and the deterministic enumerations used by the
// brute-force generating functions.
//
// The generating functions attach to an index k = (k_1, ..., k_l) the
// monomial
//   u_1^{wt - dep - sum h_j} * u_2^{dep - h_1} * u_3^{h_1 - h_2} * ...
//     * u_{r+2}^{h_r}
// whose total u-degree is sum_i max(1, k_i - r). Enumerations are therefore
// driven by a budget on that quantity, which is what a total-degree
// truncation of the generating function actually bounds. A weight cap of
// (r+1) * budget is implied (each part of value v contributes at least v/(r+1)
// to the budget) and is asserted.

#include <functional>
#include <string>
#include <vector>

#include "qzv/errors.hpp"

namespace qzv {

using index = std::vector<int>;

inline int weight(const index& k) {
  int w = 0;
  for (int p : k) w += p;
  return w;
}

inline int depth(const index& k) { return static_cast<int>(k.size()); }

// i-height: the number of parts >= i + 1.
inline int height(const index& k, int i) {
  int h = 0;
  for (int p : k) {
    if (p >= i + 1) ++h;
  }
  return h;
}

inline bool admissible(const index& k) { return !k.empty() && k[0] >= 2; }

// Membership in I_j: first part at least j + 2 (j = -1 means any index).
inline bool in_I(const index& k, int j) { return !k.empty() && k[0] >= j + 2; }

inline std::string index_to_string(const index& k) {
  std::string s = "(";
  for (size_t i = 0; i < k.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(k[i]);
  }
  return s + ")";
}

// Total u-degree of the monomial attached to k for a given r:
// sum_i max(1, k_i - r).
inline int monomial_degree(const index& k, int r) {
  int d = 0;
  for (int p : k) d += (p - r > 1) ? p - r : 1;
  return d;
}

// Exponent vector (e_1, ..., e_{r+2}) of the attached monomial:
//   e_1 = wt - dep - sum_j h_j,   e_2 = #{parts == 1},
//   e_{i+2} = #{parts == i+1} for i = 1..r-1,   e_{r+2} = #{parts >= r+1}.
inline std::vector<int> index_monomial(const index& k, int r) {
  std::vector<int> e(static_cast<size_t>(r) + 2, 0);
  int hsum = 0;
  for (int i = 1; i <= r; ++i) hsum += height(k, i);
  e[0] = weight(k) - depth(k) - hsum;
  structural_check(e[0] >= 0, "index monomial: negative u1 exponent");
  for (int p : k) {
    int slot = (p >= r + 1) ? r + 1 : p;  // u_2 <-> parts==1, ..., u_{r+2} <-> parts>=r+1
    e[static_cast<size_t>(slot)] += 1;
  }
  return e;
}

// Enumerates, in lexicographic order (by part values, position by position),
// every index with first part >= min_first and monomial degree <= budget.
// Parts are bounded by budget + r, so the visited weight never exceeds
// (r+1) * budget; this bound is asserted on every visit.
inline void for_each_index(int r, int budget, int min_first,
                           const std::function<void(const index&)>& fn) {
  if (r < 0 || budget < 0) throw domain_error("for_each_index: bad arguments");
  index cur;
  std::function<void(int, bool)> rec = [&](int left, bool first) {
    if (!cur.empty()) {
      structural_check(weight(cur) <= (r + 1) * budget,
                       "index enumeration exceeded its weight bound");
      fn(cur);
    }
    int lo = first ? (min_first < 1 ? 1 : min_first) : 1;
    for (int p = lo; p - r <= left; ++p) {
      int cost = (p - r > 1) ? p - r : 1;
      if (cost > left) continue;
      cur.push_back(p);
      rec(left - cost, false);
      cur.pop_back();
    }
  };
  rec(budget, true);
}

// All indices with the given weight and depth whose first part is >= j + 2
// (the set I_j of a signature's weight/depth slice), optionally filtered by
// exact i-heights h = (h_1, ..., h_r). Lexicographic order.
inline std::vector<index> enumerate_I(int wt, int dep, int j, const std::vector<int>& h) {
  std::vector<index> out;
  if (dep < 0 || wt < dep) return out;
  if (dep == 0) {
    bool zero_h = true;
    for (int v : h) zero_h = zero_h && v == 0;
    if (wt == 0 && j <= -1 && zero_h) out.push_back({});
    return out;
  }
  index cur;
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == dep) {
      if (left != 0) return;
      bool ok = true;
      for (size_t i = 0; i < h.size() && ok; ++i)
        ok = height(cur, static_cast<int>(i) + 1) == h[i];
      if (ok) out.push_back(cur);
      return;
    }
    int lo = (pos == 0 && j >= 0) ? j + 2 : 1;
    int remaining = dep - pos - 1;  // later parts need at least 1 each
    for (int p = lo; p <= left - remaining; ++p) {
      cur.push_back(p);
      rec(pos + 1, left - p);
      cur.pop_back();
    }
  };
  rec(0, wt);
  return out;
}

}  // namespace qzv
