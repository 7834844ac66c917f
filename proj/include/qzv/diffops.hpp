#pragma once

// The q-difference operator D_q f(z) = (f(z) - f(q z)) / ((1 - q) z) and its
// companion Theta_q = z D_q, acting exactly on truncated series term by term:
//   D_q (c z^n)     = c [n] z^{n-1}   (the z^0 term cancels and contributes 0),
//   Theta_q (c z^n) = c [n] z^n.
// Both commute with truncation in q and z, so repeated application stays
// exact.

#include "qzv/errors.hpp"
#include "qzv/qkit.hpp"
#include "qzv/series.hpp"

namespace qzv {

namespace detail_diff {

// Applies c z^n -> c [n] z^{n - z_drop} for every term.
inline series q_int_weight(const series& f, int z_drop) {
  context_ptr c = f.ctx();
  if (!c->has_z()) throw config_error("difference operator: context has no z");
  int qi = c->q_index(), zi = c->z_index();
  const auto& qf = c->fields()[static_cast<size_t>(qi)];
  const auto& zf = c->fields()[static_cast<size_t>(zi)];
  std::vector<std::pair<std::uint64_t, rational>> terms;
  for (const auto& [key, v] : f.terms()) {
    int n = c->exponent(key, zi);
    if (n == 0) continue;
    int eq = c->exponent(key, qi);
    std::uint64_t base = key - (static_cast<std::uint64_t>(z_drop) << zf.shift);
    for (int j = 0; j < n && eq + j <= qf.cap; ++j)  // [n] = 1 + q + ... + q^{n-1}
      terms.emplace_back(base + (static_cast<std::uint64_t>(j) << qf.shift), v);
  }
  return series::from_terms(c, std::move(terms));
}

}  // namespace detail_diff

inline series d_q(const series& f) { return detail_diff::q_int_weight(f, 1); }

inline series theta_q(const series& f) { return detail_diff::q_int_weight(f, 0); }

inline series d_q_pow(series f, int n) {
  if (n < 0) throw domain_error("d_q_pow: negative power");
  for (int i = 0; i < n; ++i) f = d_q(f);
  return f;
}

inline series theta_q_pow(series f, int n) {
  if (n < 0) throw domain_error("theta_q_pow: negative power");
  for (int i = 0; i < n; ++i) f = theta_q(f);
  return f;
}

// 1 / (1 - z) as a series (geometric; exact under the z-order cap).
inline series geom_z(const context_ptr& c) {
  if (!c->has_z()) throw config_error("geom_z: context has no z");
  series z = series::var(c, "z", 1);
  return (series::one(c) - z).inverse();
}

}  // namespace qzv
