#pragma once

#include <string>
#include <vector>

#include "qzv/errors.hpp"
#include "qzv/rational.hpp"

namespace qzv {

// Dense polynomial in q over rational, used for context-free exact data
// (q-integers, q-Stirling numbers, one-variable zeta caches). Coefficient of
// q^i lives at index i. Trailing zeros are trimmed by normalize().
class qpoly {
 public:
  qpoly() = default;
  explicit qpoly(std::vector<rational> c) : c_(std::move(c)) { normalize(); }
  static qpoly constant(rational v) {
    qpoly p;
    if (!v.is_zero()) p.c_.push_back(std::move(v));
    return p;
  }
  static qpoly monomial(int e, rational v = rational(1)) {
    if (e < 0) throw domain_error("qpoly: negative exponent");
    qpoly p;
    if (!v.is_zero()) {
      p.c_.assign(e + 1, rational(0));
      p.c_[e] = std::move(v);
    }
    return p;
  }

  const std::vector<rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  rational coeff(int e) const {
    if (e < 0 || e >= static_cast<int>(c_.size())) return rational(0);
    return c_[e];
  }

  friend bool operator==(const qpoly& a, const qpoly& b) { return a.c_ == b.c_; }

  qpoly& operator+=(const qpoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalize();
    return *this;
  }
  qpoly& operator-=(const qpoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    normalize();
    return *this;
  }
  friend qpoly operator+(qpoly a, const qpoly& b) { return a += b; }
  friend qpoly operator-(qpoly a, const qpoly& b) { return a -= b; }

  qpoly& scale(const rational& s) {
    if (s.is_zero()) {
      c_.clear();
      return *this;
    }
    for (auto& x : c_) x *= s;
    return *this;
  }

  // Product, truncated to q-order `ord` when ord >= 0 (exact otherwise).
  static qpoly mul(const qpoly& a, const qpoly& b, int ord = -1) {
    if (a.is_zero() || b.is_zero()) return {};
    int da = a.degree(), db = b.degree();
    int dr = da + db;
    if (ord >= 0 && dr > ord) dr = ord;
    std::vector<rational> r(dr + 1, rational(0));
    for (int i = 0; i <= da; ++i) {
      if (a.c_[i].is_zero()) continue;
      int jmax = std::min(db, dr - i);
      for (int j = 0; j <= jmax; ++j) {
        if (!b.c_[j].is_zero()) r[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return qpoly(std::move(r));
  }

  // Inverse as a power series to q-order `ord`; requires a unit constant term.
  static qpoly inverse(const qpoly& a, int ord) {
    if (a.is_zero() || a.c_[0].is_zero())
      throw domain_error("qpoly::inverse: constant term is zero");
    std::vector<rational> r(ord + 1, rational(0));
    rational c0inv = rational(1) / a.c_[0];
    r[0] = c0inv;
    for (int n = 1; n <= ord; ++n) {
      rational s(0);
      int kmax = std::min(n, a.degree());
      for (int k = 1; k <= kmax; ++k) {
        if (!a.c_[k].is_zero()) s += a.c_[k] * r[n - k];
      }
      r[n] = -(s * c0inv);
    }
    return qpoly(std::move(r));
  }

  qpoly truncated(int ord) const {
    if (degree() <= ord) return *this;
    std::vector<rational> r(c_.begin(), c_.begin() + ord + 1);
    return qpoly(std::move(r));
  }

  rational eval_at_one() const {
    rational s(0);
    for (const auto& x : c_) s += x;
    return s;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = 0; i <= degree(); ++i) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += c_[i].to_string();
      if (i > 0) s += "*q^" + std::to_string(i);
    }
    return s;
  }

 private:
  void normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<rational> c_;
};

}  // namespace qzv
