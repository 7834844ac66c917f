#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qzv/errors.hpp"
#include "qzv/qpoly.hpp"
#include "qzv/rational.hpp"

namespace qzv {

enum class var_kind { q, t, u, z };

// Truncation/variable layout for a family of series. A context owns:
//   - exactly one q variable, capped at q_order;
//   - optionally one t variable (never truncated; a generous bound backs the
//     packed field and overflowing it is an error, not a drop), or a fixed
//     rational t value substituted into everything built in this context;
//   - a block of "u-kind" variables (u1..., x1..., y1...) truncated by total
//     signed degree; the first may carry a Laurent floor (negative exponents);
//   - optionally one z variable, capped at z_order.
//
// Monomials are packed into a single uint64, fields ordered q, t, u..., z from
// the most significant bits down (plus a redundant low field holding the total
// u-degree), so that unsigned integer order of packed keys equals the canonical
// lexicographic order by (q-exp, t-exp, u-exps, z-exp).
struct context_spec {
  int q_order = 0;
  bool has_t = false;          // symbolic t variable present
  rational t_value{0};         // used when !has_t and t_is_value
  bool t_is_value = false;     // context carries a fixed rational t
  int t_bound = 48;            // packed-field bound for symbolic t (not a truncation)
  std::vector<std::string> u_names;
  int u_total_cap = 0;         // max total signed u-degree (ignored if no u vars)
  int laurent_floor = 0;       // <= 0; min exponent of u_names[0]
  int z_order = -1;            // -1: no z variable

  friend bool operator==(const context_spec&, const context_spec&) = default;
};

class context;
using context_ptr = std::shared_ptr<const context>;

class context : public std::enable_shared_from_this<context> {
 public:
  struct field {
    std::string name;
    var_kind kind;
    int shift = 0;
    std::uint64_t mask = 0;
    int floor = 0;  // minimum exponent
    int cap = 0;    // maximum exponent
  };

  static context_ptr make(context_spec s) {
    if (s.q_order < 0) throw config_error("context: q_order must be >= 0");
    if (s.laurent_floor > 0) throw config_error("context: laurent floor must be <= 0");
    if (!s.u_names.empty() && s.u_total_cap < 0)
      throw config_error("context: u_total_cap must be >= 0");
    if (s.has_t && s.t_is_value) throw config_error("context: t cannot be both symbolic and fixed");
    auto c = std::shared_ptr<context>(new context());
    c->spec_ = std::move(s);
    c->build_layout();
    return c;
  }

  const context_spec& spec() const { return spec_; }
  int q_order() const { return spec_.q_order; }
  int z_order() const { return spec_.z_order; }
  int u_total_cap() const { return spec_.u_names.empty() ? 0 : spec_.u_total_cap; }
  int laurent_floor() const { return spec_.laurent_floor; }
  bool has_t() const { return spec_.has_t; }
  bool has_z() const { return spec_.z_order >= 0; }
  int num_u() const { return static_cast<int>(spec_.u_names.size()); }
  const std::vector<field>& fields() const { return fields_; }

  // Combined additive grade bound used by series inversion / exp / log: any
  // kept monomial has q + z + (total u-degree) <= grade_bound().
  int grade_bound() const {
    int g = spec_.q_order;
    if (has_z()) g += spec_.z_order;
    if (num_u() > 0) g += spec_.u_total_cap;
    return g;
  }

  int var_index(const std::string& name) const {
    for (size_t i = 0; i < fields_.size(); ++i)
      if (fields_[i].name == name) return static_cast<int>(i);
    return -1;
  }
  int q_index() const { return qi_; }
  int t_index() const { return ti_; }
  int z_index() const { return zi_; }
  int u_begin() const { return u_begin_; }
  int u_end() const { return u_end_; }

  int exponent(std::uint64_t key, int fi) const {
    const field& f = fields_[fi];
    return static_cast<int>((key >> f.shift) & f.mask) + f.floor;
  }
  int u_total(std::uint64_t key) const {
    if (num_u() == 0) return 0;
    return static_cast<int>((key >> tot_shift_) & tot_mask_) + tot_floor_;
  }

  // Packs an exponent vector indexed like fields(); validates bounds.
  std::uint64_t pack(const std::vector<int>& e) const {
    if (e.size() != fields_.size()) throw config_error("context: exponent arity mismatch");
    std::uint64_t k = 0;
    int tot = 0;
    for (size_t i = 0; i < fields_.size(); ++i) {
      const field& f = fields_[i];
      if (e[i] < f.floor || e[i] > f.cap)
        throw config_error("context: exponent of " + f.name + " out of range");
      k |= (static_cast<std::uint64_t>(e[i] - f.floor) << f.shift);
      if (f.kind == var_kind::u) tot += e[i];
    }
    if (num_u() > 0) {
      if (tot > spec_.u_total_cap) throw config_error("context: total u-degree out of range");
      k |= (static_cast<std::uint64_t>(tot - tot_floor_) << tot_shift_);
    }
    return k;
  }

  std::vector<int> unpack(std::uint64_t key) const {
    std::vector<int> e(fields_.size());
    for (size_t i = 0; i < fields_.size(); ++i) e[i] = exponent(key, static_cast<int>(i));
    return e;
  }

  // Multiplies two packed keys. Returns false if the product lies outside the
  // truncation region (to be dropped). Throws on t-field overflow (t is never
  // truncated) and must never be called when Laurent underflow is possible
  // (series multiplication guards that via cached minimum u1 exponents).
  bool mul_key(std::uint64_t a, std::uint64_t b, std::uint64_t& out) const {
    std::uint64_t k = a + b - floor_corr_;
    if (qi_ >= 0) {
      if (((k >> fields_[qi_].shift) & fields_[qi_].mask) >
          static_cast<std::uint64_t>(fields_[qi_].cap))
        return false;
    }
    if (zi_ >= 0) {
      if (((k >> fields_[zi_].shift) & fields_[zi_].mask) >
          static_cast<std::uint64_t>(fields_[zi_].cap))
        return false;
    }
    if (num_u() > 0) {
      if (((k >> tot_shift_) & tot_mask_) >
          static_cast<std::uint64_t>(spec_.u_total_cap - tot_floor_))
        return false;
    }
    if (ti_ >= 0) {
      if (((k >> fields_[ti_].shift) & fields_[ti_].mask) >
          static_cast<std::uint64_t>(fields_[ti_].cap))
        throw config_error("context: t exponent exceeded the context bound (raise t_bound)");
    }
    out = k;
    return true;
  }

  std::string monomial_string(std::uint64_t key) const {
    // Print order: q, u..., t, z (exponent 1 printed bare).
    std::string s;
    auto emit = [&](const field& f, int e) {
      if (e == 0) return;
      if (!s.empty()) s += "*";
      s += f.name;
      if (e != 1) s += "^" + std::to_string(e);
    };
    if (qi_ >= 0) emit(fields_[qi_], exponent(key, qi_));
    for (int i = u_begin_; i < u_end_; ++i) emit(fields_[i], exponent(key, i));
    if (ti_ >= 0) emit(fields_[ti_], exponent(key, ti_));
    if (zi_ >= 0) emit(fields_[zi_], exponent(key, zi_));
    if (s.empty()) s = "1";
    return s;
  }

  friend bool operator==(const context& a, const context& b) { return a.spec_ == b.spec_; }

 private:
  context() = default;

  void build_layout() {
    fields_.clear();
    auto add = [&](const std::string& n, var_kind k, int floor, int cap) {
      field f;
      f.name = n;
      f.kind = k;
      f.floor = floor;
      f.cap = cap;
      fields_.push_back(std::move(f));
    };
    add("q", var_kind::q, 0, spec_.q_order);
    qi_ = 0;
    ti_ = -1;
    if (spec_.has_t) {
      add("t", var_kind::t, 0, spec_.t_bound);
      ti_ = static_cast<int>(fields_.size()) - 1;
    }
    u_begin_ = static_cast<int>(fields_.size());
    int F = -spec_.laurent_floor;  // >= 0
    for (size_t i = 0; i < spec_.u_names.size(); ++i) {
      int fl = (i == 0) ? spec_.laurent_floor : 0;
      // Non-floor u-vars can exceed the total cap by |floor| when a Laurent
      // factor compensates; the per-var cap reflects that.
      int cap = (i == 0) ? spec_.u_total_cap : spec_.u_total_cap + F;
      add(spec_.u_names[i], var_kind::u, fl, cap);
    }
    u_end_ = static_cast<int>(fields_.size());
    zi_ = -1;
    if (spec_.z_order >= 0) {
      add("z", var_kind::z, 0, spec_.z_order);
      zi_ = static_cast<int>(fields_.size()) - 1;
    }

    // Bit layout: fields in order, redundant u-total at the very bottom. Each
    // field is wide enough to hold the transient sum of two encodings, so key
    // addition cannot carry across fields before the cap check.
    tot_floor_ = spec_.laurent_floor;  // total >= u1 exponent >= floor
    int bits = 0;
    std::vector<int> widths(fields_.size());
    for (size_t i = 0; i < fields_.size(); ++i) {
      int range = fields_[i].cap - fields_[i].floor;
      widths[i] = std::bit_width(static_cast<unsigned>(2 * range + 1));
      bits += widths[i];
    }
    int tot_range = (num_u() > 0) ? (spec_.u_total_cap - tot_floor_) : 0;
    int tot_width = (num_u() > 0) ? std::bit_width(static_cast<unsigned>(2 * tot_range + 1)) : 0;
    bits += tot_width;
    if (bits > 63) throw config_error("context: packed monomial exceeds 63 bits");

    int shift = tot_width;
    for (size_t i = fields_.size(); i-- > 0;) {
      fields_[i].shift = shift;
      fields_[i].mask = (widths[i] >= 64) ? ~0ULL : ((1ULL << widths[i]) - 1);
      shift += widths[i];
    }
    tot_shift_ = 0;
    tot_mask_ = (tot_width >= 64) ? ~0ULL : ((1ULL << tot_width) - 1);

    floor_corr_ = 0;
    for (const auto& f : fields_)
      if (f.floor < 0)
        floor_corr_ += (static_cast<std::uint64_t>(-f.floor) << f.shift);
    if (num_u() > 0 && tot_floor_ < 0)
      floor_corr_ += (static_cast<std::uint64_t>(-tot_floor_) << tot_shift_);
  }

  context_spec spec_;
  std::vector<field> fields_;
  int qi_ = -1, ti_ = -1, zi_ = -1, u_begin_ = 0, u_end_ = 0;
  int tot_shift_ = 0, tot_floor_ = 0;
  std::uint64_t tot_mask_ = 0;
  std::uint64_t floor_corr_ = 0;
};

namespace detail {

// Minimal open-addressing accumulator for products (key -> running sum).
class accum_table {
 public:
  explicit accum_table(size_t expect) {
    size_t cap = 64;
    while (cap < expect * 2) cap <<= 1;
    keys_.assign(cap, kEmpty);
    vals_.resize(cap);
    mask_ = cap - 1;
  }

  void add(std::uint64_t k, const rational& a, const rational& b) {
    size_t i = slot(k);
    if (keys_[i] == kEmpty) {
      keys_[i] = k;
      vals_[i] = a * b;
      ++count_;
      if (count_ * 10 > (mask_ + 1) * 7) grow();
    } else {
      vals_[i] += a * b;
    }
  }

  void add_value(std::uint64_t k, rational v) {
    size_t i = slot(k);
    if (keys_[i] == kEmpty) {
      keys_[i] = k;
      vals_[i] = std::move(v);
      ++count_;
      if (count_ * 10 > (mask_ + 1) * 7) grow();
    } else {
      vals_[i] += v;
    }
  }

  std::vector<std::pair<std::uint64_t, rational>> take_sorted() {
    std::vector<std::pair<std::uint64_t, rational>> out;
    out.reserve(count_);
    for (size_t i = 0; i <= mask_; ++i) {
      if (keys_[i] != kEmpty && !vals_[i].is_zero())
        out.emplace_back(keys_[i], std::move(vals_[i]));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
  }

 private:
  static constexpr std::uint64_t kEmpty = ~0ULL;

  size_t slot(std::uint64_t k) const {
    std::uint64_t h = k * 0x9e3779b97f4a7c15ULL;
    size_t i = static_cast<size_t>(h >> 32) & mask_;
    while (keys_[i] != kEmpty && keys_[i] != k) i = (i + 1) & mask_;
    return i;
  }

  void grow() {
    std::vector<std::uint64_t> ok = std::move(keys_);
    std::vector<rational> ov = std::move(vals_);
    size_t ncap = (mask_ + 1) * 2;
    keys_.assign(ncap, kEmpty);
    vals_.assign(ncap, rational());
    mask_ = ncap - 1;
    count_ = 0;
    for (size_t i = 0; i < ok.size(); ++i) {
      if (ok[i] != kEmpty) {
        size_t j = slot(ok[i]);
        keys_[j] = ok[i];
        vals_[j] = std::move(ov[i]);
        ++count_;
      }
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<rational> vals_;
  size_t mask_ = 0;
  size_t count_ = 0;
};

}  // namespace detail

// Immutable-by-convention sparse truncated series over a shared context.
// Terms are kept sorted by packed key (== canonical monomial order), with no
// zero coefficients: equal series have equal representations.
class series {
 public:
  series() = default;
  explicit series(context_ptr c) : ctx_(std::move(c)) {}

  static series zero(context_ptr c) { return series(std::move(c)); }

  static series constant(context_ptr c, rational v) {
    series s(std::move(c));
    if (!v.is_zero()) s.terms_.emplace_back(0, std::move(v));
    s.recompute_min_u1();
    return s;
  }

  static series one(context_ptr c) { return constant(std::move(c), rational(1)); }

  // Monomial c * prod var^e from a name->exponent map; absent names get 0.
  static series monomial(context_ptr c, const std::map<std::string, int>& exps,
                         rational coeff = rational(1)) {
    std::vector<int> e(c->fields().size(), 0);
    for (const auto& [n, k] : exps) {
      int i = c->var_index(n);
      if (i < 0) throw config_error("series: unknown variable " + n);
      e[i] = k;
    }
    series s(c);
    if (!coeff.is_zero()) s.terms_.emplace_back(c->pack(e), std::move(coeff));
    s.recompute_min_u1();
    return s;
  }

  static series var(context_ptr c, const std::string& name, int power = 1) {
    return monomial(std::move(c), {{name, power}});
  }

  // q-polynomial injection (drops coefficients beyond q_order).
  static series from_qpoly(context_ptr c, const qpoly& p) {
    series s(c);
    int qi = c->q_index();
    std::vector<int> e(c->fields().size(), 0);
    for (int i = 0; i <= std::min(p.degree(), c->q_order()); ++i) {
      if (p.coeff(i).is_zero()) continue;
      e[qi] = i;
      s.terms_.emplace_back(c->pack(e), p.coeff(i));
    }
    std::sort(s.terms_.begin(), s.terms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    s.recompute_min_u1();
    return s;
  }

  const context_ptr& ctx() const { return ctx_; }
  const std::vector<std::pair<std::uint64_t, rational>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t num_terms() const { return terms_.size(); }
  // Builds a series from raw (packed key, coefficient) pairs; sorts, merges
  // duplicates, and drops zeros. Keys must have been packed by `c`.
  static series from_terms(context_ptr c, std::vector<std::pair<std::uint64_t, rational>> t) {
    std::sort(t.begin(), t.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    series s(std::move(c));
    for (auto& [k, v] : t) {
      if (!s.terms_.empty() && s.terms_.back().first == k)
        s.terms_.back().second += v;
      else
        s.terms_.emplace_back(k, std::move(v));
    }
    s.terms_.erase(std::remove_if(s.terms_.begin(), s.terms_.end(),
                                  [](const auto& p) { return p.second.is_zero(); }),
                   s.terms_.end());
    s.recompute_min_u1();
    return s;
  }

  int min_u1_exponent() const { return min_u1_; }

  // Minimum total signed u-degree over all terms (0 for empty/no-u contexts).
  int min_u_total() const {
    if (terms_.empty() || ctx_->num_u() == 0) return 0;
    int m = ctx_->u_total(terms_[0].first);
    for (const auto& [k, v] : terms_) m = std::min(m, ctx_->u_total(k));
    return m;
  }

  friend bool operator==(const series& a, const series& b) {
    if (a.ctx_.get() != b.ctx_.get() && !(a.ctx_ && b.ctx_ && *a.ctx_ == *b.ctx_))
      return false;
    return a.terms_ == b.terms_;
  }

  series operator-() const {
    series r(*this);
    for (auto& [k, v] : r.terms_) v.negate();
    return r;
  }

  friend series operator+(const series& a, const series& b) {
    a.check_same_ctx(b);
    series r(a.ctx_);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      if (a.terms_[i].first < b.terms_[j].first) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (b.terms_[j].first < a.terms_[i].first) {
        r.terms_.push_back(b.terms_[j++]);
      } else {
        rational s = a.terms_[i].second + b.terms_[j].second;
        if (!s.is_zero()) r.terms_.emplace_back(a.terms_[i].first, std::move(s));
        ++i;
        ++j;
      }
    }
    for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
    r.recompute_min_u1();
    return r;
  }

  friend series operator-(const series& a, const series& b) { return a + (-b); }

  friend series operator*(const series& a, const series& b) {
    a.check_same_ctx(b);
    series r(a.ctx_);
    if (a.is_zero() || b.is_zero()) return r;
    const context& c = *a.ctx_;
    if (c.num_u() > 0 && a.min_u1_ + b.min_u1_ < c.laurent_floor())
      throw config_error("series: product underflows the Laurent floor");
    const auto& small = a.terms_.size() <= b.terms_.size() ? a.terms_ : b.terms_;
    const auto& large = a.terms_.size() <= b.terms_.size() ? b.terms_ : a.terms_;
    detail::accum_table acc(small.size() * large.size() / 4 + 16);
    std::uint64_t key;
    for (const auto& [ka, va] : small) {
      for (const auto& [kb, vb] : large) {
        if (c.mul_key(ka, kb, key)) acc.add(key, va, vb);
      }
    }
    r.terms_ = acc.take_sorted();
    r.recompute_min_u1();
    return r;
  }

  series& operator+=(const series& o) { return *this = *this + o; }
  series& operator-=(const series& o) { return *this = *this - o; }
  series& operator*=(const series& o) { return *this = *this * o; }

  // Fast path for multiplication by a polynomial in q alone (very common:
  // q-integer factors, (1-q^n) brackets, scalar q-series). Equivalent to
  // building the polynomial as a series and multiplying.
  series mul_qpoly(const qpoly& p) const {
    series r(ctx_);
    if (is_zero() || p.is_zero()) return r;
    int qi = ctx_->q_index();
    const auto& f = ctx_->fields()[qi];
    detail::accum_table acc(terms_.size() + 16);
    for (const auto& [key, v] : terms_) {
      int e = ctx_->exponent(key, qi);
      for (int j = 0; j <= p.degree(); ++j) {
        if (p.coeff(j).is_zero()) continue;
        if (e + j > f.cap) break;
        acc.add(key + (static_cast<std::uint64_t>(j) << f.shift), v, p.coeff(j));
      }
    }
    r.terms_ = acc.take_sorted();
    r.recompute_min_u1();
    return r;
  }

  // Drops terms whose total u-degree exceeds cap (used to discard the
  // not-guaranteed-exact tail before strict divisibility checks).
  series truncated_to_u_total(int cap) const {
    series r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const auto& [key, v] : terms_)
      if (ctx_->u_total(key) <= cap) r.terms_.emplace_back(key, v);
    r.recompute_min_u1();
    return r;
  }

  // Drops terms with exponent of one named variable above cap (e.g. aligning
  // z-orders before comparing against a differentiated series).
  series truncated_to_exponent(const std::string& name, int cap) const {
    int fi = ctx_->var_index(name);
    if (fi < 0) throw config_error("series: unknown variable " + name);
    series r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const auto& [key, v] : terms_)
      if (ctx_->exponent(key, fi) <= cap) r.terms_.emplace_back(key, v);
    r.recompute_min_u1();
    return r;
  }

  series scaled(const rational& s) const {
    series r(ctx_);
    if (s.is_zero()) return r;
    r.terms_ = terms_;
    for (auto& [k, v] : r.terms_) v *= s;
    r.min_u1_ = min_u1_;
    return r;
  }

  series pow(int e) const {
    if (e < 0) throw domain_error("series::pow: negative exponent");
    series r = one(ctx_);
    series b = *this;
    while (e > 0) {
      if (e & 1) r = r * b;
      if (e > 1) b = b * b;
      e >>= 1;
    }
    return r;
  }

  rational coeff(const std::map<std::string, int>& exps) const {
    std::vector<int> e(ctx_->fields().size(), 0);
    for (const auto& [n, k] : exps) {
      int i = ctx_->var_index(n);
      if (i < 0) throw config_error("series: unknown variable " + n);
      e[i] = k;
    }
    std::uint64_t key = ctx_->pack(e);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const auto& t, std::uint64_t k) { return t.first < k; });
    if (it != terms_.end() && it->first == key) return it->second;
    return rational(0);
  }

  // Collects the coefficient of a full assignment to the named variables as a
  // series in the remaining ones (their exponents zeroed in the result).
  series coeff_of(const std::map<std::string, int>& exps) const {
    std::vector<std::pair<int, int>> want;  // (field index, exponent)
    for (const auto& [n, k] : exps) {
      int i = ctx_->var_index(n);
      if (i < 0) throw config_error("series: unknown variable " + n);
      want.emplace_back(i, k);
    }
    series r(ctx_);
    for (const auto& [key, v] : terms_) {
      bool match = true;
      for (auto [fi, e] : want)
        if (ctx_->exponent(key, fi) != e) {
          match = false;
          break;
        }
      if (!match) continue;
      std::vector<int> e = ctx_->unpack(key);
      for (auto [fi, _] : want) e[fi] = 0;
      r.terms_.emplace_back(ctx_->pack(e), v);
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    r.recompute_min_u1();
    return r;
  }

  // Exact division by var^k; every term must stay at or above the variable's
  // floor (this is a structural claim wherever the library uses it).
  series monomial_div(const std::string& name, int k) const {
    int fi = ctx_->var_index(name);
    if (fi < 0) throw config_error("series: unknown variable " + name);
    const auto& f = ctx_->fields()[fi];
    series r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const auto& [key, v] : terms_) {
      std::vector<int> e = ctx_->unpack(key);
      e[fi] -= k;
      structural_check(e[fi] >= f.floor,
                       "monomial division by " + name + "^" + std::to_string(k) +
                           " is not exact");
      r.terms_.emplace_back(ctx_->pack(e), v);
    }
    // dividing by a monomial preserves the key order only per-field; re-sort.
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    r.recompute_min_u1();
    return r;
  }

  // Multiplication by var^k (k may be negative where the floor allows; terms
  // leaving the truncation region are dropped, going below a floor throws).
  series monomial_mul(const std::string& name, int k, rational coeff = rational(1)) const {
    std::map<std::string, int> m{{name, k}};
    if (k >= 0) return *this * monomial(ctx_, m, std::move(coeff));
    return monomial_div(name, -k).scaled(coeff);
  }

  // Newton inversion; requires a unit constant term, and every non-constant
  // monomial must have positive combined grade (q + z + total u-degree).
  series inverse() const {
    rational c0 = coeff({});
    if (c0.is_zero()) throw domain_error("series::inverse: constant term is zero");
    for (const auto& [k, v] : terms_) {
      if (k == 0) continue;
      int g = ctx_->exponent(k, ctx_->q_index()) + ctx_->u_total(k);
      if (ctx_->z_index() >= 0) g += ctx_->exponent(k, ctx_->z_index());
      if (g <= 0)
        throw domain_error("series::inverse: monomial of nonpositive grade (" +
                           ctx_->monomial_string(k) + ")");
    }
    int G = ctx_->grade_bound();
    series x = constant(ctx_, rational(1) / c0);
    series two = constant(ctx_, rational(2));
    for (int correct = 1; correct <= G; correct *= 2) {
      x = x * (two - (*this) * x);
    }
    return x;
  }

  // exp of a series all of whose monomials have positive combined grade.
  series exp() const {
    require_positive_grade("series::exp");
    int G = ctx_->grade_bound();
    series e = one(ctx_);
    for (int k = G; k >= 1; --k) {
      e = one(ctx_) + (*this * e).scaled(rational(1, k));
    }
    return e;
  }

  // log(1 + this); same positive-grade requirement.
  series log1p() const {
    require_positive_grade("series::log1p");
    int G = ctx_->grade_bound();
    if (G < 1) return zero(ctx_);
    series acc = constant(ctx_, rational((G - 1) % 2 == 0 ? 1 : -1, G));
    for (int j = G - 2; j >= 0; --j) {
      acc = constant(ctx_, rational(j % 2 == 0 ? 1 : -1, j + 1)) + (*this * acc);
    }
    return *this * acc;
  }

  // z^k -> q^k substitution; requires z_order >= q_order so no q-information
  // below the cap is lost.
  series subst_z_to_q() const {
    if (!ctx_->has_z()) throw config_error("series: no z variable to substitute");
    if (ctx_->z_order() < ctx_->q_order())
      throw truncation_error("subst_z_to_q: needs z_order >= q_order");
    int zi = ctx_->z_index(), qi = ctx_->q_index();
    detail::accum_table acc(terms_.size() + 8);
    for (const auto& [key, v] : terms_) {
      std::vector<int> e = ctx_->unpack(key);
      e[qi] += e[zi];
      e[zi] = 0;
      if (e[qi] > ctx_->q_order()) continue;
      acc.add_value(ctx_->pack(e), v);
    }
    series r(ctx_);
    r.terms_ = acc.take_sorted();
    r.recompute_min_u1();
    return r;
  }

  // f(z) -> f(c*z) for a scalar c (used for f(qz) in difference operators and
  // in dilation-style checks).
  series dilate_z(const rational& c) const {
    if (!ctx_->has_z()) throw config_error("series: no z variable");
    int zi = ctx_->z_index();
    series r(ctx_);
    r.terms_.reserve(terms_.size());
    for (const auto& [key, v] : terms_) {
      rational w = v * rational_pow(c, ctx_->exponent(key, zi));
      if (!w.is_zero()) r.terms_.emplace_back(key, std::move(w));
    }
    r.recompute_min_u1();
    return r;
  }

  // Substitute a rational value for symbolic t.
  series subst_t(const rational& tv) const {
    if (!ctx_->has_t()) throw config_error("series: no symbolic t to substitute");
    int ti = ctx_->t_index();
    detail::accum_table acc(terms_.size() + 8);
    for (const auto& [key, v] : terms_) {
      std::vector<int> e = ctx_->unpack(key);
      rational w = v * rational_pow(tv, e[ti]);
      e[ti] = 0;
      if (!w.is_zero()) acc.add_value(ctx_->pack(e), std::move(w));
    }
    series r(ctx_);
    r.terms_ = acc.take_sorted();
    r.recompute_min_u1();
    return r;
  }

  // Maps this series into another context by variable name; exponents beyond
  // the target's truncation region are dropped (transport to a coarser cap),
  // absent variables must have zero exponents, floors must accommodate.
  series transported(const context_ptr& to) const {
    std::vector<int> remap(ctx_->fields().size(), -1);
    for (size_t i = 0; i < ctx_->fields().size(); ++i)
      remap[i] = to->var_index(ctx_->fields()[i].name);
    series r(to);
    detail::accum_table acc(terms_.size() + 8);
    for (const auto& [key, v] : terms_) {
      std::vector<int> e(to->fields().size(), 0);
      bool drop = false;
      int tot = 0;
      for (size_t i = 0; i < remap.size(); ++i) {
        int ex = ctx_->exponent(key, static_cast<int>(i));
        if (ex == 0) continue;
        if (remap[i] < 0)
          throw config_error("series::transported: variable " + ctx_->fields()[i].name +
                             " absent from target context");
        const auto& tf = to->fields()[remap[i]];
        if (ex < tf.floor)
          throw config_error("series::transported: exponent below target floor for " + tf.name);
        if (ex > tf.cap) {
          drop = true;
          break;
        }
        e[remap[i]] = ex;
        if (tf.kind == var_kind::u) tot += ex;
      }
      if (drop) continue;
      if (to->num_u() > 0 && tot > to->u_total_cap()) continue;
      acc.add_value(to->pack(e), v);
    }
    r.terms_ = acc.take_sorted();
    r.recompute_min_u1();
    return r;
  }

  // Canonical text form: one term per line, "<rational> <monomial>", sorted in
  // canonical order; "0" for the zero series.
  std::string to_text() const {
    if (terms_.empty()) return "0\n";
    std::string out;
    for (const auto& [k, v] : terms_) {
      out += v.to_string();
      out += " ";
      out += ctx_->monomial_string(k);
      out += "\n";
    }
    return out;
  }

  static series parse(context_ptr c, const std::string& text) {
    series r(c);
    detail::accum_table acc(16);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      // trim
      size_t b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      size_t e = line.find_last_not_of(" \t\r");
      line = line.substr(b, e - b + 1);
      if (line.empty() || line[0] == '#') continue;
      if (line == "0") continue;
      size_t sp = line.find(' ');
      std::string cs = (sp == std::string::npos) ? line : line.substr(0, sp);
      std::string ms = (sp == std::string::npos) ? "1" : line.substr(sp + 1);
      rational coeff = rational::from_string(cs);
      // monomial: factors split by '*'
      std::vector<int> exps(c->fields().size(), 0);
      size_t pos = 0;
      while (pos < ms.size()) {
        size_t star = ms.find('*', pos);
        std::string f = ms.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
        pos = (star == std::string::npos) ? ms.size() : star + 1;
        if (f.empty()) throw domain_error("series::parse: empty factor");
        if (f == "1") continue;
        size_t caret = f.find('^');
        std::string name = f.substr(0, caret == std::string::npos ? f.size() : caret);
        int ex = 1;
        if (caret != std::string::npos) ex = std::stoi(f.substr(caret + 1));
        int fi = c->var_index(name);
        if (fi < 0) throw domain_error("series::parse: unknown variable " + name);
        exps[fi] += ex;
      }
      if (!coeff.is_zero()) acc.add_value(c->pack(exps), coeff);
    }
    r.terms_ = acc.take_sorted();
    r.recompute_min_u1();
    return r;
  }

  struct mismatch {
    bool equal = true;
    std::string monomial;
    rational lhs, rhs;
  };

  // First differing monomial in canonical order (for failure witnesses).
  static mismatch first_mismatch(const series& a, const series& b) {
    a.check_same_ctx(b);
    size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      bool ta = i < a.terms_.size(), tb = j < b.terms_.size();
      std::uint64_t ka = ta ? a.terms_[i].first : ~0ULL;
      std::uint64_t kb = tb ? b.terms_[j].first : ~0ULL;
      if (ka < kb) return {false, a.ctx_->monomial_string(ka), a.terms_[i].second, rational(0)};
      if (kb < ka) return {false, a.ctx_->monomial_string(kb), rational(0), b.terms_[j].second};
      if (a.terms_[i].second != b.terms_[j].second)
        return {false, a.ctx_->monomial_string(ka), a.terms_[i].second, b.terms_[j].second};
      ++i;
      ++j;
    }
    return {};
  }

 private:
  void check_same_ctx(const series& o) const {
    if (ctx_.get() == o.ctx_.get()) return;
    if (ctx_ && o.ctx_ && *ctx_ == *o.ctx_) return;
    throw config_error("series: operands from incompatible contexts");
  }

  void require_positive_grade(const char* who) const {
    for (const auto& [k, v] : terms_) {
      int g = ctx_->exponent(k, ctx_->q_index()) + ctx_->u_total(k);
      if (ctx_->z_index() >= 0) g += ctx_->exponent(k, ctx_->z_index());
      if (g <= 0)
        throw domain_error(std::string(who) + ": monomial of nonpositive grade (" +
                           ctx_->monomial_string(k) + ")");
    }
  }

  void recompute_min_u1() {
    min_u1_ = 0;
    if (ctx_ && ctx_->num_u() > 0 && !terms_.empty()) {
      int ub = ctx_->u_begin();
      min_u1_ = ctx_->exponent(terms_[0].first, ub);
      for (const auto& [k, v] : terms_)
        min_u1_ = std::min(min_u1_, ctx_->exponent(k, ub));
    }
  }

  context_ptr ctx_;
  std::vector<std::pair<std::uint64_t, rational>> terms_;
  int min_u1_ = 0;
};

}  // namespace qzv
