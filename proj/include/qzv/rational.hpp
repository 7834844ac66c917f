#pragma once

#include <gmp.h>

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <utility>

#include "qzv/errors.hpp"

namespace qzv {

// Exact arbitrary-precision rational, always kept in lowest terms with a
// positive denominator.
//
// Representation: a small path (int64 numerator/denominator, |value| parts
// bounded by 2^62) covers virtually all coefficients that arise in truncated
// q-series work; results that do not fit are transparently promoted to a
// heap-allocated GMP mpq_t. The invariant "big_ != nullptr implies the value
// does not fit the small path" is maintained after every operation, so equality
// is a plain representation compare.
class rational {
 public:
  rational() noexcept : num_(0), den_(1), big_(nullptr) {}

  rational(long long n) : num_(n), den_(1), big_(nullptr) {}  // NOLINT(implicit)

  rational(long long n, long long d) : num_(0), den_(1), big_(nullptr) {
    if (d == 0) throw domain_error("rational: zero denominator");
    __int128 nn = n, dd = d;
    if (dd < 0) {
      nn = -nn;
      dd = -dd;
    }
    set_from_i128_reduced(nn, dd, /*already_reduced=*/false);
  }

  ~rational() { clear_big(); }

  rational(const rational& o) : num_(o.num_), den_(o.den_), big_(nullptr) {
    if (o.big_) {
      big_ = new_big();
      mpq_set(big_->v, o.big_->v);
    }
  }

  rational(rational&& o) noexcept : num_(o.num_), den_(o.den_), big_(o.big_) {
    o.big_ = nullptr;
    o.num_ = 0;
    o.den_ = 1;
  }

  rational& operator=(const rational& o) {
    if (this == &o) return *this;
    if (o.big_) {
      if (!big_) big_ = new_big();
      mpq_set(big_->v, o.big_->v);
    } else {
      clear_big();
    }
    num_ = o.num_;
    den_ = o.den_;
    return *this;
  }

  rational& operator=(rational&& o) noexcept {
    if (this == &o) return *this;
    clear_big();
    num_ = o.num_;
    den_ = o.den_;
    big_ = o.big_;
    o.big_ = nullptr;
    o.num_ = 0;
    o.den_ = 1;
    return *this;
  }

  static rational from_string(const std::string& s) {
    auto slash = s.find('/');
    rational r;
    if (slash == std::string::npos) {
      if (!parse_i64(s, r.num_)) return from_string_big(s);
      r.den_ = 1;
      return r;
    }
    long long n = 0, d = 0;
    if (!parse_i64(s.substr(0, slash), n) || !parse_i64(s.substr(slash + 1), d))
      return from_string_big(s);
    return rational(n, d);
  }

  bool is_zero() const noexcept { return !big_ && num_ == 0; }
  bool is_one() const noexcept { return !big_ && num_ == 1 && den_ == 1; }
  bool is_small() const noexcept { return big_ == nullptr; }

  // Valid only when is_small().
  long long small_num() const noexcept { return num_; }
  long long small_den() const noexcept { return den_; }

  int sign() const noexcept {
    if (big_) return mpq_sgn(big_->v);
    return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
  }

  friend bool operator==(const rational& a, const rational& b) noexcept {
    if (a.big_ || b.big_) {
      if (!a.big_ || !b.big_) return false;  // canonical: big never fits small
      return mpq_equal(a.big_->v, b.big_->v) != 0;
    }
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const rational& a, const rational& b) noexcept { return !(a == b); }

  friend bool operator<(const rational& a, const rational& b) {
    if (!a.big_ && !b.big_) {
      return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    mpq_t qa, qb;
    mpq_init(qa);
    mpq_init(qb);
    a.to_mpq(qa);
    b.to_mpq(qb);
    bool r = mpq_cmp(qa, qb) < 0;
    mpq_clear(qa);
    mpq_clear(qb);
    return r;
  }

  rational operator-() const {
    rational r(*this);
    r.negate();
    return r;
  }

  void negate() {
    if (big_) {
      mpq_neg(big_->v, big_->v);
      try_demote();
    } else {
      num_ = -num_;  // |num_| < 2^62, safe
    }
  }

  rational& operator+=(const rational& o) {
    if (!big_ && !o.big_) {
      if (den_ == o.den_) {
        long long n;
        if (!__builtin_add_overflow(num_, o.num_, &n)) {
          long long g = std::gcd(n < 0 ? -n : n, den_);  // gcd(0, d) == d
          long long nn = n / g, dd = den_ / g;
          if (fits_small(nn)) {
            num_ = nn;
            den_ = dd;
            return *this;
          }
        }
        // fall through to the 128-bit path; state untouched
      }
      __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
      __int128 d = static_cast<__int128>(den_) * o.den_;
      set_from_i128_reduced(n, d, /*already_reduced=*/false);
      return *this;
    }
    mpq_t tmp;
    mpq_init(tmp);
    o.to_mpq(tmp);
    promote();
    mpq_add(big_->v, big_->v, tmp);
    mpq_clear(tmp);
    try_demote();
    return *this;
  }

  rational& operator-=(const rational& o) {
    if (this == &o) {
      *this = rational();
      return *this;
    }
    rational t(o);
    t.negate();
    return (*this += t);
  }

  rational& operator*=(const rational& o) {
    if (!big_ && !o.big_) {
      if (den_ == 1 && o.den_ == 1) {
        long long n;
        if (!__builtin_mul_overflow(num_, o.num_, &n) && fits_small(n)) {
          num_ = n;
          return *this;
        }
      }
      // cross-reduce: result of (a/b)*(c/d) with g1=gcd(a,d), g2=gcd(c,b) is in
      // lowest terms already.
      long long g1 = std::gcd(num_ < 0 ? -num_ : num_, o.den_);
      long long g2 = std::gcd(o.num_ < 0 ? -o.num_ : o.num_, den_);
      __int128 n = static_cast<__int128>(num_ / g1) * (o.num_ / g2);
      __int128 d = static_cast<__int128>(den_ / g2) * (o.den_ / g1);
      set_from_i128_reduced(n, d, /*already_reduced=*/true);
      return *this;
    }
    mpq_t tmp;
    mpq_init(tmp);
    o.to_mpq(tmp);
    promote();
    mpq_mul(big_->v, big_->v, tmp);
    mpq_clear(tmp);
    try_demote();
    return *this;
  }

  rational& operator/=(const rational& o) {
    if (o.is_zero()) throw domain_error("rational: division by zero");
    if (!o.big_) {
      rational inv;
      long long n = o.num_, d = o.den_;
      if (n < 0) {
        n = -n;
        d = -d;
      }
      inv.num_ = d;
      inv.den_ = n;
      return (*this *= inv);
    }
    mpq_t tmp;
    mpq_init(tmp);
    mpq_inv(tmp, o.big_->v);
    promote();
    mpq_mul(big_->v, big_->v, tmp);
    mpq_clear(tmp);
    try_demote();
    return *this;
  }

  friend rational operator+(rational a, const rational& b) { return a += b; }
  friend rational operator-(rational a, const rational& b) { return a -= b; }
  friend rational operator*(rational a, const rational& b) { return a *= b; }
  friend rational operator/(rational a, const rational& b) { return a /= b; }

  std::string to_string() const {
    if (!big_) {
      std::string s = std::to_string(num_);
      if (den_ != 1) s += "/" + std::to_string(den_);
      return s;
    }
    char* c = mpq_get_str(nullptr, 10, big_->v);
    std::string s(c);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(c, s.size() + 1);
    return s;
  }

  // Reference conversion (used by tests to cross-check the small path).
  void to_mpq(mpq_t out) const {
    if (big_) {
      mpq_set(out, big_->v);
    } else {
      mpq_set_si(out, num_, 1);
      mpz_set_si(mpq_denref(out), den_);
      mpq_canonicalize(out);  // already canonical; cheap no-op safeguard
    }
  }

 private:
  struct big_t {
    mpq_t v;
  };

  static constexpr long long kLimit = (1LL << 62);
  static bool fits_small(long long v) noexcept { return v > -kLimit && v < kLimit; }

  static big_t* new_big() {
    auto* b = new big_t;
    mpq_init(b->v);
    return b;
  }

  void clear_big() noexcept {
    if (big_) {
      mpq_clear(big_->v);
      delete big_;
      big_ = nullptr;
    }
  }

  void promote() {
    if (big_) return;
    big_ = new_big();
    mpq_set_si(big_->v, num_, 1);
    mpz_set_si(mpq_denref(big_->v), den_);
  }

  void try_demote() {
    if (!big_) return;
    mpz_srcptr n = mpq_numref(big_->v);
    mpz_srcptr d = mpq_denref(big_->v);
    if (mpz_sizeinbase(n, 2) <= 62 && mpz_sizeinbase(d, 2) <= 62) {
      long long nn = mpz_get_si(n);
      long long dd = mpz_get_si(d);
      clear_big();
      num_ = nn;
      den_ = dd;
    }
  }

  static unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) noexcept {
    while (b != 0) {
      unsigned __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  // Set from numerator/denominator as signed 128-bit ints, d > 0 unless n
  // carries the sign; reduces if requested and promotes to GMP when the result
  // does not fit the small window.
  void set_from_i128_reduced(__int128 n, __int128 d, bool already_reduced) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) {
      clear_big();
      num_ = 0;
      den_ = 1;
      return;
    }
    if (!already_reduced) {
      unsigned __int128 an = n < 0 ? static_cast<unsigned __int128>(-n) : static_cast<unsigned __int128>(n);
      unsigned __int128 g = gcd128(an, static_cast<unsigned __int128>(d));
      if (g > 1) {
        n /= static_cast<__int128>(g);
        d /= static_cast<__int128>(g);
      }
    }
    if (n > -static_cast<__int128>(kLimit) && n < static_cast<__int128>(kLimit) &&
        d < static_cast<__int128>(kLimit)) {
      clear_big();
      num_ = static_cast<long long>(n);
      den_ = static_cast<long long>(d);
      return;
    }
    if (!big_) big_ = new_big();
    set_mpz_i128(mpq_numref(big_->v), n);
    set_mpz_i128(mpq_denref(big_->v), d);
    // n/d is already in lowest terms with d > 0 here, but canonicalize anyway
    // when we did not reduce ourselves.
    if (!already_reduced) mpq_canonicalize(big_->v);
    num_ = 0;
    den_ = 1;
  }

  static void set_mpz_i128(mpz_ptr z, __int128 v) {
    bool neg = v < 0;
    unsigned __int128 a = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    mpz_set_ui(z, static_cast<unsigned long>(a >> 64));
    mpz_mul_2exp(z, z, 64);
    mpz_add_ui(z, z, static_cast<unsigned long>(a & 0xffffffffffffffffULL));
    if (neg) mpz_neg(z, z);
  }

  static bool parse_i64(const std::string& s, long long& out) {
    if (s.empty()) throw domain_error("rational: empty numeral");
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) {
      // distinguish overflow (caller retries with GMP) from garbage
      for (size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') throw domain_error("rational: bad numeral '" + s + "'");
      if (s.size() == ((s[0] == '-' || s[0] == '+') ? 1u : 0u))
        throw domain_error("rational: bad numeral '" + s + "'");
      return false;
    }
    if (!fits_small(v)) return false;
    out = v;
    return true;
  }

  static rational from_string_big(const std::string& s) {
    rational r;
    r.big_ = new_big();
    if (mpq_set_str(r.big_->v, s.c_str(), 10) != 0) {
      r.clear_big();
      throw domain_error("rational: bad numeral '" + s + "'");
    }
    if (mpz_sgn(mpq_denref(r.big_->v)) == 0) {
      r.clear_big();
      throw domain_error("rational: zero denominator");
    }
    mpq_canonicalize(r.big_->v);
    r.try_demote();
    return r;
  }

  long long num_, den_;
  big_t* big_;
};

inline rational rational_pow(const rational& base, int e) {
  if (e < 0) {
    if (base.is_zero()) throw domain_error("rational_pow: 0^negative");
    return rational(1) / rational_pow(base, -e);
  }
  rational r(1), b(base);
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

}  // namespace qzv
