#include <catch2/catch_amalgamated.hpp>

#include "qzv/genfun.hpp"

using qzv::context;
using qzv::context_ptr;
using qzv::context_spec;
using qzv::series;

// p_k = a^k + b^k satisfies the quadratic Newton recurrence with e_1 = a + b,
// e_2 = ab; with a and b free variables both sides are explicit polynomials.
TEST_CASE("power sums of a universal quadratic") {
  context_spec s;
  s.q_order = 2;
  s.u_names = {"u1", "u2"};
  s.u_total_cap = 6;
  context_ptr c = context::make(std::move(s));
  series a = series::var(c, "u1"), b = series::var(c, "u2");
  std::vector<series> p = qzv::newton_power_sums(a + b, a * b, 6);
  series pa = series::one(c), pb = series::one(c);
  for (int k = 1; k <= 6; ++k) {
    pa = pa * a;
    pb = pb * b;
    CHECK(p[static_cast<size_t>(k)] == pa + pb);
  }
}

TEST_CASE("degenerate roots") {
  context_spec s;
  s.q_order = 2;
  s.u_names = {"u1", "u2"};
  s.u_total_cap = 5;
  context_ptr c = context::make(std::move(s));
  series a = series::var(c, "u1");
  // Double root a: e_1 = 2a, e_2 = a^2, p_k = 2 a^k.
  std::vector<series> p =
      qzv::newton_power_sums(a.scaled(qzv::rational(2)), a * a, 5);
  series ak = series::one(c);
  for (int k = 1; k <= 5; ++k) {
    ak = ak * a;
    CHECK(p[static_cast<size_t>(k)] == ak.scaled(qzv::rational(2)));
  }
}
