#include <catch2/catch_amalgamated.hpp>

#include "qzv/rational.hpp"

using qzv::rational;

TEST_CASE("construction normalizes sign and lowest terms") {
  CHECK(rational(2, 4) == rational(1, 2));
  CHECK(rational(-2, 4) == rational(-1, 2));
  CHECK(rational(2, -4) == rational(-1, 2));
  CHECK(rational(-2, -4) == rational(1, 2));
  CHECK(rational(0, 7) == rational(0));
  CHECK(rational(6, 3).to_string() == "2");
  CHECK(rational(1, -2).to_string() == "-1/2");
  CHECK_THROWS_AS(rational(1, 0), qzv::domain_error);
}

TEST_CASE("field arithmetic") {
  rational a(1, 2), b(1, 3);
  CHECK(a + b == rational(5, 6));
  CHECK(a - b == rational(1, 6));
  CHECK(a * b == rational(1, 6));
  CHECK(a / b == rational(3, 2));
  CHECK(-a == rational(-1, 2));
  rational c = a;
  c += b;
  c *= rational(6);
  CHECK(c == rational(5));
  c.negate();
  CHECK(c == rational(-5));
  CHECK(a != b);
  CHECK(b < a);
}

TEST_CASE("string round trip") {
  for (const char* s : {"0", "1", "-1", "1/2", "-22/7", "355/113"}) {
    CHECK(rational::from_string(s).to_string() == s);
  }
  CHECK(rational::from_string("4/6") == rational(2, 3));
  CHECK_THROWS_AS(rational::from_string("1/0"), qzv::domain_error);
}

TEST_CASE("promotion past 64-bit and demotion back") {
  // 3^50 does not fit in int64; build it by repeated multiplication.
  rational p(1);
  for (int i = 0; i < 50; ++i) p *= rational(3);
  CHECK(p.to_string() == "717897987691852588770249");
  rational inv = rational(1) / p;
  CHECK(p * inv == rational(1));
  // Demotes: subtracting almost all of it lands back on the small path.
  rational small = p - (p - rational(7, 3));
  CHECK(small == rational(7, 3));
  CHECK(small.is_small());
}

TEST_CASE("power helper") {
  CHECK(qzv::rational_pow(rational(2, 3), 0) == rational(1));
  CHECK(qzv::rational_pow(rational(2, 3), 3) == rational(8, 27));
  CHECK(qzv::rational_pow(rational(-1, 2), 2) == rational(1, 4));
}
