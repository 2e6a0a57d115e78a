#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtb/code.hpp"

using namespace rtb;

TEST_CASE("code basics") {
  Code c{{0, 1, 2, 1, 0}};
  CHECK(c.p() == 4);
  CHECK(c.valid());
  CHECK(c.str() == "0 1 2 1 0");
  CHECK(is_palindrome(c));

  Code d{{0, 1, 2, 2, 0}};  // repeats a level: not a crossing sequence
  CHECK(!d.valid());

  Code e{{0, -1, 0}};
  CHECK(e.valid());
  CHECK(e.str() == "0 (-1) 0");
}

TEST_CASE("parse round-trip") {
  for (const char* s : {"0 1 2 1 0", "0 (-1) 0", "0 1 2 3", "0 1 0 1 0"}) {
    Code c = Code::parse(s);
    CHECK(c.str() == s);
  }
  CHECK_THROWS_AS(Code::parse(""), MalformedCode);
  CHECK_THROWS_AS(Code::parse("0 x 1"), MalformedCode);
  CHECK_THROWS_AS(Code::parse("0 2 0"), MalformedCode);  // jump of 2
}

TEST_CASE("classification") {
  // closed excursion above the axis
  CHECK(classify_code(Code{{0, 1, 2, 1, 0}}, 0, 3) == CodeClass::ReturningUp);
  CHECK(classify_code(Code{{0, 1, 2, 1, 2, 1, 0}}, 0, 3) == CodeClass::ReturningUp);
  CHECK(classify_code(Code{{0, -1, -2, -1, 0}}, -3, 3) == CodeClass::ReturningDown);
  // runs from the axis to the top of the band
  CHECK(classify_code(Code{{0, 1, 2, 3}}, 0, 3) == CodeClass::EscapesUp);
  CHECK(classify_code(Code{{0, -1, -2, -3}}, -3, 3) == CodeClass::EscapesDown);
  // anchored at neither end
  CHECK(classify_code(Code{{1, 2, 1}}, 0, 3) == CodeClass::Interior);
  CHECK(classify_code(Code{{2, 1, 2, 3}}, 0, 3) == CodeClass::Interior);
  // a band-top round trip is a return, seen from the top
  CHECK(classify_code(Code{{3, 2, 3}}, 0, 3) == CodeClass::ReturningDown);
}

TEST_CASE("reverse_negate is an involution") {
  Code c{{0, 1, 2, 1, 0}};
  Code rn = reverse_negate(c);
  CHECK(rn.str() == "0 (-1) (-2) (-1) 0");
  CHECK(reverse_negate(rn).str() == c.str());
  // palindromic up-code maps to palindromic down-code
  CHECK(is_palindrome(rn));
  CHECK(classify_code(rn, -3, 3) == CodeClass::ReturningDown);
}

TEST_CASE("reversed") {
  Code c{{0, 1, 2, 3}};
  CHECK(reversed(c).str() == "3 2 1 0");
}
