#pragma once
/**
 * @file code.hpp
 * @brief Pure combinatorics on orbit codes (sequences of rhombus levels).
 *
 * A code a_0..a_p records the labelled rhombus copies an unfolded orbit or
 * beam visits; consecutive entries differ by exactly 1.  Level-0-anchored
 * codes start at 0.  Serialization uses parenthesized negatives:
 * "0 1 2 1 0", "0 (-1) 0".
 */

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtb {

struct MalformedCode : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Code {
  std::vector<int> entries;

  Code() = default;
  Code(std::initializer_list<int> e) : entries(e) {}
  explicit Code(std::vector<int> e) : entries(std::move(e)) {}

  int p() const { return static_cast<int>(entries.size()) - 1; }
  bool empty() const { return entries.empty(); }
  bool valid() const {
    if (entries.empty()) return false;
    for (size_t i = 1; i < entries.size(); ++i)
      if (std::abs(entries[i] - entries[i - 1]) != 1) return false;
    return true;
  }
  bool operator==(const Code& o) const { return entries == o.entries; }

  std::string str() const {
    std::ostringstream os;
    for (size_t i = 0; i < entries.size(); ++i) {
      if (i) os << ' ';
      if (entries[i] < 0)
        os << '(' << entries[i] << ')';
      else
        os << entries[i];
    }
    return os.str();
  }
  static Code parse(const std::string& s) {
    Code c;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) {
      if (!tok.empty() && tok.front() == '(') tok = tok.substr(1);
      if (!tok.empty() && tok.back() == ')') tok.pop_back();
      try {
        c.entries.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw MalformedCode("bad code token: " + tok);
      }
    }
    if (!c.valid()) throw MalformedCode("invalid code string: \"" + s + "\"");
    return c;
  }
};

inline bool is_palindrome(const Code& c) {
  if (c.empty()) throw MalformedCode("empty code");
  return std::equal(c.entries.begin(), c.entries.end(), c.entries.rbegin());
}

/// Central symmetry of a code about its midpoint: a_i + a_(p-i) is constant.
/// Coincides with is_palindrome when the endpoints are equal; it is the right
/// notion for round trips that end on a translated image of the start level
/// (rational angles, returns through a horizontal diagonal image).
inline bool is_point_symmetric(const Code& c) {
  if (c.empty()) throw MalformedCode("empty code");
  int s = c.entries.front() + c.entries.back();
  size_t n = c.entries.size();
  for (size_t i = 0; i < n; ++i)
    if (c.entries[i] + c.entries[n - 1 - i] != s) return false;
  return true;
}

enum class CodeClass { ReturningUp, ReturningDown, EscapesUp, EscapesDown, Interior };

inline const char* to_string(CodeClass k) {
  switch (k) {
    case CodeClass::ReturningUp: return "ReturningUp";
    case CodeClass::ReturningDown: return "ReturningDown";
    case CodeClass::EscapesUp: return "EscapesUp";
    case CodeClass::EscapesDown: return "EscapesDown";
    case CodeClass::Interior: return "Interior";
  }
  return "?";
}

/// Classifies a code against the band M <= 0 < N.  Anchors are level 0 and
/// the band edges.  A code with equal anchored endpoints whose excursion
/// stays strictly between the anchors is Returning (Up for a positive
/// excursion, Down for a negative one); a code connecting two different
/// anchors Escapes in the direction of net movement; anything else (e.g. a
/// truncated code) is Interior.
inline CodeClass classify_code(const Code& c, int M, int N) {
  if (!c.valid()) throw MalformedCode("invalid adjacency in code " + c.str());
  if (M > 0 || N <= 0) throw MalformedCode("band must satisfy M <= 0 < N");
  auto anchored = [&](int a) { return a == 0 || a == M || a == N; };
  int a0 = c.entries.front(), ap = c.entries.back();
  if (!anchored(a0) || !anchored(ap) || c.p() == 0) return CodeClass::Interior;
  if (a0 == ap) {
    bool up = c.entries[1] > a0;
    int lo = *std::min_element(c.entries.begin() + 1, c.entries.end() - 1);
    int hi = *std::max_element(c.entries.begin() + 1, c.entries.end() - 1);
    if (up && lo > a0 && hi < N) return CodeClass::ReturningUp;
    if (!up && hi < a0 && lo > M) return CodeClass::ReturningDown;
    return CodeClass::Interior;
  }
  return ap > a0 ? CodeClass::EscapesUp : CodeClass::EscapesDown;
}

/// Time-reversal composed with the central symmetry: reverse and negate,
/// re-anchored so the first entry is literal.  Involution.
inline Code reverse_negate(const Code& c) {
  Code r;
  r.entries.reserve(c.entries.size());
  for (auto it = c.entries.rbegin(); it != c.entries.rend(); ++it)
    r.entries.push_back(-*it);
  return r;
}

inline Code reversed(const Code& c) {
  Code r;
  r.entries.assign(c.entries.rbegin(), c.entries.rend());
  return r;
}

}  // namespace rtb
