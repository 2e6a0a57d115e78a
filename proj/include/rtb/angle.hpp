#pragma once
/**
 * @file angle.hpp
 * @brief Symbolic angle specifications and the triangle/rhombus configuration.
 *
 * An AngleSpec is a parsed arithmetic expression over integers, decimal
 * literals, `pi`, the operators + - * / and parentheses, plus the functions
 * atan(...) and sqrt(...) (needed for the two-particle mass mapping).  It is
 * re-evaluable at any precision: raising precision refines the enclosure of
 * the same real number, so previously certified combinatorial results stay
 * valid.  When the expression simplifies symbolically to a rational multiple
 * of pi the exact pair (p, q) is exposed, which switches on the exact
 * cyclotomic layer downstream.
 */

#include <memory>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "rtb/cyclo.hpp"
#include "rtb/interval.hpp"

namespace rtb {

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        position(pos) {}
};
struct OutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UndecidableRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class AngleSpec {
 public:
  enum class Kind { RationalPi, Decimal, Arithmetic };

  /// Parses the grammar above; throws ParseError with position info.
  static AngleSpec parse(const std::string& text);

  Kind kind() const { return kind_; }
  const std::string& canonical() const { return canonical_; }
  const std::string& source() const { return source_; }

  /// Exact (p, q) with angle = p*pi/q, when kind() == RationalPi.
  std::optional<std::pair<long, long>> rational_pi() const {
    return ratpi_;
  }
  /// Exact rational value (radians), when the expression is pi-free rational.
  std::optional<mpq_class> rational_value() const { return ratval_; }

  /// Certified enclosure of the angle in radians.
  Iv eval(mpfr_prec_t prec) const;

  bool operator==(const AngleSpec& o) const {
    return canonical_ == o.canonical_;
  }

  struct Node;  // expression AST; defined in angle.cpp

 private:
  std::shared_ptr<const Node> root_;
  std::string source_, canonical_;
  Kind kind_ = Kind::Arithmetic;
  std::optional<std::pair<long, long>> ratpi_;
  std::optional<mpq_class> ratval_;
};

/**
 * Triangle/rhombus configuration: the smaller acute angle alpha in
 * (0, pi/4), precision ladder, and (for rational multiples of pi) the exact
 * cyclotomic field of the unfolding rotations.
 *
 * Geometry convention (unit hypotenuse / rhombus side 1): rhombus vertices
 * (+-cos a, 0) and (0, +-sin a); the horizontal diagonal L = [-cos a, cos a]
 * on the x-axis carries the base points of perpendicular orbits; the rhombus
 * center (the right-angle vertex of the triangle) is transparent.
 */
class TriangleConfig {
 public:
  AngleSpec alpha;
  mpfr_prec_t precision_bits = 128;
  mpfr_prec_t max_precision_bits = 1024;
  bool in_theorem_range = false;  // pi/6 < alpha < pi/4, certified

  /// Exact field when alpha is a rational multiple of pi, else null.
  std::shared_ptr<const CycloField> field;

  Iv alpha_iv(mpfr_prec_t prec) const { return alpha.eval(prec); }
  Iv cos_alpha(mpfr_prec_t prec) const { return cos(alpha.eval(prec)); }
  Iv sin_alpha(mpfr_prec_t prec) const { return sin(alpha.eval(prec)); }
};

/// Validates 0 < alpha < pi/4 (certified, escalating to max precision) and
/// derives the configuration.  Throws ParseError / OutOfRange /
/// UndecidableRange.
TriangleConfig make_triangle(const std::string& alpha_spec,
                             mpfr_prec_t precision_bits = 128,
                             mpfr_prec_t max_precision_bits = 1024);

/**
 * Start coordinate on L carried symbolically as r + s*cos(alpha) with r, s
 * rational.  This covers every start the toolkit generates (decimal inputs,
 * t*cos(alpha) sweeps, dyadic midpoints of certified beams) and embeds
 * exactly into both the interval and cyclotomic layers.
 */
struct Coord {
  mpq_class r = 0, s = 0;

  static Coord rational(const mpq_class& q) { return {q, 0}; }
  static Coord times_cos(const mpq_class& q) { return {0, q}; }

  Iv eval(const TriangleConfig& cfg, mpfr_prec_t prec) const {
    Iv v = Iv::from_mpq(r, prec);
    if (s != 0) v = v + Iv::from_mpq(s, prec) * cfg.cos_alpha(prec);
    return v;
  }
  /// Exact embedding r + s*(z + z^-1)/2 when the field is available.
  CycloElt exact(const CycloField* f) const {
    CycloElt e = CycloElt::from_rational(f, r);
    if (s != 0) {
      CycloElt c = (CycloElt::zeta_pow(f, 1) + CycloElt::zeta_pow(f, -1))
                       .scaled(mpq_class(1, 2));
      e = e + c.scaled(s);
    }
    return e;
  }
};

}  // namespace rtb
