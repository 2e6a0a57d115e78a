#pragma once
/**
 * @file interval.hpp
 * @brief Directed-rounding interval arithmetic over MPFR.
 *
 * Every geometric decision in the toolkit must be backed by a certified
 * enclosure: an Iv carries [lo, hi] with lo rounded down and hi rounded up at
 * every operation, so the true real value is always contained.  Comparisons
 * return a definite answer only when the enclosures are disjoint; callers
 * escalate precision otherwise.
 *
 * Precision is carried per value (mpfr precision of the endpoints); binary
 * operations produce results at the larger operand precision.
 */

#include <mpfr.h>
#include <gmpxx.h>

#include <cassert>
#include <stdexcept>
#include <string>
#include <utility>

namespace rtb {

/// Tri-state outcome of a certified comparison.
enum class Cmp { Less, Greater, Equal, Unknown };

/// Thrown when a branch decision cannot be certified at the current working
/// precision; drivers catch it and rerun at doubled precision up to a cap.
struct NeedsPrecision : std::runtime_error {
  explicit NeedsPrecision(const std::string& what) : std::runtime_error(what) {}
};

class Iv {
 public:
  explicit Iv(mpfr_prec_t prec = 64) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }
  Iv(long v, mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_si(lo_, v, MPFR_RNDD);
    mpfr_set_si(hi_, v, MPFR_RNDU);
  }
  Iv(const Iv& o) {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  Iv(Iv&& o) noexcept {
    mpfr_init2(lo_, 2);
    mpfr_init2(hi_, 2);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }
  Iv& operator=(const Iv& o) {
    if (this != &o) {
      mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
      mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
      mpfr_set(lo_, o.lo_, MPFR_RNDD);
      mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
  }
  Iv& operator=(Iv&& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
  }
  ~Iv() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static Iv from_decimal(const std::string& s, mpfr_prec_t prec) {
    Iv r(prec);
    if (mpfr_set_str(r.lo_, s.c_str(), 10, MPFR_RNDD) != 0 &&
        mpfr_nan_p(r.lo_))
      throw std::invalid_argument("bad decimal literal: " + s);
    mpfr_set_str(r.hi_, s.c_str(), 10, MPFR_RNDU);
    return r;
  }
  static Iv from_mpq(const mpq_class& q, mpfr_prec_t prec) {
    Iv r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
  }
  static Iv pi(mpfr_prec_t prec) {
    Iv r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
  }
  /// Exact point interval from a double (doubles are dyadic rationals).
  static Iv from_double(double d, mpfr_prec_t prec) {
    Iv r(prec);
    mpfr_set_d(r.lo_, d, MPFR_RNDD);
    mpfr_set_d(r.hi_, d, MPFR_RNDU);
    return r;
  }
  static Iv hull(const Iv& a, const Iv& b) {
    Iv r(std::max(a.prec(), b.prec()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(lo_); }
  const mpfr_t& lo() const { return lo_; }
  const mpfr_t& hi() const { return hi_; }
  double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid_d() const { return 0.5 * (lo_d() + hi_d()); }

  bool is_point() const { return mpfr_equal_p(lo_, hi_); }
  bool contains_zero() const {
    return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
  }
  /// -1 certified negative, +1 certified positive, 0 undecided (straddles 0).
  int sign() const {
    if (mpfr_sgn(hi_) < 0) return -1;
    if (mpfr_sgn(lo_) > 0) return 1;
    if (mpfr_zero_p(lo_) && mpfr_zero_p(hi_)) return 0;  // exactly zero
    return 0;
  }
  bool is_exact_zero() const { return mpfr_zero_p(lo_) && mpfr_zero_p(hi_); }

  /// Exact midpoint as a rational (dyadic); used to pick representative rays.
  mpq_class mid_q() const {
    mpfr_t m;
    mpfr_init2(m, prec() + 8);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), m);
    mpfr_clear(m);
    return q;
  }
  /// Upper bound on the width, rounded up.
  Iv width() const {
    Iv r(prec());
    mpfr_sub(r.lo_, hi_, lo_, MPFR_RNDD);
    if (mpfr_sgn(r.lo_) < 0) mpfr_set_zero(r.lo_, 1);
    mpfr_sub(r.hi_, hi_, lo_, MPFR_RNDU);
    return r;
  }
  double width_d() const {
    mpfr_t w;
    mpfr_init2(w, 64);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
  }

  friend Iv operator+(const Iv& a, const Iv& b) {
    Iv r(std::max(a.prec(), b.prec()));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  friend Iv operator-(const Iv& a, const Iv& b) {
    Iv r(std::max(a.prec(), b.prec()));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }
  friend Iv operator-(const Iv& a) {
    Iv r(a.prec());
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
  }
  friend Iv operator*(const Iv& a, const Iv& b) {
    mpfr_prec_t p = std::max(a.prec(), b.prec());
    Iv r(p);
    mpfr_t t;
    mpfr_init2(t, p);
    // lo: minimum of the four products rounded down
    mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    // hi: maximum of the four products rounded up
    mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
    mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
  }
  /// Division requires a certified-nonzero denominator.
  friend Iv operator/(const Iv& a, const Iv& b) {
    if (b.contains_zero() && !b.is_exact_zero())
      throw NeedsPrecision("division by interval straddling zero");
    if (b.is_exact_zero()) throw std::domain_error("division by zero interval");
    mpfr_prec_t p = std::max(a.prec(), b.prec());
    Iv r(p);
    mpfr_t t;
    mpfr_init2(t, p);
    mpfr_div(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_div(t, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_div(t, a.hi_, b.lo_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_div(t, a.hi_, b.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_div(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
    mpfr_div(t, a.lo_, b.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_div(t, a.hi_, b.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_div(t, a.hi_, b.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
  }

  friend Iv abs(const Iv& a) {
    Iv r(a.prec());
    if (mpfr_sgn(a.lo_) >= 0) return a;
    if (mpfr_sgn(a.hi_) <= 0) return -a;
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }
  friend Iv sqrt(const Iv& a) {
    if (mpfr_sgn(a.lo_) < 0) throw std::domain_error("sqrt of negative");
    Iv r(a.prec());
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }
  friend Iv atan(const Iv& a) {  // monotone increasing
    Iv r(a.prec());
    mpfr_atan(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_atan(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  /// Sound sin enclosure: endpoint values with directed rounding, widened by
  /// the argument width (|sin'| <= 1).  Never tight around extrema but always
  /// correct, and our arguments are near-point intervals.
  friend Iv sin(const Iv& a) { return trig_(a, mpfr_sin); }
  friend Iv cos(const Iv& a) { return trig_(a, mpfr_cos); }

  friend Cmp cmp(const Iv& a, const Iv& b) {
    if (mpfr_less_p(a.hi_, b.lo_)) return Cmp::Less;
    if (mpfr_greater_p(a.lo_, b.hi_)) return Cmp::Greater;
    if (a.is_point() && b.is_point() && mpfr_equal_p(a.lo_, b.lo_))
      return Cmp::Equal;
    return Cmp::Unknown;
  }
  friend bool certainly_less(const Iv& a, const Iv& b) {
    return mpfr_less_p(a.hi_, b.lo_);
  }
  friend bool certainly_leq(const Iv& a, const Iv& b) {
    return mpfr_lessequal_p(a.hi_, b.lo_);
  }
  /// True iff every point of a is <= every point of b OR the two enclosures
  /// are the same point.
  friend bool subset(const Iv& inner, const Iv& outer) {
    return mpfr_greaterequal_p(inner.lo_, outer.lo_) &&
           mpfr_lessequal_p(inner.hi_, outer.hi_);
  }
  friend bool overlap(const Iv& a, const Iv& b) {
    return !(mpfr_less_p(a.hi_, b.lo_) || mpfr_less_p(b.hi_, a.lo_));
  }

  /// Outward-rounded decimal strings (enclosure soundness for export).
  std::string lo_str(int digits = 20) const { return str_(lo_, MPFR_RNDD, digits); }
  std::string hi_str(int digits = 20) const { return str_(hi_, MPFR_RNDU, digits); }

  /// 2^-k as an exact interval at this precision.
  static Iv pow2(long k, mpfr_prec_t prec) {
    Iv r(prec);
    mpfr_set_ui_2exp(r.lo_, 1, k, MPFR_RNDD);
    mpfr_set_ui_2exp(r.hi_, 1, k, MPFR_RNDU);
    return r;
  }

 private:
  static std::string str_(const mpfr_t& v, mpfr_rnd_t rnd, int digits) {
    char buf[128];
    mpfr_snprintf(buf, sizeof buf, "%.*R*g", digits, rnd, v);
    return buf;
  }
  static Iv trig_(const Iv& a, int (*f)(mpfr_t, const mpfr_t, mpfr_rnd_t)) {
    mpfr_prec_t p = a.prec();
    Iv r(p);
    mpfr_t t, w;
    mpfr_init2(t, p);
    mpfr_init2(w, p);
    f(r.lo_, a.lo_, MPFR_RNDD);
    f(t, a.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    f(r.hi_, a.lo_, MPFR_RNDU);
    f(t, a.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    // widen by the argument width; derivative bounded by 1
    mpfr_sub(w, a.hi_, a.lo_, MPFR_RNDU);
    mpfr_sub(r.lo_, r.lo_, w, MPFR_RNDD);
    mpfr_add(r.hi_, r.hi_, w, MPFR_RNDU);
    // clamp to [-1, 1]
    mpfr_t one;
    mpfr_init2(one, p);
    mpfr_set_si(one, -1, MPFR_RNDD);
    mpfr_max(r.lo_, r.lo_, one, MPFR_RNDD);
    mpfr_set_si(one, 1, MPFR_RNDU);
    mpfr_min(r.hi_, r.hi_, one, MPFR_RNDU);
    mpfr_clear(one);
    mpfr_clear(t);
    mpfr_clear(w);
    return r;
  }

  mpfr_t lo_, hi_;
};

/// Rectangular complex interval.
struct Cv {
  Iv re, im;
  Cv() = default;
  Cv(Iv r, Iv i) : re(std::move(r)), im(std::move(i)) {}
  static Cv zero(mpfr_prec_t prec) { return {Iv(0L, prec), Iv(0L, prec)}; }
  static Cv one(mpfr_prec_t prec) { return {Iv(1L, prec), Iv(0L, prec)}; }
  Cv conj() const { return {re, -im}; }
  friend Cv operator+(const Cv& a, const Cv& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Cv operator-(const Cv& a, const Cv& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Cv operator-(const Cv& a) { return {-a.re, -a.im}; }
  friend Cv operator*(const Cv& a, const Cv& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
};

}  // namespace rtb
