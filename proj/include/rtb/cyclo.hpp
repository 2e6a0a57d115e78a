#pragma once
/**
 * @file cyclo.hpp
 * @brief Exact arithmetic in the cyclotomic field generated by e^{i*alpha}
 *        when alpha is a rational multiple of pi.
 *
 * For alpha = p*pi/q the rotation z = e^{i*alpha} is a root of unity of order
 * n = 2q / gcd(p, 2q).  All complex coordinates produced by the unfolding
 * (vertex images, copy translations, start points of the form r + s*cos alpha)
 * live in Q(z), represented here as length-n rational coefficient vectors
 * modulo z^n - 1.  Equality is decidable: an element is zero in the field iff
 * its representative polynomial is divisible by the n-th cyclotomic
 * polynomial.  The sign of a nonzero real element is obtained by interval
 * evaluation at escalating precision (guaranteed to terminate).
 *
 * This layer exists because at rational angles beam-splitting comparisons can
 * be exact algebraic coincidences that no finite interval precision separates.
 */

#include <gmpxx.h>

#include <memory>
#include <numeric>
#include <vector>

#include "rtb/interval.hpp"

namespace rtb {

/// Integer polynomial helpers used to build the cyclotomic polynomial.
namespace detail {
// Divides a by b exactly (monic integer b), returning the quotient.
inline std::vector<mpz_class> exact_div(std::vector<mpz_class> a,
                                        const std::vector<mpz_class>& b) {
  std::vector<mpz_class> q(a.size() - b.size() + 1, 0);
  for (long i = static_cast<long>(a.size()) - 1;
       i >= static_cast<long>(b.size()) - 1; --i) {
    mpz_class c = a[i];  // b is monic
    q[i - (b.size() - 1)] = c;
    if (c == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) a[i - (b.size() - 1) + j] -= c * b[j];
  }
  return q;
}
}  // namespace detail

/// Coefficients of the n-th cyclotomic polynomial Phi_n (ascending, monic).
inline std::vector<mpz_class> cyclotomic_poly(unsigned n) {
  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
  std::vector<mpz_class> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (unsigned d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    num = detail::exact_div(std::move(num), cyclotomic_poly(d));
  }
  return num;
}

/// The ambient field Q(zeta_n) for a fixed angle p*pi/q.
class CycloField {
 public:
  CycloField(long p, long q) : p_(p), q_(q) {
    long g = std::gcd(p, 2 * q);
    n_ = static_cast<unsigned>(2 * q / g);
    phi_ = cyclotomic_poly(n_);
  }
  unsigned n() const { return n_; }
  long p() const { return p_; }
  long q() const { return q_; }
  const std::vector<mpz_class>& phi() const { return phi_; }

  /// Smallest m > 0 with 2*m*alpha a multiple of pi (horizontal-diagonal
  /// period of the unfolding levels).
  long diagonal_period() const { return q_ / std::gcd(2 * p_, q_); }

 private:
  long p_, q_;
  unsigned n_;
  std::vector<mpz_class> phi_;
};

/// Element of Q(zeta_n): polynomial in zeta with rational coefficients,
/// reduced modulo zeta^n - 1 (cheap); zero-test reduces modulo Phi_n.
class CycloElt {
 public:
  CycloElt() = default;
  explicit CycloElt(const CycloField* f) : f_(f), c_(f->n(), 0) {}

  static CycloElt from_rational(const CycloField* f, const mpq_class& q) {
    CycloElt e(f);
    e.c_[0] = q;
    return e;
  }
  /// zeta^k (k may be negative).
  static CycloElt zeta_pow(const CycloField* f, long k) {
    CycloElt e(f);
    long n = f->n();
    long i = ((k % n) + n) % n;
    e.c_[i] = 1;
    return e;
  }

  const CycloField* field() const { return f_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  friend CycloElt operator+(const CycloElt& a, const CycloElt& b) {
    CycloElt r(a.f_);
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
  }
  friend CycloElt operator-(const CycloElt& a, const CycloElt& b) {
    CycloElt r(a.f_);
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
  }
  friend CycloElt operator-(const CycloElt& a) {
    CycloElt r(a.f_);
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = -a.c_[i];
    return r;
  }
  friend CycloElt operator*(const CycloElt& a, const CycloElt& b) {
    CycloElt r(a.f_);
    size_t n = r.c_.size();
    for (size_t i = 0; i < n; ++i) {
      if (a.c_[i] == 0) continue;
      for (size_t j = 0; j < n; ++j) {
        if (b.c_[j] == 0) continue;
        r.c_[(i + j) % n] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }
  CycloElt scaled(const mpq_class& s) const {
    CycloElt r(f_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
    return r;
  }
  /// Multiply by zeta^k: cyclic coefficient shift.
  CycloElt zmul(long k) const {
    CycloElt r(f_);
    long n = static_cast<long>(c_.size());
    long s = ((k % n) + n) % n;
    for (long i = 0; i < n; ++i) r.c_[(i + s) % n] = c_[i];
    return r;
  }
  /// Complex conjugation: zeta -> zeta^{-1}.
  CycloElt conj() const {
    CycloElt r(f_);
    long n = static_cast<long>(c_.size());
    for (long i = 0; i < n; ++i) r.c_[(n - i) % n] = c_[i];
    return r;
  }
  /// Real part as a field element: (a + conj a) / 2.
  CycloElt real_part() const { return (*this + conj()).scaled(mpq_class(1, 2)); }
  CycloElt imag_unit_times_im() const {  // (a - conj a)/2 = i * Im(a)
    return (*this - conj()).scaled(mpq_class(1, 2));
  }

  /// Exact zero test: remainder modulo Phi_n vanishes.
  bool is_zero() const {
    std::vector<mpq_class> r(c_);
    const auto& phi = f_->phi();
    size_t dp = phi.size() - 1;  // degree of Phi_n, monic
    for (long i = static_cast<long>(r.size()) - 1;
         i >= static_cast<long>(dp); --i) {
      if (r[i] == 0) continue;
      mpq_class c = r[i];
      for (size_t j = 0; j < phi.size(); ++j)
        r[i - dp + j] -= c * mpq_class(phi[j]);
    }
    for (size_t i = 0; i < dp; ++i)
      if (r[i] != 0) return false;
    return true;
  }

  friend bool operator==(const CycloElt& a, const CycloElt& b) {
    return (a - b).is_zero();
  }

  /// Interval enclosure of the complex value at the given precision.
  Cv enclose(mpfr_prec_t prec) const {
    // alpha = p*pi/q exactly; zeta^j = e^{i j alpha'} with alpha' = 2pi/n...
    // We evaluate powers of z = e^{i alpha} directly: coefficient index j
    // corresponds to z^j where z has argument p*pi/q.
    Iv api = Iv::pi(prec) * Iv::from_mpq(mpq_class(f_->p(), f_->q()), prec);
    Cv acc = Cv::zero(prec);
    for (size_t j = 0; j < c_.size(); ++j) {
      if (c_[j] == 0) continue;
      Iv arg = api * Iv(static_cast<long>(j), prec);
      Cv zj(cos(arg), sin(arg));
      Iv cj = Iv::from_mpq(c_[j], prec);
      acc = acc + Cv(zj.re * cj, zj.im * cj);
    }
    return acc;
  }

  /// Certified sign of a real element (caller guarantees self-conjugacy).
  /// Exact zero first; otherwise escalate precision until the enclosure of the
  /// real part excludes zero.
  int sign() const {
    if (is_zero()) return 0;
    for (mpfr_prec_t prec = 64;; prec *= 2) {
      Iv re = enclose(prec).re;
      if (!re.contains_zero()) return mpfr_sgn(re.lo()) > 0 ? 1 : -1;
      if (prec > (1L << 22))
        throw std::runtime_error("cyclotomic sign: precision runaway");
    }
  }

 private:
  const CycloField* f_ = nullptr;
  std::vector<mpq_class> c_;
};

}  // namespace rtb
