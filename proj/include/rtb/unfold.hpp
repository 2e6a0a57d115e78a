#pragma once
/**
 * @file unfold.hpp
 * @brief Geometric kernel of the unfolding: certified numbers, copy frames,
 *        and the reflection step shared by ray tracing and beam propagation.
 *
 * Rays are normalized to vertical lines: for direction theta the whole
 * picture is pre-rotated by phi0 = pi/2 - theta, so a ray is identified by a
 * single x coordinate in the rotated frame.  A copy of the rhombus is stored
 * as (level, reversed?, v) where the isometry is
 *     w  ->  e^{i phi0} * z^{2 level} * (conj?) w + v,      z = e^{i alpha};
 * only the translation v accumulates rounding, the rotation part is exact by
 * construction.  Crossing an edge of the family with line angle +alpha
 * raises the level from a preserving copy and lowers it from a reversing one
 * (the fixed sign convention; see README).
 *
 * Every number that feeds a branch decision is an XReal: an interval
 * enclosure plus, when available, an exact value (rational, or cyclotomic
 * when alpha is a rational multiple of pi and the direction is
 * perpendicular).  Comparisons certify via the enclosure first and fall back
 * to exact zero-tests, so equalities (vertex hits, coincident splits) are
 * decidable exactly at rational angles.
 */

#include <array>
#include <map>
#include <optional>

#include "rtb/angle.hpp"
#include "rtb/cyclo.hpp"
#include "rtb/interval.hpp"

namespace rtb {

/// Certified real number: enclosure plus optional exact value.
class XReal {
 public:
  enum class Ex { None, Rat, Cyc };

  XReal() : enc_(64) {}
  explicit XReal(Iv enc) : enc_(std::move(enc)) {}
  XReal(Iv enc, mpq_class q) : enc_(std::move(enc)), ex_(Ex::Rat), q_(std::move(q)) {}
  XReal(Iv enc, CycloElt c) : enc_(std::move(enc)), ex_(Ex::Cyc), c_(std::move(c)) {}

  const Iv& enc() const { return enc_; }
  Ex ex() const { return ex_; }
  const mpq_class& rat() const { return q_; }
  const CycloElt& cyc() const { return c_; }
  bool has_exact() const { return ex_ != Ex::None; }

  /// Promotes a rational to a cyclotomic element of f; no-op otherwise.
  CycloElt as_cyclo(const CycloField* f) const {
    return ex_ == Ex::Cyc ? c_ : CycloElt::from_rational(f, q_);
  }

  friend XReal operator+(const XReal& a, const XReal& b) {
    return combine_(a, b, a.enc_ + b.enc_, /*sub=*/false);
  }
  friend XReal operator-(const XReal& a, const XReal& b) {
    return combine_(a, b, a.enc_ - b.enc_, /*sub=*/true);
  }
  friend XReal operator-(const XReal& a) {
    XReal r(-a.enc_);
    if (a.ex_ == Ex::Rat) {
      r.ex_ = Ex::Rat;
      r.q_ = -a.q_;
    } else if (a.ex_ == Ex::Cyc) {
      r.ex_ = Ex::Cyc;
      r.c_ = -a.c_;
    }
    return r;
  }

  /// Certified three-way comparison.  Equal is returned only when exactly
  /// certain (disjointness failed but the exact difference is zero, or both
  /// enclosures are the same point).
  friend Cmp cmp(const XReal& a, const XReal& b) {
    Cmp c = cmp(a.enc_, b.enc_);
    if (c != Cmp::Unknown) return c;
    if (a.has_exact() && b.has_exact()) {
      if (a.ex_ == Ex::Rat && b.ex_ == Ex::Rat) {
        mpq_class d = a.q_ - b.q_;
        int s = sgn(d);
        return s == 0 ? Cmp::Equal : (s < 0 ? Cmp::Less : Cmp::Greater);
      }
      const CycloField* f = a.ex_ == Ex::Cyc ? a.c_.field() : b.c_.field();
      int s = (a.as_cyclo(f) - b.as_cyclo(f)).sign();
      return s == 0 ? Cmp::Equal : (s < 0 ? Cmp::Less : Cmp::Greater);
    }
    return Cmp::Unknown;
  }

 private:
  static XReal combine_(const XReal& a, const XReal& b, Iv enc, bool sub) {
    XReal r(std::move(enc));
    if (a.ex_ == Ex::None || b.ex_ == Ex::None) return r;
    if (a.ex_ == Ex::Rat && b.ex_ == Ex::Rat) {
      r.ex_ = Ex::Rat;
      r.q_ = sub ? mpq_class(a.q_ - b.q_) : mpq_class(a.q_ + b.q_);
    } else {
      const CycloField* f = a.ex_ == Ex::Cyc ? a.c_.field() : b.c_.field();
      r.ex_ = Ex::Cyc;
      r.c_ = sub ? a.as_cyclo(f) - b.as_cyclo(f) : a.as_cyclo(f) + b.as_cyclo(f);
    }
    return r;
  }

  Iv enc_;
  Ex ex_ = Ex::None;
  mpq_class q_;
  CycloElt c_;
};

/// Certified complex number used for copy translations and vertex images.
struct XComplex {
  Cv enc;
  std::optional<CycloElt> ex;

  XComplex() : enc(Cv::zero(64)) {}
  explicit XComplex(Cv e) : enc(std::move(e)) {}
  XComplex(Cv e, CycloElt c) : enc(std::move(e)), ex(std::move(c)) {}

  XComplex conj() const {
    XComplex r(enc.conj());
    if (ex) r.ex = ex->conj();
    return r;
  }
  friend XComplex operator+(const XComplex& a, const XComplex& b) {
    XComplex r(a.enc + b.enc);
    if (a.ex && b.ex) r.ex = *a.ex + *b.ex;
    return r;
  }
  friend XComplex operator-(const XComplex& a, const XComplex& b) {
    XComplex r(a.enc - b.enc);
    if (a.ex && b.ex) r.ex = *a.ex - *b.ex;
    return r;
  }
  XReal re() const {
    if (ex) return XReal(enc.re, ex->real_part());
    return XReal(enc.re);
  }
};

/// Base rhombus combinatorics: vertices V0=(c,0) V1=(0,s) V2=(-c,0)
/// V3=(0,-s); edge e_i joins V_i and V_{i+1 mod 4}; edges {e1, e3} lie on
/// lines of angle +alpha.
inline constexpr std::array<std::pair<int, int>, 4> kEdges{
    {{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
inline constexpr std::array<bool, 4> kPlusFamily{false, true, false, true};

/// Per-(config, precision, direction) evaluation context: caches the base
/// vertices, rotation powers and the pre-rotation phase.
class GeoCtx {
 public:
  GeoCtx(const TriangleConfig& cfg, mpfr_prec_t prec,
         const AngleSpec* theta = nullptr)
      : cfg_(cfg), prec_(prec), alpha_(cfg.alpha.eval(prec)) {
    perp_ = theta == nullptr;
    field_ = perp_ ? cfg.field.get() : nullptr;
    Iv c = cos(alpha_), s = sin(alpha_);
    if (!perp_) {
      Iv phi0 = Iv::pi(prec) * Iv::from_mpq(mpq_class(1, 2), prec) -
                theta->eval(prec);
      phase1_ = Cv(cos(phi0), sin(phi0));
      Iv two_phi0 = phi0 + phi0;
      phase2_ = Cv(cos(two_phi0), sin(two_phi0));
      cos_phi0_ = phase1_->re;
    }
    // base vertices as complex numbers: V0 = c, V1 = i s, V2 = -c, V3 = -i s
    Iv zero(0L, prec);
    bv_[0] = XComplex(Cv(c, zero));
    bv_[1] = XComplex(Cv(zero, s));
    bv_[2] = XComplex(Cv(-c, zero));
    bv_[3] = XComplex(Cv(zero, -s));
    if (field_) {
      const CycloField* f = field_;
      CycloElt half = CycloElt::from_rational(f, mpq_class(1, 2));
      CycloElt z1 = CycloElt::zeta_pow(f, 1), zm1 = CycloElt::zeta_pow(f, -1);
      CycloElt cex = (z1 + zm1).scaled(mpq_class(1, 2));   // cos a
      CycloElt isex = (z1 - zm1).scaled(mpq_class(1, 2));  // i sin a
      (void)half;
      bv_[0].ex = cex;
      bv_[1].ex = isex;
      bv_[2].ex = -cex;
      bv_[3].ex = -isex;
    }
  }

  const TriangleConfig& cfg() const { return cfg_; }
  mpfr_prec_t prec() const { return prec_; }
  bool perpendicular() const { return perp_; }
  const CycloField* field() const { return field_; }
  const Iv& alpha() const { return alpha_; }
  const XComplex& base_vertex(int i) const { return bv_[i]; }
  /// cos(phi0); scale between L-parameter and rotated-frame x.
  Iv cos_phi0() const { return perp_ ? Iv(1L, prec_) : *cos_phi0_; }

  /// Enclosure of z^k = e^{i k alpha} (memoized).
  const Cv& zpow(long k) {
    auto it = zpow_.find(k);
    if (it != zpow_.end()) return it->second;
    Iv arg = alpha_ * Iv(k, prec_);
    return zpow_.emplace(k, Cv(cos(arg), sin(arg))).first->second;
  }

  /// Multiplication by z^k (exact part: cyclic shift).
  XComplex zmul(const XComplex& w, long k) {
    XComplex r(zpow(k) * w.enc);
    if (w.ex) r.ex = w.ex->zmul(k);
    return r;
  }
  /// Applies the pre-rotation phase e^{i phi0} (identity when perpendicular).
  XComplex phased(const XComplex& w) const {
    if (perp_) return w;
    XComplex r(*phase1_ * w.enc);
    return r;  // exact layer is only carried in the perpendicular case
  }
  XComplex phased2(const XComplex& w) const {
    if (perp_) return w;
    return XComplex(*phase2_ * w.enc);
  }

  XComplex zero_complex() const {
    XComplex r(Cv::zero(prec_));
    if (field_) r.ex = CycloElt(field_);
    return r;
  }

  /// Start coordinate in the rotated frame: t * cos(phi0).
  XReal frame_x(const Coord& t) const {
    Iv enc = t.eval(cfg_, prec_);
    if (!perp_) return XReal(enc * cos_phi0());
    if (field_) return XReal(enc, t.exact(field_));
    if (t.s == 0) return XReal(enc, t.r);
    return XReal(enc);
  }

 private:
  const TriangleConfig& cfg_;
  mpfr_prec_t prec_;
  Iv alpha_;
  bool perp_;
  const CycloField* field_;
  std::array<XComplex, 4> bv_;
  std::optional<Cv> phase1_, phase2_;
  std::optional<Iv> cos_phi0_;
  std::map<long, Cv> zpow_;
};

/// One unfolded copy of the rhombus.
struct CopyState {
  int level = 0;
  bool rev = false;
  XComplex v;
  int step = 0;  // number of copies traversed before this one

  static CopyState base(GeoCtx& ctx) {
    CopyState c;
    c.v = ctx.zero_complex();
    return c;
  }
};

/// Rotated/reflected base vertex j for a copy at the given level and
/// orientation, before the translation v is applied.
inline XComplex vertex_offset(GeoCtx& ctx, int level, bool rev, int j) {
  XComplex w = ctx.base_vertex(j);
  if (rev) w = w.conj();
  w = ctx.zmul(w, 2L * level);
  w = ctx.phased(w);
  return w;
}

/// Image of base vertex j under the copy's isometry.
inline XComplex vertex_image(GeoCtx& ctx, const CopyState& cp, int j) {
  return vertex_offset(ctx, cp.level, cp.rev, j) + cp.v;
}

/// Level change when crossing base edge e of this copy.
inline int level_delta(const CopyState& cp, int e) {
  bool plus = kPlusFamily[e];
  if (cp.rev) plus = !plus;
  return plus ? 1 : -1;
}

/// The copy across the image of base edge e: reflect the isometry in the
/// shared edge line.  Both copies place a shared-edge vertex at the same
/// point, v + off(old) = v' + off(new), which fixes the new translation
/// without any correlated interval subtraction (the naive
/// v' = P + e^{2 i phi0} z^{2(m+m')} conj(v - P) doubles the enclosure
/// width at every step because P itself contains v).
inline CopyState reflect_copy(GeoCtx& ctx, const CopyState& cp, int e) {
  int j = kEdges[e].first;
  CopyState out;
  out.level = cp.level + level_delta(cp, e);
  out.rev = !cp.rev;
  out.v = cp.v + vertex_offset(ctx, cp.level, cp.rev, j) -
          vertex_offset(ctx, out.level, out.rev, j);
  out.step = cp.step + 1;
  return out;
}

}  // namespace rtb
