#include "rtb/return_map.hpp"

#include <algorithm>
#include <set>

namespace rtb {

namespace {

Iv half_prec_tol(mpfr_prec_t prec) {
  return Iv::pow2(-static_cast<long>(prec / 2), prec);
}

/// probe = lo + t * (hi - lo), carrying the exact layer when both endpoints
/// have one (rational or cyclotomic).
XReal affine_point(const XReal& lo, const XReal& hi, const mpq_class& t,
                   mpfr_prec_t prec) {
  XReal diff = hi - lo;
  Iv enc = lo.enc() + diff.enc() * Iv::from_mpq(t, prec);
  if (diff.ex() == XReal::Ex::Rat && lo.ex() == XReal::Ex::Rat) {
    mpq_class v = lo.rat() + t * diff.rat();
    return XReal(enc, v);
  }
  if (diff.has_exact() && lo.has_exact()) {
    const CycloField* f = diff.ex() == XReal::Ex::Cyc ? diff.cyc().field()
                                                      : lo.cyc().field();
    CycloElt v = lo.as_cyclo(f) + diff.as_cyclo(f).scaled(t);
    return XReal(enc, v);
  }
  return XReal(enc);
}

bool exact_zero(const XReal& x) {
  if (x.ex() == XReal::Ex::Rat) return sgn(x.rat()) == 0;
  if (x.ex() == XReal::Ex::Cyc) return x.cyc().sign() == 0;
  return false;
}

/// Index of the piece whose open source interval certifiably contains both
/// probe points, or -1 when no piece certifies.
int containing_piece(const Iet& iet, const XReal& plo, const XReal& phi) {
  for (size_t j = 0; j < iet.pieces.size(); ++j) {
    const IetPiece& pc = iet.pieces[j];
    if (cmp(pc.src_lo, plo) == Cmp::Less && cmp(phi, pc.src_hi) == Cmp::Less)
      return static_cast<int>(j);
  }
  return -1;
}

}  // namespace

ReturnMapPartition build_return_map(const TriangleConfig& cfg,
                                    const AngleSpec* theta0, int M, int N,
                                    long budget) {
  if (!(M <= 0 && 0 < N))
    throw std::invalid_argument("build_return_map requires M <= 0 < N");
  ReturnMapPartition part;
  part.M = M;
  part.N = N;
  if (theta0) part.theta0 = theta0->canonical();

  auto absorb = [&](const std::vector<Beam>& beams) {
    for (const Beam& b : beams) {
      if (b.degenerate) continue;
      RMInterval r;
      r.lo = b.lo;
      r.hi = b.hi;
      r.code = b.code;
      if (b.returning() && !b.j_reversed) {
        r.returning = true;
        r.jlo = b.jlo;
        r.jhi = b.jhi;
        r.shift = b.jlo.enc() - b.lo.enc();
        r.cls = RMClass::Mclass;  // promoted to P after classification
      } else {
        r.cls = RMClass::U;
        r.jlo = b.lo;
        r.jhi = b.hi;
      }
      part.intervals.push_back(std::move(r));
    }
  };

  StopRule rule = StopRule::band(M, N, budget);
  absorb(propagate_beam(cfg, Coord::times_cos(-1), Coord::rational(0), rule,
                        theta0));
  if (M < 0) {
    absorb(propagate_beam(cfg, Coord::rational(0), Coord::times_cos(1), rule,
                          theta0));
  } else {
    // With M == 0 every orbit entering the negative levels has already left
    // the band; the right half of L is a single band-exit interval.
    mpfr_prec_t prec = cfg.precision_bits;
    GeoCtx ctx(cfg, prec, theta0);
    RMInterval r;
    r.lo = ctx.frame_x(Coord::rational(0));
    r.hi = ctx.frame_x(Coord::times_cos(1));
    r.code = Code{0, -1};
    r.cls = RMClass::U;
    part.intervals.push_back(std::move(r));
  }

  if (part.intervals.empty())
    throw std::runtime_error("return map produced no intervals");

  mpfr_prec_t prec = cfg.precision_bits;
  part.certified_prec = prec;
  part.total_length =
      part.intervals.back().hi.enc() - part.intervals.front().lo.enc();
  part.domain_length = Iv::from_mpq(0, prec);
  for (const RMInterval& r : part.intervals)
    if (r.returning)
      part.domain_length = part.domain_length + (r.hi.enc() - r.lo.enc());

  // Certify periodic components of the ghost completion and promote their
  // returning intervals to class P.  The ghost completion may legitimately
  // fail (LengthMismatch) for oblique or budget-truncated partitions; the
  // partition itself is still valid, so classes then stay M/U.
  try {
    Iet iet = ghost_complete(part);
    std::vector<size_t> piece_to_interval;
    for (size_t i = 0; i < part.intervals.size(); ++i)
      if (part.intervals[i].returning) piece_to_interval.push_back(i);
    std::vector<IetComponent> comps = iet_classify(iet);
    for (const IetComponent& c : comps) {
      if (!c.periodic) continue;
      for (size_t pidx : c.pieces)
        if (pidx < piece_to_interval.size())
          part.intervals[piece_to_interval[pidx]].cls = RMClass::P;
    }
  } catch (const LengthMismatch&) {
  }
  return part;
}

Iet ghost_complete(const ReturnMapPartition& part) {
  Iet iet;
  iet.prec = part.certified_prec ? part.certified_prec : 128;
  Iv tol = half_prec_tol(iet.prec);

  for (const RMInterval& r : part.intervals)
    if (r.returning)
      iet.pieces.push_back(IetPiece{r.lo, r.hi, r.jlo, r.jhi, false});

  // Domain gaps: maximal runs of non-returning intervals, left to right.
  struct Gap {
    XReal lo, hi;
  };
  std::vector<Gap> dom;
  for (size_t i = 0; i < part.intervals.size(); ++i) {
    if (part.intervals[i].returning) continue;
    size_t j = i;
    while (j + 1 < part.intervals.size() &&
           !part.intervals[j + 1].returning)
      ++j;
    dom.push_back(Gap{part.intervals[i].lo, part.intervals[j].hi});
    i = j;
  }

  // Range gaps: complement of the arrival intervals within L.
  std::vector<const IetPiece*> by_dst;
  for (const IetPiece& p : iet.pieces) by_dst.push_back(&p);
  std::sort(by_dst.begin(), by_dst.end(),
            [](const IetPiece* a, const IetPiece* b) {
              return a->dst_lo.enc().mid_d() < b->dst_lo.enc().mid_d();
            });
  std::vector<Gap> ran;
  XReal pos = part.intervals.front().lo;
  for (const IetPiece* p : by_dst) {
    Iv w = p->dst_lo.enc() - pos.enc();
    if (certainly_less(tol, w)) ran.push_back(Gap{pos, p->dst_lo});
    pos = p->dst_hi;
  }
  {
    Iv w = part.intervals.back().hi.enc() - pos.enc();
    if (certainly_less(tol, w))
      ran.push_back(Gap{pos, part.intervals.back().hi});
  }

  if (dom.size() != ran.size())
    throw LengthMismatch("ghost completion: " + std::to_string(dom.size()) +
                         " domain gaps vs " + std::to_string(ran.size()) +
                         " range gaps");
  for (size_t k = 0; k < dom.size(); ++k) {
    Iv dw = dom[k].hi.enc() - dom[k].lo.enc();
    Iv rw = ran[k].hi.enc() - ran[k].lo.enc();
    Iv diff = abs(dw - rw);
    if (certainly_less(tol + tol, diff))
      throw LengthMismatch(
          "ghost completion: paired gap lengths certifiably differ (" +
          diff.lo_str(6) + ")");
    iet.pieces.push_back(
        IetPiece{dom[k].lo, dom[k].hi, ran[k].lo, ran[k].hi, true});
  }
  return iet;
}

std::vector<IetComponent> iet_classify(const Iet& iet, long max_iter) {
  std::vector<IetComponent> comps;
  if (iet.pieces.empty()) return comps;
  Iv tol = half_prec_tol(iet.prec);
  std::vector<int> owner(iet.pieces.size(), -1);

  const mpq_class offsets[] = {mpq_class(1, 2), mpq_class(2, 5),
                               mpq_class(3, 7), mpq_class(5, 11),
                               mpq_class(7, 13)};
  const mpq_class eps(1, 1000);  // probe half-width, in units of piece width

  for (size_t i = 0; i < iet.pieces.size(); ++i) {
    if (owner[i] >= 0) continue;
    bool settled = false;
    for (const mpq_class& t : offsets) {
      if (settled) break;
      const IetPiece& start = iet.pieces[i];
      XReal plo = affine_point(start.src_lo, start.src_hi, t - eps, iet.prec);
      XReal phi = affine_point(start.src_lo, start.src_hi, t + eps, iet.prec);
      XReal acc = plo - plo;  // exact zero in whatever layer plo carries
      std::set<size_t> visited{i};
      bool ok = true;
      long steps = 0;
      int merged_into = -1;
      bool periodic = false;
      while (steps < max_iter) {
        int j = containing_piece(iet, plo, phi);
        if (j < 0) {
          ok = false;
          break;
        }
        if (steps > 0 && owner[j] >= 0) {
          merged_into = owner[j];
          break;
        }
        visited.insert(static_cast<size_t>(j));
        XReal shift = iet.pieces[j].dst_lo - iet.pieces[j].src_lo;
        plo = plo + shift;
        phi = phi + shift;
        acc = acc + shift;
        ++steps;
        // returned into the starting piece?
        if (cmp(iet.pieces[i].src_lo, plo) == Cmp::Less &&
            cmp(phi, iet.pieces[i].src_hi) == Cmp::Less) {
          if (exact_zero(acc) ||
              (acc.enc().contains_zero() &&
               certainly_less(abs(acc.enc()), tol))) {
            periodic = true;
            break;
          }
        }
      }
      if (!ok) continue;  // probe landed on a boundary; try another offset
      if (merged_into >= 0) {
        for (size_t v : visited) {
          owner[v] = merged_into;
          auto& ps = comps[merged_into].pieces;
          if (std::find(ps.begin(), ps.end(), v) == ps.end()) ps.push_back(v);
        }
        settled = true;
        break;
      }
      IetComponent c;
      c.pieces.assign(visited.begin(), visited.end());
      c.periodic = periodic;
      c.period = periodic ? steps : 0;
      int id = static_cast<int>(comps.size());
      for (size_t v : visited) owner[v] = id;
      comps.push_back(std::move(c));
      settled = true;
    }
    if (!settled) {
      // every probe failed to certify: isolated unresolved component
      IetComponent c;
      c.pieces = {i};
      owner[i] = static_cast<int>(comps.size());
      comps.push_back(std::move(c));
    }
  }
  for (auto& c : comps) std::sort(c.pieces.begin(), c.pieces.end());
  return comps;
}

}  // namespace rtb
