#include "rtb/beam.hpp"

#include <algorithm>
#include <limits>

namespace rtb {

namespace {

/// Provenance of a piece endpoint: the (path step, base vertex) of the
/// vertex shadow it was cut at.  Sub-pieces inherit the whole path, so a
/// candidate shadow with a matching tag *is* the endpoint exactly, and no
/// interval comparison could ever separate the two.
struct EndTag {
  int step = -1;
  int vertex = -1;
  bool matches(int step_, int vertex_) const {
    return step == step_ && vertex == vertex_;
  }
};

struct Piece {
  XReal a, b;
  EndTag a_tag, b_tag;
  CopyState cp;
  int entry = -1;  // -1 before the first crossing
  Code code;
  std::vector<CenterHit> centers;
};

struct BeamStop {
  // LevelEdge when the level reaches either bound (one side may be sentinel).
  int hi_level = std::numeric_limits<int>::max();
  int lo_level = std::numeric_limits<int>::min();
  // Rational angles: nonzero multiples of the diagonal period are returns
  // through a horizontal diagonal image (perpendicular propagation only).
  int diag_period = 0;
  // Immediate LevelEdge cut-offs one step outside a seed family's range, so
  // canonical-seed pieces leaving the band away from level 0 do not burn the
  // whole step budget before being filtered out.
  int hi_abort = std::numeric_limits<int>::max();
  int lo_abort = std::numeric_limits<int>::min();
  long budget = 200000;
};

/// Representative interior point of (a, b), certified strictly inside.
XReal interior_point(const XReal& a, const XReal& b, mpfr_prec_t prec) {
  mpq_class m = Iv::hull(a.enc(), b.enc()).mid_q();
  XReal xm(Iv::from_mpq(m, prec), m);
  if (cmp(a, xm) != Cmp::Less || cmp(xm, b) != Cmp::Less)
    throw NeedsPrecision("beam interval too thin for a certified midpoint");
  return xm;
}

/// Exit edge for the vertical ray xm through copy cp (entry >= 0 case): the
/// unique non-entry edge whose open x-range certifiably contains xm.
int exit_edge(GeoCtx& ctx, const CopyState& cp, int entry, const XReal& xm) {
  bool unknown = false;
  for (int e = 0; e < 4; ++e) {
    if (e == entry) continue;
    Cmp ca = cmp(xm, vertex_image(ctx, cp, kEdges[e].first).re());
    Cmp cb = cmp(xm, vertex_image(ctx, cp, kEdges[e].second).re());
    if (ca == Cmp::Unknown || cb == Cmp::Unknown) {
      unknown = true;
      continue;
    }
    if (ca != cb && ca != Cmp::Equal && cb != Cmp::Equal) return e;
  }
  throw NeedsPrecision(unknown ? "beam exit edge selection"
                               : "no exit edge certified for beam");
}

/// Crossing height of the vertical ray xm on edge e of copy cp.
Iv crossing_y(GeoCtx& ctx, const CopyState& cp, int e, const XReal& xm) {
  XComplex P = vertex_image(ctx, cp, kEdges[e].first);
  XComplex Q = vertex_image(ctx, cp, kEdges[e].second);
  Iv t = (xm.enc() - P.enc.re) / (Q.enc.re - P.enc.re);
  return P.enc.im + t * (Q.enc.im - P.enc.im);
}

/// For a seed copy entered from outside the unfolding chain (entry == -1,
/// level != 0): the exit is the containing edge with the higher crossing.
int exit_edge_upper(GeoCtx& ctx, const CopyState& cp, const XReal& xm) {
  int best = -1;
  std::optional<Iv> best_y;
  bool unknown = false;
  for (int e = 0; e < 4; ++e) {
    Cmp ca = cmp(xm, vertex_image(ctx, cp, kEdges[e].first).re());
    Cmp cb = cmp(xm, vertex_image(ctx, cp, kEdges[e].second).re());
    if (ca == Cmp::Unknown || cb == Cmp::Unknown) {
      unknown = true;
      continue;
    }
    if (!(ca != cb && ca != Cmp::Equal && cb != Cmp::Equal)) continue;
    Iv y = crossing_y(ctx, cp, e, xm);
    if (!best_y) {
      best = e;
      best_y = y;
    } else if (certainly_less(*best_y, y)) {
      best = e;
      best_y = y;
    } else if (!certainly_less(y, *best_y)) {
      throw NeedsPrecision("upper-crossing comparison");
    }
  }
  if (best < 0)
    throw NeedsPrecision(unknown ? "seed exit edge selection"
                                 : "no seed exit edge certified");
  return best;
}

std::string coord_str(const XReal& x) {
  return "[" + x.enc().lo_str(17) + ", " + x.enc().hi_str(17) + "]";
}

/// Core worklist propagation at a fixed precision.  Appends finished beams
/// (ordered left to right within each seed) and split points.
void propagate_pieces(GeoCtx& ctx, std::vector<Piece> seeds,
                      const BeamStop& stop, std::vector<Beam>& out,
                      std::vector<SplitPoint>* splits) {
  std::vector<Piece> stack(seeds.rbegin(), seeds.rend());
  while (!stack.empty()) {
    Piece pc = std::move(stack.back());
    stack.pop_back();
    for (;;) {
      // ---- stop checks ----
      bool stop_here =
          pc.code.entries.size() > 1 &&
          (pc.cp.level == 0 || pc.cp.level == stop.hi_level ||
           pc.cp.level == stop.lo_level || pc.cp.level == stop.hi_abort ||
           pc.cp.level == stop.lo_abort ||
           (stop.diag_period > 0 && pc.cp.level % stop.diag_period == 0));
      if (stop_here && pc.cp.level == 0 && !ctx.perpendicular()) {
        // General direction: a ray may clip a level-0 copy without touching
        // the image of L.  Split at the diagonal endpoints if needed, then
        // stop only the pieces certifiably crossing the open diagonal.
        XReal xv0 = vertex_image(ctx, pc.cp, 0).re();
        XReal xv2 = vertex_image(ctx, pc.cp, 2).re();
        bool cut = false;
        for (int j : {0, 2}) {
          if (pc.a_tag.matches(pc.cp.step, j) ||
              pc.b_tag.matches(pc.cp.step, j))
            continue;  // this endpoint *is* the diagonal endpoint
          const XReal& xv = j == 0 ? xv0 : xv2;
          Cmp cl = cmp(pc.a, xv), cr = cmp(xv, pc.b);
          if (cl == Cmp::Unknown || cr == Cmp::Unknown)
            throw NeedsPrecision("diagonal endpoint vs beam interval");
          if (cl == Cmp::Less && cr == Cmp::Less) {
            Piece l = pc, r = pc;
            l.b = xv;
            l.b_tag = EndTag{pc.cp.step, j};
            r.a = xv;
            r.a_tag = EndTag{pc.cp.step, j};
            stack.push_back(std::move(r));
            stack.push_back(std::move(l));
            cut = true;
            break;
          }
        }
        if (cut) break;
        XReal xm = interior_point(pc.a, pc.b, ctx.prec());
        Cmp c0 = cmp(xm, xv0), c2 = cmp(xm, xv2);
        if (c0 == Cmp::Unknown || c2 == Cmp::Unknown || c0 == Cmp::Equal ||
            c2 == Cmp::Equal)
          throw NeedsPrecision("diagonal crossing for beam");
        if (c0 == c2) stop_here = false;  // clips the copy; keep going
      }
      if (stop_here) {
        Beam bm;
        bm.lo = pc.a;
        bm.hi = pc.b;
        bm.code = pc.code;
        if (pc.cp.level == stop.hi_level || pc.cp.level == stop.lo_level ||
            pc.cp.level == stop.hi_abort || pc.cp.level == stop.lo_abort)
          bm.term = Beam::Term::LevelEdge;
        else if (pc.cp.level == 0)
          bm.term = Beam::Term::Return0;
        else
          bm.term = Beam::Term::Diagonal;
        bm.arrival_level = pc.cp.level;
        if (bm.term == Beam::Term::Diagonal) {
          // The copy's long diagonal lies on L's image again; its isometry
          // restricted to the diagonal is x -> x + Re(v) or x -> Re(v) - x
          // depending on whether the (trivial-or-pi) rotation preserves the
          // x order of the diagonal endpoints.
          Cmp orient = cmp(vertex_image(ctx, pc.cp, 2).re(),
                           vertex_image(ctx, pc.cp, 0).re());
          if (orient == Cmp::Unknown)
            throw NeedsPrecision("diagonal image orientation");
          XReal t = pc.cp.v.re();
          if (orient == Cmp::Less) {
            bm.jlo = pc.a - t;
            bm.jhi = pc.b - t;
          } else {
            bm.jlo = t - pc.b;
            bm.jhi = t - pc.a;
            bm.j_reversed = true;
          }
        } else if (pc.cp.level == pc.code.entries.front()) {
          // round trip: arrival interval is the translate by the final
          // copy's center offset
          XReal t = pc.cp.v.re();
          bm.jlo = pc.a - t;
          bm.jhi = pc.b - t;
        } else {
          bm.jlo = pc.a;
          bm.jhi = pc.b;
        }
        for (auto& ch : pc.centers) {
          Cmp cl = cmp(pc.a, ch.x), cr = cmp(ch.x, pc.b);
          if (cl == Cmp::Unknown || cr == Cmp::Unknown)
            throw NeedsPrecision("center containment at finalization");
          if (cl == Cmp::Less && cr == Cmp::Less) bm.centers.push_back(ch);
        }
        bm.contains_center = !bm.centers.empty();
        bm.palindromic = bm.term == Beam::Term::Diagonal
                             ? is_point_symmetric(bm.code)
                             : is_palindrome(bm.code);
        out.push_back(std::move(bm));
        break;
      }
      if (pc.cp.step >= stop.budget) {
        Beam bm;
        bm.lo = pc.a;
        bm.hi = pc.b;
        bm.code = pc.code;
        bm.term = Beam::Term::Budget;
        out.push_back(std::move(bm));
        break;
      }

      // ---- center shadow ----
      if (pc.centers.empty() || pc.centers.back().step != pc.cp.step) {
        XReal cx = pc.cp.v.re();
        Cmp cl = cmp(pc.a, cx), cr = cmp(cx, pc.b);
        if (cl == Cmp::Less && cr == Cmp::Less)
          pc.centers.push_back(CenterHit{pc.cp.step, pc.cp.level, cx});
        else if (cl == Cmp::Unknown || cr == Cmp::Unknown)
          throw NeedsPrecision("center shadow containment");
      }

      // ---- vertex shadows: split candidates ----
      std::vector<int> cand;
      if (pc.entry < 0 && pc.cp.level == 0) {
        cand = {1};
      } else if (pc.entry < 0) {
        // Canonical seed: upward rays exit through the upper hull, whose only
        // interior vertex is the copy's top vertex.  The x-extreme pair
        // bounds the seed interval and the bottom vertex lies on the lower
        // hull; neither splits the upward continuation.
        std::array<XReal, 4> xs;
        for (int j = 0; j < 4; ++j) xs[j] = vertex_image(ctx, pc.cp, j).re();
        int lo = 0, hi = 0;
        for (int j = 1; j < 4; ++j) {
          if (cmp(xs[j], xs[lo]) == Cmp::Less) lo = j;
          if (cmp(xs[hi], xs[j]) == Cmp::Less) hi = j;
        }
        int p = -1, q = -1;
        for (int j = 0; j < 4; ++j)
          if (j != lo && j != hi) (p < 0 ? p : q) = j;
        if (p < 0 || q < 0) throw NeedsPrecision("seed vertex x-order");
        Iv yp = vertex_image(ctx, pc.cp, p).enc.im;
        Iv yq = vertex_image(ctx, pc.cp, q).enc.im;
        if (certainly_less(yq, yp))
          cand = {p};
        else if (certainly_less(yp, yq))
          cand = {q};
        else
          throw NeedsPrecision("seed top-vertex selection");
      } else {
        for (int j = 0; j < 4; ++j)
          if (j != kEdges[pc.entry].first && j != kEdges[pc.entry].second)
            cand.push_back(j);
      }
      std::vector<std::pair<XReal, int>> cuts;
      for (int j : cand) {
        if (pc.a_tag.matches(pc.cp.step, j) ||
            pc.b_tag.matches(pc.cp.step, j))
          continue;  // shadow coincides with the endpoint it was cut at
        XReal xv = vertex_image(ctx, pc.cp, j).re();
        Cmp cl = cmp(pc.a, xv), cr = cmp(xv, pc.b);
        if (cl == Cmp::Unknown || cr == Cmp::Unknown)
          throw NeedsPrecision("vertex shadow vs interval endpoint " +
                               coord_str(xv));
        if (cl == Cmp::Less && cr == Cmp::Less) cuts.emplace_back(xv, j);
        // Equal: the shadow coincides with an existing boundary (already a
        // recorded split or the seed edge); no new cut.
      }
      if (!cuts.empty()) {
        // certified insertion sort; coincident cuts become degenerate beams
        std::vector<std::pair<XReal, int>> sorted;
        for (auto& c : cuts) {
          size_t i = 0;
          bool merged = false;
          for (; i < sorted.size(); ++i) {
            Cmp r = cmp(c.first, sorted[i].first);
            if (r == Cmp::Unknown)
              throw NeedsPrecision("ordering of coincident vertex shadows");
            if (r == Cmp::Less) break;
            if (r == Cmp::Equal) {
              // two vertex shadows at the same coordinate: keep one cut,
              // record a zero-width degenerate beam
              Beam dg;
              dg.lo = c.first;
              dg.hi = c.first;
              dg.code = pc.code;
              dg.degenerate = true;
              out.push_back(std::move(dg));
              if (splits)
                splits->push_back(
                    SplitPoint{c.first, pc.cp.step, pc.cp.level, c.second});
              merged = true;
              break;
            }
          }
          if (!merged) sorted.insert(sorted.begin() + i, c);
        }
        if (splits)
          for (auto& c : sorted)
            splits->push_back(
                SplitPoint{c.first, pc.cp.step, pc.cp.level, c.second});
        // sub-pieces left to right; push right-to-left so the leftmost pops
        // first and the output stays ordered
        std::vector<Piece> sub;
        XReal left = pc.a;
        EndTag left_tag = pc.a_tag;
        for (auto& c : sorted) {
          Piece s = pc;
          s.a = left;
          s.a_tag = left_tag;
          s.b = c.first;
          s.b_tag = EndTag{pc.cp.step, c.second};
          sub.push_back(std::move(s));
          left = c.first;
          left_tag = EndTag{pc.cp.step, c.second};
        }
        {
          Piece s = pc;
          s.a = left;
          s.a_tag = left_tag;
          sub.push_back(std::move(s));
        }
        for (auto it = sub.rbegin(); it != sub.rend(); ++it)
          stack.push_back(std::move(*it));
        break;
      }

      // ---- advance one copy ----
      XReal xm = interior_point(pc.a, pc.b, ctx.prec());
      int e;
      if (pc.entry < 0 && pc.cp.level == 0) {
        Cmp c1 = cmp(xm, vertex_image(ctx, pc.cp, 1).re());
        if (c1 == Cmp::Unknown || c1 == Cmp::Equal)
          throw NeedsPrecision("seed split at V1");
        e = (c1 == Cmp::Less) ? 1 : 0;
      } else if (pc.entry < 0) {
        e = exit_edge_upper(ctx, pc.cp, xm);
      } else {
        e = exit_edge(ctx, pc.cp, pc.entry, xm);
      }
      pc.cp = reflect_copy(ctx, pc.cp, e);
      pc.entry = e;
      pc.code.entries.push_back(pc.cp.level);
    }
  }
}

std::vector<Piece> seed_from_L(GeoCtx& ctx, const Coord& lo, const Coord& hi) {
  Piece p;
  p.a = ctx.frame_x(lo);
  p.b = ctx.frame_x(hi);
  p.cp = CopyState::base(ctx);
  p.code.entries.push_back(0);
  return {std::move(p)};
}

std::vector<Piece> seed_canonical(GeoCtx& ctx, int level) {
  Piece p;
  p.cp.level = level;
  p.cp.rev = (std::abs(level) % 2) == 1;
  p.cp.v = ctx.zero_complex();
  p.code.entries.push_back(level);
  // interval: x extent of the copy = hull of vertex x enclosures
  XReal xs[4];
  for (int j = 0; j < 4; ++j) xs[j] = vertex_image(ctx, p.cp, j).re();
  int lo = 0, hi = 0;
  for (int j = 1; j < 4; ++j) {
    Cmp c = cmp(xs[j], xs[lo]);
    if (c == Cmp::Less) lo = j;
    c = cmp(xs[hi], xs[j]);
    if (c == Cmp::Less) hi = j;
  }
  // verify extremes certified against the others
  for (int j = 0; j < 4; ++j) {
    if (j != lo && cmp(xs[lo], xs[j]) == Cmp::Unknown)
      throw NeedsPrecision("canonical seed extent");
    if (j != hi && cmp(xs[j], xs[hi]) == Cmp::Unknown)
      throw NeedsPrecision("canonical seed extent");
  }
  p.a = xs[lo];
  p.a_tag = EndTag{0, lo};
  p.b = xs[hi];
  p.b_tag = EndTag{0, hi};
  return {std::move(p)};
}

/// Keep only the beams whose second symbol moves toward level 0 (the seed
/// interval of the band-edge family).
void filter_toward_zero(std::vector<Beam>& beams, int seed_level) {
  int want = seed_level > 0 ? seed_level - 1 : seed_level + 1;
  beams.erase(std::remove_if(beams.begin(), beams.end(),
                             [&](const Beam& b) {
                               return b.code.entries.size() < 2 ||
                                      b.code.entries[1] != want;
                             }),
              beams.end());
}

}  // namespace

std::vector<Beam> propagate_beam(const TriangleConfig& cfg, const Coord& lo,
                                 const Coord& hi, const StopRule& stop,
                                 const AngleSpec* theta,
                                 std::vector<SplitPoint>* splits) {
  std::string last;
  for (mpfr_prec_t prec = cfg.precision_bits;; prec *= 2) {
    try {
      GeoCtx ctx(cfg, prec, theta);
      std::vector<Beam> out;
      BeamStop bstop;
      bstop.budget = stop.budget;
      if (stop.kind == StopRule::Kind::BandEdge) {
        bstop.hi_level = stop.N;
        if (stop.M < 0) bstop.lo_level = stop.M;
      }
      if (theta == nullptr && cfg.field &&
          stop.kind != StopRule::Kind::StepBudget)
        bstop.diag_period = cfg.field->diagonal_period();
      propagate_pieces(ctx, seed_from_L(ctx, lo, hi), bstop, out, splits);
      return out;
    } catch (const NeedsPrecision& e) {
      last = e.what();
    }
    if (prec >= cfg.max_precision_bits)
      throw UndecidedError("beam propagation uncertified at max precision: " +
                               last,
                           last);
  }
}

BeamSet decompose_band(const TriangleConfig& cfg, int M, int N, long budget) {
  if (!(M <= 0 && 0 < N))
    throw std::invalid_argument("decompose_band requires M <= 0 < N");
  std::string last;
  for (mpfr_prec_t prec = cfg.precision_bits;; prec *= 2) {
    try {
      GeoCtx ctx(cfg, prec, nullptr);
      BeamSet bs;
      bs.M = M;
      bs.N = N;
      bs.certified_prec = prec;
      auto add = [&](std::vector<Beam>&& v, Side s) {
        for (auto& b : v) {
          bs.beams.push_back(std::move(b));
          bs.beam_side.push_back(s);
        }
      };
      BeamStop stop;
      stop.hi_level = N;
      stop.budget = budget;
      if (cfg.field) stop.diag_period = cfg.field->diagonal_period();
      {  // S0+ = (-cos a, 0), codes starting 0 1
        std::vector<Beam> out;
        propagate_pieces(ctx,
                         seed_from_L(ctx, Coord::times_cos(-1),
                                     Coord::rational(0)),
                         stop, out, &bs.splits);
        add(std::move(out), Side::S0Pos);
      }
      {  // level-N family, codes starting N (N-1)
        std::vector<Beam> out;
        BeamStop tstop = stop;
        tstop.hi_abort = N + 1;  // pieces leaving upward are filtered below
        propagate_pieces(ctx, seed_canonical(ctx, N), tstop, out, &bs.splits);
        filter_toward_zero(out, N);
        add(std::move(out), Side::STop);
      }
      if (M < 0) {
        BeamStop nstop;
        nstop.lo_level = M;
        nstop.budget = budget;
        nstop.diag_period = stop.diag_period;
        {  // S0- = (0, cos a), codes starting 0 (-1)
          std::vector<Beam> out;
          propagate_pieces(ctx,
                           seed_from_L(ctx, Coord::rational(0),
                                       Coord::times_cos(1)),
                           nstop, out, &bs.splits);
          add(std::move(out), Side::S0Neg);
        }
        {  // level-M family
          std::vector<Beam> out;
          BeamStop bstop = nstop;
          bstop.lo_abort = M - 1;  // pieces leaving downward are filtered below
          propagate_pieces(ctx, seed_canonical(ctx, M), bstop, out,
                           &bs.splits);
          filter_toward_zero(out, M);
          add(std::move(out), Side::SBot);
        }
      }
      for (size_t i = 0; i < bs.beams.size(); ++i) {
        Beam& b = bs.beams[i];
        if (b.degenerate) continue;
        if (bs.beam_side[i] == Side::S0Pos &&
            b.term == Beam::Term::LevelEdge && b.arrival_level == N)
          b.exceptional_up = true;
        if (bs.beam_side[i] == Side::STop && b.term == Beam::Term::Return0)
          b.exceptional_down = true;
      }
      return bs;
    } catch (const NeedsPrecision& e) {
      last = e.what();
    }
    if (prec >= cfg.max_precision_bits)
      throw UndecidedError("band decomposition uncertified at max precision: " +
                               last,
                           last);
  }
}

std::pair<Beam, Beam> find_exceptional(const BeamSet& bs) {
  std::vector<const Beam*> up, down;
  for (size_t i = 0; i < bs.beams.size(); ++i) {
    const Beam& b = bs.beams[i];
    if (b.degenerate) continue;
    if (bs.beam_side[i] == Side::S0Pos && b.term == Beam::Term::LevelEdge &&
        b.arrival_level == bs.N)
      up.push_back(&b);
    if (bs.beam_side[i] == Side::STop && b.term == Beam::Term::Return0)
      down.push_back(&b);
  }
  if (up.size() != 1 || down.size() != 1)
    throw CountViolation("exceptional beam count: up=" +
                         std::to_string(up.size()) +
                         " down=" + std::to_string(down.size()) +
                         " (expected exactly one each)");
  Beam u = *up.front(), d = *down.front();
  u.exceptional_up = true;
  d.exceptional_down = true;
  return {u, d};
}

std::optional<Iv> center_hit_report(const Beam& beam) {
  if (!beam.returning()) return std::nullopt;
  int half = beam.p() / 2;
  for (const auto& ch : beam.centers) {
    if (ch.step == half) {
      Iv mid = (beam.lo.enc() + beam.hi.enc()) *
               Iv::from_mpq(mpq_class(1, 2), beam.lo.enc().prec());
      return abs(mid - ch.x.enc());
    }
  }
  return std::nullopt;
}

bool half_period_symmetry(const TriangleConfig& cfg, const Beam& beam) {
  if (!beam.returning()) return false;
  Iv r1 = abs(beam.jlo.enc() + beam.hi.enc());
  Iv r2 = abs(beam.jhi.enc() + beam.lo.enc());
  Iv tol = Iv::pow2(-static_cast<long>(cfg.precision_bits / 2),
                    beam.lo.enc().prec());
  return certainly_less(r1, tol) && certainly_less(r2, tol);
}

}  // namespace rtb
