#include "rtb/trace.hpp"

namespace rtb {

namespace {

/// Result of one full pass at a fixed precision; NeedsPrecision escapes to
/// the driver.
Trajectory trace_once(GeoCtx& ctx, const Coord& start, const StopRule& stop,
                      bool record_events) {
  Trajectory out;
  out.start_x = start;
  out.certified_prec = ctx.prec();

  const XReal x0 = ctx.frame_x(start);
  long diag_period = 0;
  if (stop.kind == StopRule::Kind::HorizontalDiagonal) {
    if (!ctx.field() || !ctx.perpendicular())
      throw std::invalid_argument(
          "HorizontalDiagonal stop requires a rational-pi angle and the "
          "perpendicular direction");
    diag_period = ctx.field()->diagonal_period();
  }
  if (stop.kind == StopRule::Kind::ReturnOrBand && ctx.field() &&
      ctx.perpendicular())
    diag_period = ctx.field()->diagonal_period();

  CopyState cp = CopyState::base(ctx);
  int entry = -1;  // base-edge index of the shared entry edge; -1 at start
  out.code.entries.push_back(0);

  auto crossing_height = [&](const CopyState& c, int e) -> Iv {
    XComplex P = vertex_image(ctx, c, kEdges[e].first);
    XComplex Q = vertex_image(ctx, c, kEdges[e].second);
    Iv t = (x0.enc() - P.enc.re) / (Q.enc.re - P.enc.re);
    return P.enc.im + t * (Q.enc.im - P.enc.im);
  };

  for (;;) {
    // ---- stop checks on the current copy (after at least one crossing) ----
    if (cp.step > 0) {
      bool at_zero = cp.level == 0;
      bool at_diag = diag_period > 0 && cp.level % diag_period == 0;
      if ((stop.kind == StopRule::Kind::FirstReturn && at_zero) ||
          ((stop.kind == StopRule::Kind::HorizontalDiagonal ||
            stop.kind == StopRule::Kind::ReturnOrBand) &&
           (at_zero || at_diag))) {
        // Certify that the ray crosses the interior of the long-diagonal
        // image (endpoints are the images of V0 and V2).
        XReal a = vertex_image(ctx, cp, 0).re();
        XReal b = vertex_image(ctx, cp, 2).re();
        Cmp ca = cmp(x0, a), cb = cmp(x0, b);
        if (ca == Cmp::Equal) {
          out.terminal = Terminal::VertexSingular;
          out.vertex_id = 0;
          return out;
        }
        if (cb == Cmp::Equal) {
          out.terminal = Terminal::VertexSingular;
          out.vertex_id = 2;
          return out;
        }
        if (ca == Cmp::Unknown || cb == Cmp::Unknown)
          throw NeedsPrecision("diagonal-crossing check");
        bool between = (ca == Cmp::Less) != (cb == Cmp::Less);
        if (between) {
          out.terminal = at_zero ? Terminal::ReturnedToLevel0
                                 : Terminal::HorizontalDiagonal;
          // Return coordinate on (the image of) L, in L-parameter units.
          Iv rx = (x0.enc() - cp.v.enc.re) / ctx.cos_phi0();
          out.return_x = rx;
          return out;
        }
        // General direction only: the ray clips the level-0 copy without
        // touching L; continue through it.
      }
      if ((stop.kind == StopRule::Kind::BandEdge ||
           stop.kind == StopRule::Kind::ReturnOrBand) &&
          (cp.level >= stop.N || cp.level <= stop.M)) {
        out.terminal = Terminal::ReachedBandEdge;
        return out;
      }
    }
    if (cp.step >= stop.budget) {
      out.terminal = Terminal::StepBudgetExhausted;
      return out;
    }

    // ---- center passage (transparent singularity) ----
    Cmp cc = cmp(x0, cp.v.re());
    if (cc == Cmp::Equal) out.center_passages.emplace_back(cp.step, cp.level);

    // ---- choose the exit edge ----
    int exit_edge = -1;
    if (entry < 0) {
      // First step from a point on L going upward: the exit is on the upper
      // hull, e0 or e1, split by the image of V1.
      Cmp c1 = cmp(x0, vertex_image(ctx, cp, 1).re());
      if (c1 == Cmp::Equal) {
        out.terminal = Terminal::VertexSingular;
        out.vertex_id = 1;
        return out;
      }
      if (c1 == Cmp::Unknown) throw NeedsPrecision("start split at V1");
      exit_edge = (c1 == Cmp::Less) ? 1 : 0;
    } else {
      // Vertex hits: only the two vertices not on the entry edge terminate.
      for (int j = 0; j < 4; ++j) {
        if (j == kEdges[entry].first || j == kEdges[entry].second) continue;
        if (cmp(x0, vertex_image(ctx, cp, j).re()) == Cmp::Equal) {
          out.terminal = Terminal::VertexSingular;
          out.vertex_id = j;
          return out;
        }
      }
      // Exit edge: a non-entry edge certifiably containing x0 in its open
      // x-range is crossed by the vertical line; by convexity the boundary is
      // crossed exactly twice (entry + exit), so such an edge is the exit.
      bool unknown_seen = false;
      for (int e = 0; e < 4; ++e) {
        if (e == entry) continue;
        Cmp ca = cmp(x0, vertex_image(ctx, cp, kEdges[e].first).re());
        Cmp cb = cmp(x0, vertex_image(ctx, cp, kEdges[e].second).re());
        if (ca == Cmp::Unknown || cb == Cmp::Unknown) {
          unknown_seen = true;
          continue;
        }
        if (ca != cb && ca != Cmp::Equal && cb != Cmp::Equal) {
          exit_edge = e;
          break;
        }
      }
      if (exit_edge < 0) {
        if (unknown_seen) throw NeedsPrecision("exit edge selection");
        // No certified exit and no unknowns: numerically impossible unless a
        // decision was masked by an exact coincidence already handled above.
        throw NeedsPrecision("no exit edge certified");
      }
    }

    if (record_events)
      out.events.push_back(EdgeEvent{cp.step, exit_edge, 0, Iv(0L, 64)});
    cp = reflect_copy(ctx, cp, exit_edge);
    if (record_events) {
      out.events.back().level_after = cp.level;
      // height of the crossing on the shared edge (computed in the new copy,
      // where the shared edge has the same base index)
      out.events.back().y = crossing_height(cp, exit_edge);
    }
    entry = exit_edge;
    out.code.entries.push_back(cp.level);
  }
}

}  // namespace

Trajectory trace_ray(const TriangleConfig& cfg, const Coord& start_x,
                     const StopRule& stop, const AngleSpec* theta,
                     bool record_events) {
  std::string last_reason;
  for (mpfr_prec_t prec = cfg.precision_bits;; prec *= 2) {
    try {
      GeoCtx ctx(cfg, prec, theta);
      return trace_once(ctx, start_x, stop, record_events);
    } catch (const NeedsPrecision& e) {
      last_reason = e.what();
    }
    if (prec >= cfg.max_precision_bits) break;
  }
  Trajectory out;
  out.start_x = start_x;
  out.code.entries.push_back(0);
  out.terminal = Terminal::Undecided;
  out.note = "uncertified branch at max precision: " + last_reason +
             " (suspected singular orbit)";
  out.certified_prec = cfg.max_precision_bits;
  return out;
}

}  // namespace rtb
