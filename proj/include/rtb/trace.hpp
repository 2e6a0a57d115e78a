#pragma once
/**
 * @file trace.hpp
 * @brief Certified tracing of a single ray through the unfolding.
 *
 * The driver reruns the whole trace at doubled precision whenever a branch
 * decision (exit edge, vertex avoidance, diagonal crossing) fails to certify,
 * up to the configured cap; at rational multiples of pi the exact cyclotomic
 * layer additionally decides true equalities, so vertex hits are reported
 * exactly instead of escalating forever.
 */

#include <optional>
#include <string>
#include <vector>

#include "rtb/angle.hpp"
#include "rtb/code.hpp"
#include "rtb/unfold.hpp"

namespace rtb {

struct StopRule {
  enum class Kind {
    FirstReturn,         ///< stop on re-entering a level-0 copy across L
    BandEdge,            ///< stop when the level reaches M or N
    StepBudget,          ///< stop after `budget` copies
    HorizontalDiagonal,  ///< rational alpha: stop at the first copy whose
                         ///< long-diagonal image is horizontal (periodicity
                         ///< witness for perpendicular orbits)
    ReturnOrBand,        ///< first return to L (incl. horizontal-diagonal
                         ///< images at rational alpha), else band edge
  } kind = Kind::FirstReturn;
  int M = 0, N = 0;        // band for BandEdge
  long budget = 200000;    // always enforced as a safety net

  static StopRule first_return(long budget = 200000) {
    return {Kind::FirstReturn, 0, 0, budget};
  }
  static StopRule band(int M, int N, long budget = 200000) {
    return {Kind::BandEdge, M, N, budget};
  }
  static StopRule steps(long n) { return {Kind::StepBudget, 0, 0, n}; }
  static StopRule horizontal(long budget = 200000) {
    return {Kind::HorizontalDiagonal, 0, 0, budget};
  }
  static StopRule return_or_band(int M, int N, long budget = 200000) {
    return {Kind::ReturnOrBand, M, N, budget};
  }
};

enum class Terminal {
  ReturnedToLevel0,
  ReachedBandEdge,
  VertexSingular,
  HorizontalDiagonal,  ///< periodic return through a horizontal diagonal image
  Undecided,
  StepBudgetExhausted,
};

inline const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::ReturnedToLevel0: return "ReturnedToLevel0";
    case Terminal::ReachedBandEdge: return "ReachedBandEdge";
    case Terminal::VertexSingular: return "VertexSingular";
    case Terminal::HorizontalDiagonal: return "HorizontalDiagonal";
    case Terminal::Undecided: return "Undecided";
    case Terminal::StepBudgetExhausted: return "StepBudgetExhausted";
  }
  return "?";
}

struct EdgeEvent {
  int step;         ///< index of the copy being left
  int edge;         ///< base-edge index crossed
  int level_after;  ///< level of the copy entered
  Iv y;             ///< certified height of the crossing on the vertical ray
};

struct Trajectory {
  Coord start_x;
  Code code;
  Terminal terminal = Terminal::Undecided;
  int vertex_id = -1;                 ///< base-vertex index for VertexSingular
  std::optional<Iv> return_x;         ///< L-coordinate of the return point
  std::vector<EdgeEvent> events;
  std::vector<std::pair<int, int>> center_passages;  ///< (step, level)
  mpfr_prec_t certified_prec = 0;
  std::string note;                   ///< reason for Undecided, if any
};

/**
 * Traces the ray from start_x on L in direction theta (perpendicular when
 * theta is null).  All edge decisions are interval-certified; the result's
 * certified_prec records the precision that completed.
 */
Trajectory trace_ray(const TriangleConfig& cfg, const Coord& start_x,
                     const StopRule& stop, const AngleSpec* theta = nullptr,
                     bool record_events = false);

}  // namespace rtb
