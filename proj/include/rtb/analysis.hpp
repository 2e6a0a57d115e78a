#pragma once
/**
 * @file analysis.hpp
 * @brief Theorem-level computations on top of the beam enumeration: escape
 *        bracketing, coverage statistics, the g_L loop check, foliation
 *        sampling, the two-particle gas correspondence, and the aggregate
 *        verification suite.
 */

#include <json.hpp>

#include "rtb/return_map.hpp"

namespace rtb {

struct EscapeBracket {
  int N = 0;
  XReal lo, hi;  ///< initial interval of the unique escaping beam at this N
  Iv width() const { return hi.enc() - lo.enc(); }
};

struct EscapeBracketSeq {
  bool positive = true;  ///< escaping upward (levels +N) vs downward (-N)
  std::vector<EscapeBracket> entries;  ///< one per N = 1..N_max
  /// Nesting certified: no entry certifiably leaves its predecessor, widths
  /// certifiably nonincreasing, and the final width is certifiably smaller
  /// than the first (N_max >= 4).
  bool nested_certified = false;
};

/**
 * Bracket of the (at most one) escape orbit: for each N <= N_max the initial
 * interval of the unique beam escaping to level +N (or -N when positive is
 * false).  Throws CountViolation if uniqueness fails at some N.
 */
EscapeBracketSeq escape_bracket(const TriangleConfig& cfg, int N_max,
                                bool positive = true, long budget = 200000);

struct CoverageStats {
  int N = 0;
  Iv fraction;    ///< certified returning width / |L|
  Iv unresolved;  ///< width of budget-truncated or undecided intervals / |L|
  Iv total_length;
};

/// Fraction of L covered by beams certified to return (hence periodic) within
/// the symmetric band -N..N, for the perpendicular direction.
CoverageStats coverage_fraction(const TriangleConfig& cfg, int N,
                                long budget = 200000);

/**
 * The simple periodic loop g_L: true iff the perpendicular orbits at both
 * ends of L have code 0 1 0 (resp. 0 -1 0) and return to certified interior
 * points of L.
 */
bool gl_loop_check(const TriangleConfig& cfg);

struct FoliationStats {
  long samples = 0;
  long periodic = 0;    ///< certified to return (periodic by Theorem 1)
  long singular = 0;    ///< certified vertex hits
  long unresolved = 0;  ///< left the band, exhausted budget, or undecided
  int N_cap = 0;
  unsigned long seed = 0;
};

/// Uniform random starts on L traced to first return or band exit.
FoliationStats foliation_sample(const TriangleConfig& cfg, long sample_count,
                                int N_cap, unsigned long seed = 20260824,
                                long budget = 200000);

struct GasAngle {
  AngleSpec alpha;             ///< atan(sqrt(m1/m2))
  bool in_theorem_range = false;  ///< certified pi/6 < alpha < pi/4
  std::string note;            ///< flag text when outside / on the boundary
};

/// Angle of the right-triangle billiard equivalent to two elastic point
/// particles of masses m1 (inner, next to the wall) and m2 on a half line.
GasAngle gas_map(const mpq_class& m1, const mpq_class& m2);

/**
 * Event sequence ('w' = wall bounce of the inner particle, 'c' = particle
 * collision) of the billiard-in-a-wedge reformulation, with the wedge angle
 * taken from `ga`.  Used to validate gas_map operationally against an
 * independent event-driven two-particle simulation.
 */
std::string gas_event_sequence(const GasAngle& ga, double m1, double m2,
                               double x1, double x2, double v1, double v2,
                               int max_events);

/**
 * Aggregate verification report for the band -N..N: the three Theorem 1
 * statements evaluated independently per returning beam and compared,
 * exceptional-beam counts, bracket nesting, and the g_L loop.  Failures and
 * undecided items are report content, not exceptions.
 */
nlohmann::json verify_all(const TriangleConfig& cfg, int N);

}  // namespace rtb
