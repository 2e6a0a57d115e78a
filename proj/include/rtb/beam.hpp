#pragma once
/**
 * @file beam.hpp
 * @brief Propagation of intervals of parallel rays through the unfolding.
 *
 * A beam is a maximal open interval of rays sharing one code; its boundary
 * rays are singular (they hit vertex images).  Propagation pushes an interval
 * copy-by-copy, splitting it at the certified x coordinates of vertex
 * images ("vertex shadows"), until each piece returns to level 0 or reaches
 * the band edge.  All splits and stops are interval-certified with the exact
 * cyclotomic fallback at rational multiples of pi; when neither decides, the
 * enumeration reruns at doubled precision up to the configured cap.
 */

#include <optional>
#include <vector>

#include "rtb/code.hpp"
#include "rtb/trace.hpp"
#include "rtb/unfold.hpp"

namespace rtb {

/// Thrown when a split point cannot be separated from an interval endpoint
/// at max precision; carries the offending coordinate's enclosure.
struct UndecidedError : std::runtime_error {
  std::string coordinate;
  UndecidedError(const std::string& what, std::string coord)
      : std::runtime_error(what + " (coordinate enclosure " + coord + ")"),
        coordinate(std::move(coord)) {}
};

struct CountViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CenterHit {
  int step;
  int level;
  XReal x;  ///< x coordinate of the copy-center image
};

struct Beam {
  XReal lo, hi;    ///< initial interval I (open), rotated-frame coordinates
  XReal jlo, jhi;  ///< final interval J (translate of I for returning beams)
  Code code;
  /// Diagonal: rational-angle return through a copy whose long-diagonal
  /// image is horizontal again (level = nonzero multiple of the diagonal
  /// period) — the table orbit is back on L even though the level is not 0.
  enum class Term { Return0, LevelEdge, Diagonal, Budget } term = Term::Budget;
  int arrival_level = 0;  ///< terminal level (0, or the signed band edge)

  bool palindromic = false;
  bool contains_center = false;
  bool exceptional_up = false;
  bool exceptional_down = false;
  bool degenerate = false;  ///< zero-width record (coincident splits)
  bool j_reversed = false;  ///< arrival reverses orientation (x -> c - x)

  std::vector<CenterHit> centers;

  int p() const { return code.p(); }
  Iv width() const {
    Iv w = hi.enc() - lo.enc();
    return w;
  }
  /// Round trip: the beam arrives back at the level it was anchored to
  /// (level 0 for the S0 families, the band edge for its own family), or on
  /// a horizontal diagonal image (rational angles), which is L again.
  bool returning() const {
    return term != Term::Budget && !degenerate && p() > 0 &&
           (code.entries.front() == arrival_level || term == Term::Diagonal);
  }
};

struct SplitPoint {
  XReal x;
  int step;    ///< copy index at which the vertex shadow was found
  int level;   ///< level of that copy
  int vertex;  ///< base-vertex index
};

/// Seed families for a band decomposition.
enum class Side { S0Pos, S0Neg, STop, SBot };

struct BeamSet {
  int M = 0, N = 0;
  mpfr_prec_t certified_prec = 0;
  std::vector<Beam> beams;          ///< all beams, grouped by side
  std::vector<Side> beam_side;      ///< parallel to beams
  std::vector<SplitPoint> splits;

  std::vector<const Beam*> side(Side s) const {
    std::vector<const Beam*> r;
    for (size_t i = 0; i < beams.size(); ++i)
      if (beam_side[i] == s) r.push_back(&beams[i]);
    return r;
  }
};

/**
 * Propagates a sub-interval of L (given in L-parameter coordinates) until
 * each piece returns to level 0 or triggers `stop`.  Perpendicular by
 * default; `theta` selects the general-direction variant (interval-only
 * certification).  Returns beams ordered left to right.
 */
std::vector<Beam> propagate_beam(const TriangleConfig& cfg, const Coord& lo,
                                 const Coord& hi, const StopRule& stop,
                                 const AngleSpec* theta = nullptr,
                                 std::vector<SplitPoint>* splits = nullptr);

/**
 * Complete enumeration of the beams of the band M <= 0 < N for the
 * perpendicular direction: sides S0+ = (-cos a, 0), the level-N seed, and for
 * M < 0 the mirrored families.  M == 0 restricts to the positive side.
 */
BeamSet decompose_band(const TriangleConfig& cfg, int M, int N,
                       long budget = 200000);

/// The unique 0->N beam and its unique N->0 counterpart; throws
/// CountViolation if either count differs from one.
std::pair<Beam, Beam> find_exceptional(const BeamSet& bs);

/// Upper bound on the distance between the midpoint ray's crossing of copy
/// floor(p/2) and that copy's center image; nullopt when the beam records no
/// center at the half period.
std::optional<Iv> center_hit_report(const Beam& beam);

/// Certified check that J is the point reflection of I (central symmetry of
/// departure and arrival intervals); tolerance 2^-(prec/2).
bool half_period_symmetry(const TriangleConfig& cfg, const Beam& beam);

}  // namespace rtb
