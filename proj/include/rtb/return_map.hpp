#pragma once
/**
 * @file return_map.hpp
 * @brief The first-return map of the band to the long diagonal L, as a
 *        partition into certified intervals, and its completion to an
 *        interval-exchange transformation (IET) with ghost pieces.
 *
 * Returning beams act on their initial interval by a translation; collecting
 * them over both halves of L yields a partial IET on L.  The non-returning
 * (band-escaping or unresolved) intervals leave gaps in both the domain and
 * the range; `ghost_complete` pairs those gaps left to right into formal
 * orientation-preserving "ghost" translation pieces so the result is a full
 * IET amenable to periodicity analysis.  `iet_classify` then certifies
 * periodic components; everything it cannot certify stays
 * "unresolved-minimal" — minimality itself is never asserted.
 */

#include <optional>
#include <vector>

#include "rtb/beam.hpp"

namespace rtb {

/// Thrown by ghost_complete when the domain and range gaps cannot be paired
/// (different counts, or certified different lengths).
struct LengthMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RMClass {
  P,          ///< certified periodic under the (ghost-completed) return map
  Mclass,     ///< unresolved-minimal component (periodicity not certified)
  U,          ///< leaves the band (or could not be resolved to a return)
};

inline const char* to_string(RMClass c) {
  switch (c) {
    case RMClass::P: return "P";
    case RMClass::Mclass: return "M";
    case RMClass::U: return "U";
  }
  return "?";
}

struct RMInterval {
  XReal lo, hi;             ///< open interval on L (rotated-frame x)
  XReal jlo, jhi;           ///< arrival interval, when returning
  RMClass cls = RMClass::U;
  Code code;                ///< code to the first return / band exit
  std::optional<Iv> shift;  ///< return-map translation, when returning
  bool returning = false;
};

/// One piece of an interval exchange: [src_lo, src_hi] -> [dst_lo, dst_hi]
/// by the translation dst_lo - src_lo.  Ghost pieces are formal completions.
struct IetPiece {
  XReal src_lo, src_hi, dst_lo, dst_hi;
  bool ghost = false;
};

struct Iet {
  std::vector<IetPiece> pieces;  ///< ordered left to right by source
  mpfr_prec_t prec = 128;
};

struct IetComponent {
  std::vector<size_t> pieces;  ///< indices into Iet::pieces
  bool periodic = false;       ///< certified periodic (else unresolved-minimal)
  long period = 0;             ///< return-map period when periodic
};

struct ReturnMapPartition {
  int M = 0, N = 0;
  std::optional<std::string> theta0;     ///< canonical direction, if oblique
  std::vector<RMInterval> intervals;     ///< left to right on L
  Iv total_length;                       ///< |L| = 2 cos(alpha)
  Iv domain_length;                      ///< total width of returning intervals
  mpfr_prec_t certified_prec = 0;
};

/**
 * Builds the first-return partition of L for the band M <= 0 < N.  theta0
 * selects an oblique direction (perpendicular when null).  Each interval
 * carries either a return translation or class U.  P/M classes are assigned
 * by classifying the ghost-completed IET.
 */
ReturnMapPartition build_return_map(const TriangleConfig& cfg,
                                    const AngleSpec* theta0, int M, int N,
                                    long budget = 200000);

/**
 * Completes the partial IET of the returning intervals: the k-th domain gap
 * (left to right) is sent to the k-th range gap by a formal translation.
 * Throws LengthMismatch when gap counts differ or a paired gap's lengths are
 * certifiably different.
 */
Iet ghost_complete(const ReturnMapPartition& part);

/**
 * Decomposes the IET into orbit components of its pieces and certifies
 * periodicity where possible.  A component is reported periodic only when a
 * probe orbit returns to its starting piece with certified containment and
 * an accumulated translation that is exactly zero (exact endpoints) or
 * encloses zero below 2^-(prec/2).  Everything else is unresolved-minimal.
 */
std::vector<IetComponent> iet_classify(const Iet& iet, long max_iter = 4096);

}  // namespace rtb
