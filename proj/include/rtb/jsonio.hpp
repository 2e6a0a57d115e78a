#pragma once
/**
 * @file jsonio.hpp
 * @brief JSON export/import of beam tables.
 *
 * Interval endpoints are emitted as decimal-string enclosures, outward
 * rounded (low endpoint rounded down, high endpoint rounded up), so the
 * printed interval always contains the certified one.
 */

#include <json.hpp>

#include "rtb/beam.hpp"

namespace rtb {

inline constexpr int kBeamSchemaVersion = 1;

/// Beam table as schema JSON:
/// {alpha_spec, precision, band, beams:[{I, J, code, p, flags, ...}],
///  splits, version}.
nlohmann::json beams_to_json(const TriangleConfig& cfg, const BeamSet& bs);

/// Writes beams_to_json(...) to `path` (indent 2, trailing newline).
void export_beams_json(const TriangleConfig& cfg, const BeamSet& bs,
                       const std::string& path);

/// Rebuilds a BeamSet from schema JSON; enclosures are the outward-rounded
/// decimal strings re-read at `prec` bits.  Throws std::runtime_error on
/// schema violations (missing fields, version mismatch, lo > hi).
BeamSet import_beams_json(const nlohmann::json& j, mpfr_prec_t prec = 128);

}  // namespace rtb
