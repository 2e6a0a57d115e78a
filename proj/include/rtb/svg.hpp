#pragma once
/**
 * @file svg.hpp
 * @brief SVG rendering of unfolded trajectories and beam decompositions.
 *
 * Pictures are best-effort double-precision projections of certified data:
 * rhombus copies outlined and color-banded by level, beams shaded, split
 * (singular) rays dashed, copy centers marked.  Output is deterministic for
 * fixed input (fixed formatting, no timestamps).
 */

#include <string>

#include "rtb/beam.hpp"

namespace rtb {

/// Unfolding of a single traced ray: one rhombus copy per code entry,
/// labelled with its level, with the ray drawn through the chain.
std::string render_unfolding_svg(const TriangleConfig& cfg,
                                 const Trajectory& t,
                                 const AngleSpec* theta = nullptr);

/// Figure-style strip picture of a band decomposition: the copies visited by
/// each beam's midpoint ray, beams shaded over their interval of L, splits
/// dashed.
std::string render_unfolding_svg(const TriangleConfig& cfg, const BeamSet& bs);

/// Valid empty scene.
std::string render_empty_svg();

}  // namespace rtb
