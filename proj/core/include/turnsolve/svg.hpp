#pragma once

#include <string>

#include "turnsolve/geometry.hpp"
#include "turnsolve/grid.hpp"

namespace turnsolve {

/// Deterministic SVG: pixels as unit squares (subset pixels highlighted,
/// penalty pixels tinted), one closed path per cycle with a distinct
/// stroke, dots marking pixels where the cycle turns. Byte-identical
/// across runs for identical inputs.
std::string render_svg(const GridInstance& instance, const CycleCover& cover);

std::string render_svg_geo(const GeometricInstance& gi, const GeoApproxResult& result);

}  // namespace turnsolve
