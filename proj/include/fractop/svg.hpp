#pragma once

#include <optional>
#include <string>

#include "fractop/topology.hpp"

namespace fractop {

// SVG 1.1 drawing of the cells, viewBox = ambient box scaled by `scale` with
// the y axis pointing up. 1-D cell sets are drawn as bars. When `arc` is given
// it is overlaid as a polyline with its end points marked p and q.
std::string render_svg(const CellSet& cells, const std::optional<Polyline>& arc = std::nullopt,
                       const Rational& scale = Rational(729));

}  // namespace fractop
