#pragma once

#include "layout/scene.hpp"

#include <span>
#include <string>

namespace layout {

/// Overlay layers are separate <g> elements with ids "access", "circles",
/// "lanes" and "curves"; each is emitted only when its flag is set.
struct SvgOptions {
    bool access_regions = false;
    bool bounding_circles = false;
    bool traffic_lanes = false;
    bool curves = false;
    double pixels_per_meter = 50.0;
    double margin = 0.5; ///< meters around the room
};

/// Overhead SVG 1.1 view in a y-up frame: room outline, one rotated footprint
/// and heading arrow per object. Coordinates are printed to 4 decimals, so
/// equal inputs give equal bytes.
std::string render_svg(const Scene& scene, std::span<const Particle> layout, const SvgOptions& options = {});

} // namespace layout
