#pragma once

#include "layout/scene.hpp"

#include <span>
#include <string_view>

namespace layout {

/// Footprint of one furniture type in meters. `depth` runs along the object's
/// forward (x) axis, `width` along its lateral (y) axis.
struct CatalogueItem {
    std::string_view label;
    double depth;
    double width;
    double height;

    BoundingBox box() const { return {Vec2(0.5 * depth, 0.5 * width), 0.5 * height}; }
};

std::span<const CatalogueItem> catalogue();

/// Throws SceneError for an unknown label.
const CatalogueItem& catalogue_item(std::string_view label);

} // namespace layout
