#include "layout/catalogue.hpp"

#include <array>
#include <string>

namespace layout {

namespace {

// label, depth, width, height
constexpr std::array kItems{
    // theater
    CatalogueItem{"chair", 0.50, 0.50, 0.90},
    CatalogueItem{"stage", 3.00, 6.00, 1.00},
    // picnic
    CatalogueItem{"round_table", 1.20, 1.20, 0.75},
    CatalogueItem{"rect_table", 0.80, 1.80, 0.75},
    CatalogueItem{"trash_can", 0.50, 0.50, 1.00},
    CatalogueItem{"bbq_grill", 0.60, 1.00, 1.00},
    CatalogueItem{"carousel", 4.00, 4.00, 3.00},
    // living room
    CatalogueItem{"tv", 0.30, 1.20, 0.80},
    CatalogueItem{"sofa", 0.90, 2.00, 0.80},
    CatalogueItem{"armchair", 0.80, 0.80, 0.90},
    CatalogueItem{"table", 0.70, 1.40, 0.75},
    CatalogueItem{"office_chair", 0.60, 0.60, 1.00},
    CatalogueItem{"plant", 0.40, 0.40, 1.20},
    CatalogueItem{"coat_rack", 0.40, 0.40, 1.80},
    CatalogueItem{"door", 0.10, 0.90, 2.00},
    // bedroom
    CatalogueItem{"bed", 2.00, 1.00, 0.50},
    CatalogueItem{"footlocker", 0.40, 0.80, 0.45},
    CatalogueItem{"bookcase", 0.35, 0.90, 1.80},
    CatalogueItem{"floor_lamp", 0.35, 0.35, 1.60},
    CatalogueItem{"square_table", 0.80, 0.80, 0.75},
    // desk top
    CatalogueItem{"book", 0.22, 0.16, 0.03},
    CatalogueItem{"pencil", 0.18, 0.01, 0.01},
    CatalogueItem{"plate", 0.20, 0.20, 0.03},
    CatalogueItem{"binder", 0.30, 0.25, 0.04},
    CatalogueItem{"photo_frame", 0.05, 0.15, 0.20},
    CatalogueItem{"potted_plant", 0.12, 0.12, 0.25},
    CatalogueItem{"laptop", 0.25, 0.35, 0.02},
    CatalogueItem{"mug", 0.09, 0.09, 0.10},
    CatalogueItem{"rubiks_cube", 0.06, 0.06, 0.06},
    CatalogueItem{"notepad", 0.15, 0.20, 0.01},
};

} // namespace

std::span<const CatalogueItem> catalogue()
{
    return kItems;
}

const CatalogueItem& catalogue_item(std::string_view label)
{
    for (const auto& item : kItems) {
        if (item.label == label) {
            return item;
        }
    }
    throw SceneError("unknown catalogue item '" + std::string(label) + "'");
}

} // namespace layout
