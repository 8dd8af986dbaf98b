#include "layout/svg.hpp"

#include <array>
#include <charconv>
#include <set>
#include <tuple>

namespace layout {

namespace {

std::string num(double v)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 4);
    std::string s(buf.data(), end);
    while (s.back() == '0') {
        s.pop_back();
    }
    if (s.back() == '.') {
        s.pop_back();
    }
    return s == "-0" ? "0" : s;
}

std::string escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string point(const Vec2& p) { return num(p.x()) + "," + num(p.y()); }

std::string points(std::span<const Vec2> ps)
{
    std::string out;
    for (const Vec2& p : ps) {
        if (!out.empty()) {
            out += ' ';
        }
        out += point(p);
    }
    return out;
}

std::string pose_transform(const Pose& p)
{
    return "translate(" + num(p.position.x()) + " " + num(p.position.y()) + ") rotate(" +
           num(radians_to_degrees(p.orientation)) + ")";
}

std::string rect(const Vec2& center, const Vec2& half)
{
    return "<rect x=\"" + num(center.x() - half.x()) + "\" y=\"" + num(center.y() - half.y()) + "\" width=\"" +
           num(2.0 * half.x()) + "\" height=\"" + num(2.0 * half.y()) + "\"/>";
}

} // namespace

std::string render_svg(const Scene& scene, std::span<const Particle> layout, const SvgOptions& options)
{
    const Aabb box = scene.room.bounds();
    const double m = options.margin;
    const double s = options.pixels_per_meter;
    const Vec2 lo = box.min - Vec2(m, m);
    const Vec2 size = box.max - box.min + Vec2(2 * m, 2 * m);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(size.x() * s) + "\" height=\"" +
           num(size.y() * s) + "\" viewBox=\"0 0 " + num(size.x() * s) + " " + num(size.y() * s) + "\">\n";
    out += "<title>" + escape(scene.name) + "</title>\n";
    // y-up world frame: flip about the bottom edge of the view box.
    out += "<g id=\"world\" transform=\"translate(" + num(-lo.x() * s) + " " + num((size.y() + lo.y()) * s) +
           ") scale(" + num(s) + " " + num(-s) + ")\" stroke-width=\"" + num(1.5 / s) + "\">\n";
    out += "<defs><clipPath id=\"room-clip\"><polygon points=\"" + points(scene.room.boundary) +
           "\"/></clipPath></defs>\n";
    out += "<g id=\"room\"><polygon points=\"" + points(scene.room.boundary) +
           "\" fill=\"#f7f5ef\" stroke=\"#333\"/></g>\n";

    if (options.curves) {
        out += "<g id=\"curves\" fill=\"none\" stroke=\"#2a7ab0\" stroke-dasharray=\"0.1 0.05\">\n";
        for (const auto& g : scene.groups) {
            if (!g.curve) {
                continue;
            }
            const Curve c = transformed(*g.curve, layout[g.particle].pose());
            std::vector<Vec2> ps;
            const int n = c.kind == CurveKind::Arc ? 48 : 1;
            for (int i = 0; i <= n; ++i) {
                ps.push_back(c.point_at(static_cast<double>(i) / n));
            }
            out += "<polyline points=\"" + points(ps) + "\"/>\n";
        }
        out += "</g>\n";
    }

    if (options.traffic_lanes) {
        out += "<g id=\"lanes\" clip-path=\"url(#room-clip)\" fill=\"none\" stroke=\"#c0392b\" stroke-opacity=\"0.25\">\n";
        const double reach = (box.max - box.min).norm();
        std::set<std::tuple<std::size_t, double, double, double>> drawn;
        for (const auto& c : scene.constraints) {
            if (c.kind != ConstraintKind::TrafficLane) {
                continue;
            }
            if (!drawn.emplace(c.participants[1], c.direction.x(), c.direction.y(), c.distance).second) {
                continue;
            }
            const Vec2 o = layout[c.participants[1]].position;
            const Vec2 v = c.direction.normalized();
            out += "<line x1=\"" + num(o.x() - reach * v.x()) + "\" y1=\"" + num(o.y() - reach * v.y()) + "\" x2=\"" +
                   num(o.x() + reach * v.x()) + "\" y2=\"" + num(o.y() + reach * v.y()) + "\" stroke-width=\"" +
                   num(2.0 * c.distance) + "\"/>\n";
        }
        out += "</g>\n";
    }

    if (!scene.objects.empty()) {
        out += "<g id=\"objects\" fill=\"#d9c7a3\" stroke=\"#5a4a2f\">\n";
        for (const auto& obj : scene.objects) {
            const Vec2 h = obj.bbox.half_extents;
            out += "<g id=\"obj-" + escape(obj.id) + "\" transform=\"" + pose_transform(layout[obj.particle].pose()) + "\">";
            out += "<title>" + escape(obj.id) + " (" + escape(obj.label) + ")</title>";
            out += rect(Vec2::Zero(), h);
            out += "<polyline fill=\"none\" points=\"" +
                   points(std::array<Vec2, 3>{Vec2(0.4 * h.x(), 0.4 * h.y()), Vec2(h.x(), 0.0),
                                              Vec2(0.4 * h.x(), -0.4 * h.y())}) +
                   "\"/>";
            out += "</g>\n";
        }
        out += "</g>\n";
    }

    if (options.access_regions) {
        out += "<g id=\"access\" fill=\"#27ae60\" fill-opacity=\"0.2\" stroke=\"#27ae60\">\n";
        for (const auto& obj : scene.objects) {
            if (!obj.has_access_regions()) {
                continue;
            }
            out += "<g transform=\"" + pose_transform(layout[obj.particle].pose()) + "\">";
            for (const auto& r : obj.access) {
                if (r.enabled()) {
                    out += rect(r.local_center, r.half_extents);
                }
            }
            out += "</g>\n";
        }
        out += "</g>\n";
    }

    if (options.bounding_circles) {
        out += "<g id=\"circles\" fill=\"none\" stroke=\"#8e44ad\" stroke-opacity=\"0.6\">\n";
        for (const auto& obj : scene.objects) {
            const Vec2 p = layout[obj.particle].position;
            out += "<circle cx=\"" + num(p.x()) + "\" cy=\"" + num(p.y()) + "\" r=\"" +
                   num(obj.bbox.bounding_radius()) + "\"/>\n";
        }
        out += "</g>\n";
    }

    out += "</g>\n</svg>\n";
    return out;
}

} // namespace layout
