#include "osm/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "osm/errors.hpp"

namespace osm {

Point2 kite_boundary(double t) {
    return {(std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65) / 2.0, 1.5 * std::sin(t) / 2.5};
}

namespace {

constexpr int kite_segments = 4096;

const std::vector<Point2>& kite_polyline() {
    static const std::vector<Point2> poly = [] {
        std::vector<Point2> p(kite_segments);
        for (int i = 0; i < kite_segments; ++i) p[i] = kite_boundary(two_pi * i / kite_segments);
        return p;
    }();
    return poly;
}

// Even-odd crossing test against the dense kite polyline; robust for the
// non-convex boundary.
bool kite_contains(Point2 p) {
    const auto& poly = kite_polyline();
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point2 a = poly[i], b = poly[j];
        if ((a.x2 > p.x2) != (b.x2 > p.x2)) {
            const double xc = a.x1 + (p.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
            if (p.x1 < xc) inside = !inside;
        }
    }
    return inside;
}

double segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * ab);
}

double kite_boundary_distance(Point2 p) {
    const auto& poly = kite_polyline();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
        best = std::min(best, segment_distance(p, poly[i], poly[j]));
    return best;
}

double rectangle_distance(const Rectangle& r, Point2 p) {
    const double d1 = std::max(std::abs(p.x1 - r.center.x1) - r.half_width1, 0.0);
    const double d2 = std::max(std::abs(p.x2 - r.center.x2) - r.half_width2, 0.0);
    return std::hypot(d1, d2);
}

// Distance from an interior point to the boundary of a primitive; used for
// points trapped inside the subtracted part of a difference.
double inner_boundary_distance(const Shape& s, Point2 p) {
    return std::visit(
        [&](const auto& node) -> double {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Disk>) {
                return std::max(node.radius - distance(p, node.center), 0.0);
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                const double d1 = node.half_width1 - std::abs(p.x1 - node.center.x1);
                const double d2 = node.half_width2 - std::abs(p.x2 - node.center.x2);
                return std::max(std::min(d1, d2), 0.0);
            } else if constexpr (std::is_same_v<T, Kite>) {
                return kite_boundary_distance(p);
            } else if constexpr (std::is_same_v<T, Union>) {
                double best = 0.0;
                for (const Shape& part : node.parts)
                    if (contains(part, p)) best = std::max(best, inner_boundary_distance(part, p));
                return best;
            } else {
                return 0.0; // conservative for the remaining node kinds
            }
        },
        s.node);
}

} // namespace

bool contains(const Shape& s, Point2 p) {
    return std::visit(
        [&](const auto& node) -> bool {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Kite>) {
                return kite_contains(p);
            } else if constexpr (std::is_same_v<T, Disk>) {
                return distance(p, node.center) < node.radius;
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                return std::abs(p.x1 - node.center.x1) < node.half_width1 &&
                       std::abs(p.x2 - node.center.x2) < node.half_width2;
            } else if constexpr (std::is_same_v<T, SquareWithCavity>) {
                const bool in_square =
                    std::abs(p.x1) < node.half_width && std::abs(p.x2) < node.half_width;
                return in_square && norm(p) > node.cavity_radius;
            } else if constexpr (std::is_same_v<T, Union>) {
                for (const Shape& part : node.parts)
                    if (contains(part, p)) return true;
                return false;
            } else { // Difference
                if (node.parts.empty() || !contains(node.parts.front(), p)) return false;
                for (std::size_t i = 1; i < node.parts.size(); ++i)
                    if (contains(node.parts[i], p)) return false;
                return true;
            }
        },
        s.node);
}

double distance_to(const Shape& s, Point2 p) {
    if (contains(s, p)) return 0.0;
    return std::visit(
        [&](const auto& node) -> double {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Kite>) {
                return kite_boundary_distance(p);
            } else if constexpr (std::is_same_v<T, Disk>) {
                return std::max(distance(p, node.center) - node.radius, 0.0);
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                return rectangle_distance(node, p);
            } else if constexpr (std::is_same_v<T, SquareWithCavity>) {
                if (norm(p) <= node.cavity_radius) return node.cavity_radius - norm(p);
                Rectangle square{{0.0, 0.0}, node.half_width, node.half_width};
                return rectangle_distance(square, p);
            } else if constexpr (std::is_same_v<T, Union>) {
                double best = std::numeric_limits<double>::infinity();
                for (const Shape& part : node.parts) best = std::min(best, distance_to(part, p));
                return best;
            } else { // Difference: outside, or trapped inside a subtracted part
                if (node.parts.empty()) return std::numeric_limits<double>::infinity();
                if (!contains(node.parts.front(), p)) return distance_to(node.parts.front(), p);
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 1; i < node.parts.size(); ++i)
                    if (contains(node.parts[i], p))
                        best = std::min(best, inner_boundary_distance(node.parts[i], p));
                return best;
            }
        },
        s.node);
}

BoundingBox shape_bounding_box(const Shape& s) {
    return std::visit(
        [&](const auto& node) -> BoundingBox {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, Kite>) {
                static const BoundingBox box = [] {
                    BoundingBox b{1e300, -1e300, 1e300, -1e300};
                    for (const Point2& p : kite_polyline()) {
                        b.x1_lo = std::min(b.x1_lo, p.x1);
                        b.x1_hi = std::max(b.x1_hi, p.x1);
                        b.x2_lo = std::min(b.x2_lo, p.x2);
                        b.x2_hi = std::max(b.x2_hi, p.x2);
                    }
                    return b;
                }();
                return box;
            } else if constexpr (std::is_same_v<T, Disk>) {
                return {node.center.x1 - node.radius, node.center.x1 + node.radius,
                        node.center.x2 - node.radius, node.center.x2 + node.radius};
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                return {node.center.x1 - node.half_width1, node.center.x1 + node.half_width1,
                        node.center.x2 - node.half_width2, node.center.x2 + node.half_width2};
            } else if constexpr (std::is_same_v<T, SquareWithCavity>) {
                return {-node.half_width, node.half_width, -node.half_width, node.half_width};
            } else if constexpr (std::is_same_v<T, Union>) {
                BoundingBox box{0.0, 0.0, 0.0, 0.0};
                bool first = true;
                for (const Shape& part : node.parts) {
                    const BoundingBox b = shape_bounding_box(part);
                    if (first) {
                        box = b;
                        first = false;
                    } else {
                        box.x1_lo = std::min(box.x1_lo, b.x1_lo);
                        box.x1_hi = std::max(box.x1_hi, b.x1_hi);
                        box.x2_lo = std::min(box.x2_lo, b.x2_lo);
                        box.x2_hi = std::max(box.x2_hi, b.x2_hi);
                    }
                }
                return box;
            } else { // Difference: the outer part bounds the set
                if (node.parts.empty()) return {0.0, 0.0, 0.0, 0.0};
                return shape_bounding_box(node.parts.front());
            }
        },
        s.node);
}

ContrastMap::ContrastMap(std::vector<Piece> pieces_, BoundingBox box_)
    : pieces(std::move(pieces_)), box(box_) {
    if (box.x1_lo >= box.x1_hi || box.x2_lo >= box.x2_hi)
        throw ConfigError("ContrastMap: empty bounding box");
    for (const Piece& piece : pieces)
        if (piece.eta.imag() < 0.0)
            throw ConfigError("ContrastMap: Im(eta) must be >= 0 on every piece");
}

Complex ContrastMap::eval(Point2 p) const {
    for (const Piece& piece : pieces)
        if (contains(piece.shape, p)) return piece.eta;
    return Complex(0.0);
}

bool ContrastMap::member(Point2 p) const {
    for (const Piece& piece : pieces)
        if (contains(piece.shape, p)) return true;
    return false;
}

double ContrastMap::distance(Point2 p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Piece& piece : pieces) best = std::min(best, distance_to(piece.shape, p));
    return best;
}

BoundingBox default_support_box() { return {-1.2, 1.2, -1.2, 1.2}; }

ContrastMap catalogue(const std::string& name) {
    const BoundingBox box = default_support_box();
    if (name == "kite") {
        return ContrastMap({{Shape{Kite{}}, Complex(0.5, 0.1)}}, box);
    }
    if (name == "disk_rectangle") {
        Union u;
        u.parts.push_back(Shape{Disk{{-0.6, 0.6}, 0.4}});
        u.parts.push_back(Shape{Rectangle{{0.6, -0.6}, 0.45, 0.25}});
        return ContrastMap({{Shape{std::move(u)}, Complex(0.5, 0.0)}}, box);
    }
    if (name == "square_cavity") {
        return ContrastMap({{Shape{SquareWithCavity{0.5, 0.3}}, Complex(1.0, 0.0)}}, box);
    }
    throw ConfigError("catalogue: unknown medium \"" + name + "\"");
}

SamplingGrid::SamplingGrid(double a1, double b1, double a2, double b2, int m1, int m2)
    : x1_lo(a1), x1_hi(b1), x2_lo(a2), x2_hi(b2), n1(m1), n2(m2) {
    if (n1 < 2 || n2 < 2) throw ConfigError("SamplingGrid: counts must be >= 2");
    if (x1_lo >= x1_hi || x2_lo >= x2_hi) throw ConfigError("SamplingGrid: empty ranges");
}

std::vector<Point2> SamplingGrid::points() const {
    std::vector<Point2> pts;
    pts.reserve(count());
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) pts.push_back(point(i1, i2));
    return pts;
}

std::vector<double> aperture_angles(int n, Aperture aperture) {
    if (n < 1) throw ConfigError("aperture_angles: need at least one angle");
    std::vector<double> angles(n);
    if (aperture.full() || n == 1) {
        for (int j = 0; j < n; ++j) angles[j] = aperture.lo + aperture.length() * j / n;
    } else {
        for (int j = 0; j < n; ++j) angles[j] = aperture.lo + aperture.length() * j / (n - 1);
    }
    return angles;
}

std::vector<Receiver> receivers(const MeasurementCircle& circle) {
    if (circle.radius <= 0.0) throw ConfigError("receivers: radius must be > 0");
    std::vector<Receiver> out;
    out.reserve(circle.n_receivers);
    for (double theta : aperture_angles(circle.n_receivers, circle.aperture)) {
        const Direction2 nu = Direction2::from_angle(theta);
        out.push_back({circle.radius * nu.as_point(), nu});
    }
    return out;
}

std::vector<Direction2> incident_directions(int n, Aperture aperture) {
    std::vector<Direction2> out;
    out.reserve(n);
    for (double theta : aperture_angles(n, aperture)) out.push_back(Direction2::from_angle(theta));
    return out;
}

} // namespace osm
