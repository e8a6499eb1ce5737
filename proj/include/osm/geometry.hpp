#ifndef OSM_GEOMETRY_HPP
#define OSM_GEOMETRY_HPP

#include <string>
#include <variant>
#include <vector>

#include "osm/types.hpp"

namespace osm {

// ---------------------------------------------------------------------------
// Scatterer shapes
// ---------------------------------------------------------------------------

// The kite-shaped boundary from the object catalogue:
//   t -> ((cos t + 0.65 cos 2t - 0.65)/2, 1.5 sin t / 2.5),  t in [0, 2 pi].
Point2 kite_boundary(double t);

struct Kite {};

struct Disk {
    Point2 center;
    double radius;
};

struct Rectangle {
    Point2 center;
    double half_width1;
    double half_width2;
};

// Axis-aligned square centered at the origin with a circular hole (the
// closed disk of cavity_radius is excluded).
struct SquareWithCavity {
    double half_width;
    double cavity_radius;
};

struct Shape;

struct Union {
    std::vector<Shape> parts;
};

// parts[0] minus the union of the remaining parts.
struct Difference {
    std::vector<Shape> parts;
};

struct Shape {
    std::variant<Kite, Disk, Rectangle, SquareWithCavity, Union, Difference> node;
};

bool contains(const Shape& s, Point2 p);

// Distance from p to the shape as a point set (0 inside).  Exact for the
// primitives and unions; for differences the inner region must be strictly
// interior to the outer one (the catalogue cavity case).
double distance_to(const Shape& s, Point2 p);

struct BoundingBox;
BoundingBox shape_bounding_box(const Shape& s);

// ---------------------------------------------------------------------------
// Contrast function
// ---------------------------------------------------------------------------

struct BoundingBox {
    double x1_lo, x1_hi, x2_lo, x2_hi;
};

// Piecewise-constant contrast eta with compact support.  The first piece
// containing a point wins; outside all pieces eta = 0.  Im(eta) >= 0 is
// enforced on construction.
struct ContrastMap {
    struct Piece {
        Shape shape;
        Complex eta;
    };
    std::vector<Piece> pieces;
    BoundingBox box; // declared support bound

    ContrastMap(std::vector<Piece> pieces_, BoundingBox box_);

    Complex eval(Point2 p) const;
    bool member(Point2 p) const; // inside the support
    double distance(Point2 p) const;
};

inline Complex contrast_eval(const ContrastMap& map, Point2 p) { return map.eval(p); }

// Catalogue media: "kite" (eta = 0.5 + 0.1i), "disk_rectangle" (eta = 0.5),
// "square_cavity" (eta = 1).  Support boxes are (-1.2, 1.2)^2.
ContrastMap catalogue(const std::string& name);
BoundingBox default_support_box();

// ---------------------------------------------------------------------------
// Sampling grid and measurement geometry
// ---------------------------------------------------------------------------

struct SamplingGrid {
    double x1_lo, x1_hi, x2_lo, x2_hi;
    int n1, n2; // >= 2 each; endpoints included

    SamplingGrid(double a1, double b1, double a2, double b2, int m1, int m2);

    double x1(int i) const { return x1_lo + (x1_hi - x1_lo) * i / (n1 - 1); }
    double x2(int j) const { return x2_lo + (x2_hi - x2_lo) * j / (n2 - 1); }
    Point2 point(int i1, int i2) const { return {x1(i1), x2(i2)}; }
    std::size_t count() const { return static_cast<std::size_t>(n1) * n2; }
    std::size_t index(int i1, int i2) const { return static_cast<std::size_t>(i1) * n2 + i2; }
    std::vector<Point2> points() const;
};

// Angular interval.  A full circle is sampled half-open (the duplicate
// endpoint is dropped); a partial aperture is closed and includes both ends.
struct Aperture {
    double lo = 0.0;
    double hi = two_pi;

    bool full() const { return std::abs((hi - lo) - two_pi) <= 1e-12; }
    double length() const { return hi - lo; }
};

inline Aperture full_aperture() { return {0.0, two_pi}; }
inline Aperture bottom_half_aperture() { return {pi, two_pi}; }

std::vector<double> aperture_angles(int n, Aperture aperture);

struct MeasurementCircle {
    double radius;
    int n_receivers;
    Aperture aperture;
};

struct Receiver {
    Point2 position;
    Direction2 normal; // outward, position / radius
};

std::vector<Receiver> receivers(const MeasurementCircle& circle);
std::vector<Direction2> incident_directions(int n, Aperture aperture);

} // namespace osm

#endif
