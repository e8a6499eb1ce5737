#ifndef OSM_TYPES_HPP
#define OSM_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace osm {

using Complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
inline constexpr double two_pi = 2.0 * pi;

struct Point2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x1, s * p.x2}; }
inline double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Point2 p) { return std::hypot(p.x1, p.x2); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

// Unit vector on S^1. The constructor enforces |d| = 1 to 1e-12.
struct Direction2 {
    double x1;
    double x2;

    Direction2(double c1, double c2) : x1(c1), x2(c2) {
        const double n2 = c1 * c1 + c2 * c2;
        if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-12)
            throw std::invalid_argument("Direction2: components must form a unit vector");
    }

    static Direction2 from_angle(double theta) {
        return Direction2(std::cos(theta), std::sin(theta));
    }

    double angle() const { return std::atan2(x2, x1); }
    Point2 as_point() const { return {x1, x2}; }
    Direction2 reversed() const { return Direction2(-x1, -x2); }
};

inline double dot(Direction2 d, Point2 p) { return d.x1 * p.x1 + d.x2 * p.x2; }
inline double dot(Point2 p, Direction2 d) { return dot(d, p); }
inline double dot(Direction2 a, Direction2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

// Dense row-major complex matrix, sized once at construction.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Complex(0.0)) {}

    Complex& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool same_shape(const ComplexMatrix& o) const { return rows == o.rows && cols == o.cols; }
};

inline double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const Complex& v : m.data) s += std::norm(v);
    return std::sqrt(s);
}

} // namespace osm

#endif
