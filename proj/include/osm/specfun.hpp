#ifndef OSM_SPECFUN_HPP
#define OSM_SPECFUN_HPP

#include "osm/types.hpp"

namespace osm::specfun {

// Cylindrical Bessel/Hankel functions of orders 0 and 1 for real arguments.
//
// Evaluation is self-contained and split into three regimes:
//   x < 8    ascending power series (log form for Y to avoid cancellation),
//   8..18    Gauss-Legendre quadrature of the classical integral
//            representations (Bessel's integral plus the exponential tail
//            for Y), which stays accurate where both the series and the
//            large-argument expansion degrade in double precision,
//   x >= 18  Hankel asymptotic expansion in phase/amplitude form, truncated
//            at its smallest term.
//
// Absolute error is below 1e-12 for J and below 1e-10 for H on the stated
// domains ([0, 1e3] resp. [1e-8, 1e3]).

double bessel_j0(double x); // x >= 0
double bessel_j1(double x); // x >= 0
double bessel_y0(double x); // x > 0
double bessel_y1(double x); // x > 0

Complex hankel1_0(double x); // J0(x) + i Y0(x), x > 0
Complex hankel1_1(double x); // J1(x) + i Y1(x), x > 0

// Fused evaluations sharing quadrature nodes; the bulk of the kernel
// assembly goes through these.
struct BesselPair {
    double j0;
    double j1;
};
BesselPair bessel_j01(double x); // x >= 0

struct Cyl01 {
    double j0;
    double j1;
    double y0;
    double y1;
};
Cyl01 cyl01(double x); // x > 0

} // namespace osm::specfun

#endif
