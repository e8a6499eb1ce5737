#include <doctest.h>

#include <cmath>
#include <vector>

#include "osm/specfun.hpp"

using namespace osm;
using namespace osm::specfun;

namespace {

// Independent truncated power-series evaluations (40 terms), usable for
// small arguments only; these deliberately do not share code with the
// library implementation.
double j0_series_oracle(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m <= 40; ++m) {
        term *= -q / (static_cast<double>(m) * m);
        sum += term;
    }
    return sum;
}

double j1_series_oracle(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m <= 40; ++m) {
        term *= -q / (static_cast<double>(m) * (m + 1.0));
        sum += term;
    }
    return 0.5 * x * sum;
}

struct Ref {
    double x;
    double value;
};

// Reference values spanning all evaluation regimes, including the branch
// boundaries near 8 and 18 (50-digit evaluations, rounded).
const std::vector<Ref> j0_ref = {
    {1e-08, 0.99999999999999997500}, {1e-06, 0.99999999999975000000},
    {0.001, 0.99999975000001562500}, {0.1, 0.99750156206604003200},
    {0.5, 0.93846980724081290423},   {1.0, 0.76519768655796655145},
    {2.0, 0.22389077914123566805},   {3.5, -0.38012773998726337738},
    {5.0, -0.17759677131433830435},  {7.0, 0.30007927051955559665},
    {7.9, 0.19436184484127823969},   {8.0, 0.17165080713755390609},
    {8.1, 0.14751745404437767030},   {10.0, -0.24593576445134833520},
    {12.0, 0.047689310796833536624}, {14.0, 0.17107347611045865906},
    {16.0, -0.17489907398362918483}, {17.9, -0.032109457686555160083},
    {18.0, -0.013355805721984110885},{18.1, 0.0054270248384928266618},
    {25.0, 0.096266783275958116174}, {50.0, 0.055812327669251815005},
    {100.0, 0.019985850304223122424},{317.0, -0.020858619092434665301},
    {1000.0, 0.024786686152420174561}};

const std::vector<Ref> j1_ref = {
    {1e-08, 5.0000000000000000421e-9},{1e-06, 4.9999999999993747737e-7},
    {0.001, 0.00049999993750000261457},{0.1, 0.049937526036242000321},
    {0.5, 0.24226845767487388638},   {1.0, 0.44005058574493351596},
    {2.0, 0.57672480775687338720},   {3.5, 0.13737752736232718572},
    {5.0, -0.32757913759146522204},  {7.0, -0.0046828234823458326991},
    {7.9, 0.21917939992175120327},   {8.0, 0.23463634685391462438},
    {8.1, 0.24760776698159287663},   {10.0, 0.043472746168861436670},
    {12.0, -0.22344710449062761237}, {14.0, 0.13337515469879325311},
    {16.0, 0.090397175661304186239}, {17.9, -0.18676536891349662526},
    {18.0, -0.18799488548806959401}, {18.1, -0.18735018270637614665},
    {25.0, -0.12535024958028990465}, {50.0, -0.097511828125175137661},
    {100.0, -0.077145352014112158033},{317.0, 0.039630479778886745058},
    {1000.0, 0.0047283119070895239176}};

const std::vector<Ref> y0_ref = {
    {1e-08, -11.800773877179530755}, {1e-06, -8.8690314816594437317},
    {0.001, -4.4714166113759232557}, {0.1, -1.5342386513503668083},
    {0.5, -0.44451873350670655715},  {1.0, 0.088256964215676957983},
    {2.0, 0.51037567264974511960},   {3.5, 0.18902194392082650675},
    {5.0, -0.30851762524903378007},  {7.0, -0.025949743967209264884},
    {7.9, 0.20652094814437576859},   {8.0, 0.22352148938756622053},
    {8.1, 0.23809132870223480863},   {10.0, 0.055671167283599391424},
    {12.0, -0.22523731263436143369}, {14.0, 0.12719256858218368838},
    {16.0, 0.095810997080712403142}, {17.9, -0.18579701323143917730},
    {18.0, -0.18755215961141061464}, {18.1, -0.18742880920003773403},
    {25.0, -0.12724943226800613783}, {50.0, -0.098064995470077079029},
    {100.0, -0.077244313365083152254},{317.0, 0.039663330390020271700},
    {1000.0, 0.0047159179776228133998}};

const std::vector<Ref> y1_ref = {
    {1e-08, -63661977.236758193571}, {1e-06, -636619.77237217504257},
    {0.001, -636.62216723113941482}, {0.1, -6.4589510947020266377},
    {0.5, -1.4714723926702430692},   {1.0, -0.78121282130028871655},
    {2.0, -0.10703243154093754689},  {3.5, 0.41018841788751188287},
    {5.0, 0.14786314339122684480},   {7.0, -0.30266723702418487006},
    {7.9, -0.18172107728057312765},  {8.0, -0.15806046173124749426},
    {8.1, -0.13314879595249592615},  {10.0, 0.24901542420695388392},
    {12.0, -0.057099218260896521050},{14.0, -0.16664484185617226675},
    {16.0, 0.17797516893941685963},  {17.9, 0.026936072880586999122},
    {18.0, 0.0081551322782214420237},{18.1, -0.010602764475536651824},
    {25.0, -0.098829964783237410053},{50.0, -0.056795668562014767942},
    {100.0, -0.020372312002759793305},{317.0, 0.020921205340820627656},
    {1000.0, -0.024784331292351778915}};

} // namespace

TEST_CASE("bessel_j0 basics and series oracle") {
    CHECK(bessel_j0(0.0) == 1.0);
    // first zero of J0, located independently by bisection on the series
    double lo = 2.0, hi = 3.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (j0_series_oracle(lo) * j0_series_oracle(mid) <= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    const double root = 0.5 * (lo + hi);
    CHECK(root == doctest::Approx(2.404825557695773).epsilon(1e-12));
    CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-10);
    CHECK(std::abs(bessel_j0(5.0) - j0_series_oracle(5.0)) < 1e-12);
}

TEST_CASE("bessel_j1 basics and derivative relation") {
    CHECK(bessel_j1(0.0) == 0.0);
    CHECK(std::abs(bessel_j1(1.0) - j1_series_oracle(1.0)) < 1e-12);
    // J1 = -J0' by central differences
    const double h = 1e-5;
    for (double x : {0.7, 3.3, 9.4, 21.0}) {
        const double fd = (bessel_j0(x - h) - bessel_j0(x + h)) / (2.0 * h);
        CHECK(bessel_j1(x) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("reference values across all regimes") {
    for (const Ref& r : j0_ref) CHECK(std::abs(bessel_j0(r.x) - r.value) < 1e-12);
    for (const Ref& r : j1_ref) CHECK(std::abs(bessel_j1(r.x) - r.value) < 1e-12);
    for (const Ref& r : y0_ref) CHECK(std::abs(bessel_y0(r.x) - r.value) < 1e-10);
    for (const Ref& r : y1_ref) {
        const double tol = 1e-10 * std::max(1.0, std::abs(r.value));
        CHECK(std::abs(bessel_y1(r.x) - r.value) < tol);
    }
}

TEST_CASE("hankel values compose J and Y") {
    for (double x : {1e-8, 0.3, 2.0, 8.05, 12.0, 40.0, 500.0}) {
        const Complex h0 = hankel1_0(x);
        const Complex h1 = hankel1_1(x);
        CHECK(h0.real() == bessel_j0(x));
        CHECK(h0.imag() == bessel_y0(x));
        CHECK(std::abs(h1.real() - bessel_j1(x)) < 1e-12);
        CHECK(std::abs(h1.imag() - bessel_y1(x)) < 1e-12 * std::max(1.0, std::abs(h1.imag())));
    }
}

TEST_CASE("hankel small-argument limits") {
    // Y0(x) ~ (2/pi)(ln(x/2) + gamma)
    const double x = 1e-6;
    const double lead = (2.0 / pi) * (std::log(0.5 * x) + euler_gamma);
    CHECK(hankel1_0(x).imag() == doctest::Approx(lead).epsilon(1e-6));
    // x H1(x) -> -2i/pi
    const Complex lim = x * hankel1_1(x);
    CHECK(std::abs(lim - Complex(0.0, -2.0 / pi)) / std::abs(lim) < 1e-4);
}

TEST_CASE("hankel large-argument modulus") {
    const double x = 50.0;
    CHECK(std::abs(hankel1_0(x)) == doctest::Approx(std::sqrt(2.0 / (pi * x))).epsilon(0.01));
}

TEST_CASE("hankel derivative identity H1 = -H0'") {
    const double h = 1e-5;
    for (double x : {0.5, 4.0, 11.0, 30.0}) {
        const Complex fd = -(hankel1_0(x + h) - hankel1_0(x - h)) / (2.0 * h);
        CHECK(std::abs(hankel1_1(x) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("Wronskian J1 Y0 - J0 Y1 = 2/(pi x)") {
    for (int i = 0; i <= 60; ++i) {
        const double x = 0.1 * std::pow(1000.0, i / 60.0); // log-spaced on [0.1, 100]
        const double w = bessel_j1(x) * bessel_y0(x) - bessel_j0(x) * bessel_y1(x);
        const double expected = 2.0 / (pi * x);
        CHECK(std::abs(w - expected) / expected < 1e-8);
    }
}

TEST_CASE("recurrence Y0' = -Y1 by finite differences") {
    const double h = 1e-5;
    for (double x : {0.8, 5.5, 13.0, 60.0}) {
        const double fd = (bessel_y0(x + h) - bessel_y0(x - h)) / (2.0 * h);
        CHECK(-bessel_y1(x) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("outputs finite on stated domains") {
    for (int i = 0; i <= 200; ++i) {
        const double x = 1e-8 * std::pow(1e11, i / 200.0); // log-spaced on [1e-8, 1e3]
        CHECK(std::isfinite(bessel_j0(x)));
        CHECK(std::isfinite(bessel_j1(x)));
        const Complex h0 = hankel1_0(x), h1 = hankel1_1(x);
        CHECK(std::isfinite(h0.real()));
        CHECK(std::isfinite(h0.imag()));
        CHECK(std::isfinite(h1.real()));
        CHECK(std::isfinite(h1.imag()));
    }
}

TEST_CASE("fused evaluations match the scalar ones") {
    for (double x : {0.4, 7.99, 8.0, 9.7, 17.99, 18.0, 44.0}) {
        const auto jp = bessel_j01(x);
        CHECK(jp.j0 == bessel_j0(x));
        CHECK(jp.j1 == bessel_j1(x));
        const auto c = cyl01(x);
        CHECK(c.y0 == bessel_y0(x));
        CHECK(c.y1 == bessel_y1(x));
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(bessel_j0(-1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_j1(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(hankel1_0(0.0), std::domain_error);
    CHECK_THROWS_AS(hankel1_1(-2.0), std::domain_error);
    CHECK_THROWS_AS(bessel_y0(0.0), std::domain_error);
}
