#include "osm/specfun.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace osm::specfun {

namespace {

constexpr double series_cut = 8.0;
constexpr double asymptotic_cut = 18.0;

void require_nonnegative(double x, const char* who) {
    if (!std::isfinite(x) || x < 0.0)
        throw std::domain_error(std::string(who) + ": argument must be finite and >= 0");
}

void require_positive(double x, const char* who) {
    if (!std::isfinite(x) || x <= 0.0)
        throw std::domain_error(std::string(who) + ": argument must be finite and > 0");
}

// ---------------------------------------------------------------------------
// Ascending series, x < series_cut.
// ---------------------------------------------------------------------------

double j0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m <= 60; ++m) {
        term *= -q / (static_cast<double>(m) * m);
        sum += term;
        if (std::abs(term) < 1e-19) break;
    }
    return sum;
}

double j1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m <= 60; ++m) {
        term *= -q / (static_cast<double>(m) * (m + 1.0));
        sum += term;
        if (std::abs(term) < 1e-19) break;
    }
    return 0.5 * x * sum;
}

double y0_series(double x) {
    // Y0 = (2/pi)[(ln(x/2)+gamma) J0 + sum_{m>=1} (-1)^{m+1} H_m q^m/(m!)^2]
    const double q = 0.25 * x * x;
    double term = 1.0, harmonic = 0.0, sum = 0.0;
    for (int m = 1; m <= 60; ++m) {
        term *= q / (static_cast<double>(m) * m);
        harmonic += 1.0 / m;
        const double contrib = ((m & 1) ? 1.0 : -1.0) * harmonic * term;
        sum += contrib;
        if (std::abs(term) * (harmonic + 1.0) < 1e-19) break;
    }
    return (2.0 / pi) * ((std::log(0.5 * x) + euler_gamma) * j0_series(x) + sum);
}

double y1_series(double x) {
    // Y1 = (2/pi)(ln(x/2)+gamma) J1 - 2/(pi x)
    //      - (x/(2 pi)) sum_{m>=0} (-1)^m (H_m + H_{m+1}) q^m/(m!(m+1)!)
    const double q = 0.25 * x * x;
    double term = 1.0;      // q^m/(m!(m+1)!)
    double hm = 0.0;        // H_m
    double hm1 = 1.0;       // H_{m+1}
    double sum = hm + hm1;  // m = 0 contribution
    double sign = 1.0;
    for (int m = 1; m <= 60; ++m) {
        term *= q / (static_cast<double>(m) * (m + 1.0));
        hm += 1.0 / m;
        hm1 += 1.0 / (m + 1.0);
        sign = -sign;
        sum += sign * (hm + hm1) * term;
        if (term * (hm + hm1) < 1e-19) break;
    }
    return (2.0 / pi) * (std::log(0.5 * x) + euler_gamma) * j1_series(x) - 2.0 / (pi * x) -
           (x / (2.0 * pi)) * sum;
}

// ---------------------------------------------------------------------------
// Quadrature regime, series_cut <= x < asymptotic_cut.
//
//   J_n(x) = (1/pi) int_0^pi cos(x sin t - n t) dt
//   Y_n(x) = (1/pi) int_0^pi sin(x sin t - n t) dt
//            - (1/pi) int_0^inf [e^{n t} + (-1)^n e^{-n t}] e^{-x sinh t} dt
//
// Both integrands are analytic; fixed composite 20-point Gauss-Legendre
// panels drive the quadrature error far below 1e-15 on this x range.
// ---------------------------------------------------------------------------

struct GaussLegendre20 {
    std::array<double, 20> node;
    std::array<double, 20> weight;
};

GaussLegendre20 make_gl20() {
    // Nodes of P_20 on [-1,1] by Newton iteration, weights 2/((1-x^2) P'^2).
    GaussLegendre20 r{};
    const int n = 20;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.node[i] = x;
        r.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const GaussLegendre20& gl20() {
    static const GaussLegendre20 rule = make_gl20();
    return rule;
}

// Fixed node tables for the two integrals (independent of x).
struct OscNode {
    double sin_t, cos_t, w;
};
struct TailNode {
    double sinh_t, two_w, two_sinh_w; // weights folded with the n=0/n=1 factors
};

constexpr int osc_panels = 8;
constexpr int tail_panels = 8;

const std::array<OscNode, osc_panels * 20>& osc_nodes() {
    static const auto tab = [] {
        std::array<OscNode, osc_panels * 20> t{};
        const auto& gl = gl20();
        for (int p = 0; p < osc_panels; ++p) {
            const double a = pi * p / osc_panels, b = pi * (p + 1) / osc_panels;
            const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
            for (int q = 0; q < 20; ++q) {
                const double theta = mid + half * gl.node[q];
                t[p * 20 + q] = {std::sin(theta), std::cos(theta), half * gl.weight[q]};
            }
        }
        return t;
    }();
    return tab;
}

const std::array<TailNode, tail_panels * 20>& tail_nodes() {
    // Truncation T chosen so x*sinh(T) >= 46 for every x >= series_cut.
    static const auto tab = [] {
        std::array<TailNode, tail_panels * 20> t{};
        const auto& gl = gl20();
        const double T = std::asinh(46.0 / series_cut);
        for (int p = 0; p < tail_panels; ++p) {
            const double a = T * p / tail_panels, b = T * (p + 1) / tail_panels;
            const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
            for (int q = 0; q < 20; ++q) {
                const double u = mid + half * gl.node[q];
                const double w = half * gl.weight[q];
                t[p * 20 + q] = {std::sinh(u), 2.0 * w, 2.0 * std::sinh(u) * w};
            }
        }
        return t;
    }();
    return tab;
}

Cyl01 cyl01_quadrature(double x) {
    double j0 = 0.0, j1 = 0.0, y0 = 0.0, y1 = 0.0;
    for (const OscNode& n : osc_nodes()) {
        const double u = x * n.sin_t;
        const double cu = std::cos(u), su = std::sin(u);
        j0 += n.w * cu;
        j1 += n.w * (cu * n.cos_t + su * n.sin_t); // cos(u - t)
        y0 += n.w * su;
        y1 += n.w * (su * n.cos_t - cu * n.sin_t); // sin(u - t)
    }
    double t0 = 0.0, t1 = 0.0;
    for (const TailNode& n : tail_nodes()) {
        const double e = std::exp(-x * n.sinh_t);
        t0 += n.two_w * e;
        t1 += n.two_sinh_w * e;
    }
    return {j0 / pi, j1 / pi, (y0 - t0) / pi, (y1 - t1) / pi};
}

BesselPair j01_quadrature(double x) {
    double j0 = 0.0, j1 = 0.0;
    for (const OscNode& n : osc_nodes()) {
        const double u = x * n.sin_t;
        const double cu = std::cos(u), su = std::sin(u);
        j0 += n.w * cu;
        j1 += n.w * (cu * n.cos_t + su * n.sin_t);
    }
    return {j0 / pi, j1 / pi};
}

// ---------------------------------------------------------------------------
// Hankel asymptotic expansion, x >= asymptotic_cut.
//
//   J_nu = sqrt(2/(pi x)) (P cos chi - Q sin chi),
//   Y_nu = sqrt(2/(pi x)) (P sin chi + Q cos chi),  chi = x - (2 nu + 1) pi/4,
//   coefficients a_k = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k), signs from
//   i^k.  Terms are summed until the first one below 1e-19 or until they stop
//   decreasing; at x >= 18 the smallest term is under 3e-16.
// ---------------------------------------------------------------------------

struct PhaseAmp {
    double p, q;
};

PhaseAmp asymptotic_pq(int nu, double x) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double ak = 1.0;      // a_k / x^k accumulated
    double prev = 1.0e30; // previous |term|
    for (int k = 0; k < 40; ++k) {
        const double odd = 2.0 * k + 1.0;
        ak *= (mu - odd * odd) / (8.0 * (k + 1.0) * x);
        const double mag = std::abs(ak);
        if (mag >= prev) break; // smallest-term truncation
        prev = mag;
        const int k1 = k + 1; // power of i accompanying a_{k+1}
        const double sgn = (k1 & 2) ? -1.0 : 1.0;
        if (k1 & 1)
            q += sgn * ak;
        else
            p += sgn * ak;
        if (mag < 1e-19) break;
    }
    return {p, q};
}

Cyl01 cyl01_asymptotic(double x) {
    const double amp = std::sqrt(2.0 / (pi * x));
    Cyl01 r{};
    {
        const PhaseAmp pq = asymptotic_pq(0, x);
        const double chi = x - 0.25 * pi;
        const double c = std::cos(chi), s = std::sin(chi);
        r.j0 = amp * (pq.p * c - pq.q * s);
        r.y0 = amp * (pq.p * s + pq.q * c);
    }
    {
        const PhaseAmp pq = asymptotic_pq(1, x);
        const double chi = x - 0.75 * pi;
        const double c = std::cos(chi), s = std::sin(chi);
        r.j1 = amp * (pq.p * c - pq.q * s);
        r.y1 = amp * (pq.p * s + pq.q * c);
    }
    return r;
}

} // namespace

double bessel_j0(double x) {
    require_nonnegative(x, "bessel_j0");
    if (x < series_cut) return j0_series(x);
    if (x < asymptotic_cut) return cyl01_quadrature(x).j0;
    return cyl01_asymptotic(x).j0;
}

double bessel_j1(double x) {
    require_nonnegative(x, "bessel_j1");
    if (x < series_cut) return j1_series(x);
    if (x < asymptotic_cut) return cyl01_quadrature(x).j1;
    return cyl01_asymptotic(x).j1;
}

double bessel_y0(double x) {
    require_positive(x, "bessel_y0");
    if (x < series_cut) return y0_series(x);
    if (x < asymptotic_cut) return cyl01_quadrature(x).y0;
    return cyl01_asymptotic(x).y0;
}

double bessel_y1(double x) {
    require_positive(x, "bessel_y1");
    if (x < series_cut) return y1_series(x);
    if (x < asymptotic_cut) return cyl01_quadrature(x).y1;
    return cyl01_asymptotic(x).y1;
}

BesselPair bessel_j01(double x) {
    require_nonnegative(x, "bessel_j01");
    if (x < series_cut) return {j0_series(x), j1_series(x)};
    if (x < asymptotic_cut) return j01_quadrature(x);
    const Cyl01 c = cyl01_asymptotic(x);
    return {c.j0, c.j1};
}

Cyl01 cyl01(double x) {
    require_positive(x, "cyl01");
    if (x < series_cut) return {j0_series(x), j1_series(x), y0_series(x), y1_series(x)};
    if (x < asymptotic_cut) return cyl01_quadrature(x);
    return cyl01_asymptotic(x);
}

Complex hankel1_0(double x) {
    require_positive(x, "hankel1_0");
    if (x < series_cut) return {j0_series(x), y0_series(x)};
    const Cyl01 c = (x < asymptotic_cut) ? cyl01_quadrature(x) : cyl01_asymptotic(x);
    return {c.j0, c.y0};
}

Complex hankel1_1(double x) {
    require_positive(x, "hankel1_1");
    if (x < series_cut) return {j1_series(x), y1_series(x)};
    const Cyl01 c = (x < asymptotic_cut) ? cyl01_quadrature(x) : cyl01_asymptotic(x);
    return {c.j1, c.y1};
}

} // namespace osm::specfun
