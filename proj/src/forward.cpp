#include "osm/forward.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "detail/fft.hpp"
#include "detail/gmres.hpp"
#include "osm/errors.hpp"
#include "osm/specfun.hpp"

namespace osm {

VolumeGrid::VolumeGrid(double lo_, double hi_, int m_) : lo(lo_), hi(hi_), m(m_) {
    if (hi <= lo) throw ConfigError("VolumeGrid: empty box");
    if (m < 2) throw ConfigError("VolumeGrid: need at least 2 cells per side");
}

Complex green(Point2 x, Point2 y, double k) {
    const double r = distance(x, y);
    if (r == 0.0) throw std::domain_error("green: evaluation on the diagonal x = y");
    return Complex(0.0, 0.25) * specfun::hankel1_0(k * r);
}

Complex green_normal_derivative(Point2 x, Direction2 nu, Point2 y, double k) {
    const double r = distance(x, y);
    if (r == 0.0) throw std::domain_error("green_normal_derivative: x = y");
    const double proj = dot(x - y, nu.as_point()) / r;
    return Complex(0.0, -0.25 * k) * specfun::hankel1_1(k * r) * proj;
}

// ---------------------------------------------------------------------------
// LsOperator
// ---------------------------------------------------------------------------

namespace {

std::size_t next_pow2(std::size_t v) {
    std::size_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

// Integral of Phi over the disk of radius rho centered at the singularity:
//   (i pi / 2) [ (rho/k) H1(k rho) + 2i/(pi k^2) ].
Complex singular_cell_integral(double k, double rho) {
    return Complex(0.0, 0.5 * pi) *
           ((rho / k) * specfun::hankel1_1(k * rho) + Complex(0.0, 2.0 / (pi * k * k)));
}

} // namespace

struct LsOperator::Impl {
    VolumeGrid grid;
    double k;
    std::vector<Complex> eta;
    std::vector<std::size_t> nz;
    std::size_t pad;
    detail::Fft2 fft;
    std::vector<Complex> kernel_hat; // FFT of the circulant kernel, 1/pad^2 folded in

    Impl(const ContrastMap& map, const VolumeGrid& g, double k_)
        : grid(g), k(k_), pad(next_pow2(2 * static_cast<std::size_t>(g.m))), fft(pad) {
        if (k <= 0.0) throw ConfigError("assemble_ls_system: wave number must be > 0");
        if (map.box.x1_lo < grid.lo - 1e-12 || map.box.x1_hi > grid.hi + 1e-12 ||
            map.box.x2_lo < grid.lo - 1e-12 || map.box.x2_hi > grid.hi + 1e-12)
            throw ConfigError("assemble_ls_system: volume grid does not cover the contrast support");

        const double h = grid.h();
        const double wavelength = two_pi / k;
        if (h > wavelength / 10.0)
            std::fprintf(stderr,
                         "warning: grid spacing h=%.4g exceeds lambda/10=%.4g; "
                         "refine the solver grid\n",
                         h, wavelength / 10.0);

        eta.resize(grid.cells());
        for (int i = 0; i < grid.m; ++i)
            for (int j = 0; j < grid.m; ++j) {
                const Complex v = map.eval(grid.center(i, j));
                eta[grid.index(i, j)] = v;
                if (v != Complex(0.0)) nz.push_back(grid.index(i, j));
            }

        // Kernel table over cell offsets; the diagonal cell carries the
        // closed-form equal-area-disk integral instead of Phi(0) h^2.
        const double h2 = h * h;
        const double rho = h / std::sqrt(pi);
        const int m = grid.m;
        std::vector<Complex> quadrant(static_cast<std::size_t>(m) * m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                if (a == 0 && b == 0) {
                    quadrant[0] = singular_cell_integral(k, rho);
                } else {
                    const double r = h * std::hypot(static_cast<double>(a), static_cast<double>(b));
                    quadrant[static_cast<std::size_t>(a) * m + b] =
                        Complex(0.0, 0.25) * specfun::hankel1_0(k * r) * h2;
                }
            }

        kernel_hat.assign(pad * pad, Complex(0.0));
        const auto put = [&](long dp, long dq, Complex v) {
            const std::size_t p = static_cast<std::size_t>((dp + static_cast<long>(pad)) % pad);
            const std::size_t q = static_cast<std::size_t>((dq + static_cast<long>(pad)) % pad);
            kernel_hat[p * pad + q] = v;
        };
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                const Complex v = quadrant[static_cast<std::size_t>(a) * m + b];
                put(a, b, v);
                if (a > 0) put(-a, b, v);
                if (b > 0) put(a, -b, v);
                if (a > 0 && b > 0) put(-a, -b, v);
            }
        fft.forward(kernel_hat);
        const double scale = 1.0 / (static_cast<double>(pad) * pad);
        for (Complex& v : kernel_hat) v *= scale;
    }

    void apply(const std::vector<Complex>& u, std::vector<Complex>& out) const {
        const int m = grid.m;
        std::vector<Complex> buf(pad * pad, Complex(0.0));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const std::size_t c = grid.index(i, j);
                buf[static_cast<std::size_t>(i) * pad + j] = eta[c] * u[c];
            }
        fft.forward(buf);
        for (std::size_t t = 0; t < buf.size(); ++t) buf[t] *= kernel_hat[t];
        fft.inverse(buf);
        out.resize(grid.cells());
        const double k2 = k * k;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const std::size_t c = grid.index(i, j);
                out[c] = u[c] - k2 * buf[static_cast<std::size_t>(i) * pad + j];
            }
    }
};

LsOperator::LsOperator(const ContrastMap& map, const VolumeGrid& grid, double k)
    : impl_(std::make_unique<Impl>(map, grid, k)) {}
LsOperator::~LsOperator() = default;
LsOperator::LsOperator(LsOperator&&) noexcept = default;
LsOperator& LsOperator::operator=(LsOperator&&) noexcept = default;

void LsOperator::apply(const std::vector<Complex>& u, std::vector<Complex>& out) const {
    if (u.size() != impl_->grid.cells()) throw std::invalid_argument("LsOperator::apply: bad size");
    impl_->apply(u, out);
}

const VolumeGrid& LsOperator::grid() const { return impl_->grid; }
double LsOperator::wave_number() const { return impl_->k; }
const std::vector<Complex>& LsOperator::contrast() const { return impl_->eta; }
const std::vector<std::size_t>& LsOperator::support_cells() const { return impl_->nz; }

LsOperator assemble_ls_system(const ContrastMap& map, const VolumeGrid& grid, double k) {
    return LsOperator(map, grid, k);
}

// ---------------------------------------------------------------------------
// Forward solve
// ---------------------------------------------------------------------------

ForwardSolution solve_forward(const LsOperator& op, Direction2 d) {
    const VolumeGrid& grid = op.grid();
    const double k = op.wave_number();
    std::vector<Complex> b(grid.cells());
    for (int i = 0; i < grid.m; ++i)
        for (int j = 0; j < grid.m; ++j)
            b[grid.index(i, j)] = std::polar(1.0, k * dot(d, grid.center(i, j)));

    std::vector<Complex> u;
    const auto result = detail::gmres(
        [&op](const std::vector<Complex>& in, std::vector<Complex>& out) { op.apply(in, out); }, b,
        u, forward_solver_tolerance, forward_solver_restart, forward_solver_max_iterations);
    if (!result.converged)
        throw SolverError("solve_forward: GMRES stalled at relative residual " +
                              std::to_string(result.relative_residual),
                          result.relative_residual, result.iterations);

    ForwardSolution sol{k, d, grid, std::move(u), op.contrast(), op.support_cells(),
                        result.relative_residual, result.iterations};
    return sol;
}

ForwardSolution solve_forward(const ContrastMap& map, Direction2 d, double k,
                              const VolumeGrid& grid) {
    return solve_forward(assemble_ls_system(map, grid, k), d);
}

namespace {

void require_exterior(const ForwardSolution& sol, Point2 x, const char* who) {
    const double h = sol.grid.h();
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t c : sol.support_cells) {
        const Point2 y = sol.grid.center(static_cast<int>(c) / sol.grid.m,
                                         static_cast<int>(c) % sol.grid.m);
        dmin = std::min(dmin, distance(x, y));
        if (dmin < h) break;
    }
    if (dmin < h)
        throw std::domain_error(std::string(who) +
                                ": evaluation point is within one cell of the support");
}

} // namespace

Complex scattered_at(const ForwardSolution& sol, Point2 x) {
    require_exterior(sol, x, "scattered_at");
    const double h2 = sol.grid.h() * sol.grid.h();
    Complex sum = 0.0;
    for (std::size_t c : sol.support_cells) {
        const Point2 y =
            sol.grid.center(static_cast<int>(c) / sol.grid.m, static_cast<int>(c) % sol.grid.m);
        sum += green(x, y, sol.k) * sol.contrast[c] * sol.total_field[c];
    }
    return sol.k * sol.k * h2 * sum;
}

Complex scattered_normal_at(const ForwardSolution& sol, Point2 x, Direction2 nu) {
    require_exterior(sol, x, "scattered_normal_at");
    const double h2 = sol.grid.h() * sol.grid.h();
    Complex sum = 0.0;
    for (std::size_t c : sol.support_cells) {
        const Point2 y =
            sol.grid.center(static_cast<int>(c) / sol.grid.m, static_cast<int>(c) % sol.grid.m);
        sum += green_normal_derivative(x, nu, y, sol.k) * sol.contrast[c] * sol.total_field[c];
    }
    return sol.k * sol.k * h2 * sum;
}

Complex farfield_at(const ForwardSolution& sol, Direction2 xhat) {
    const double h2 = sol.grid.h() * sol.grid.h();
    const Complex gamma2 = std::polar(1.0, 0.25 * pi) / std::sqrt(8.0 * pi * sol.k);
    Complex sum = 0.0;
    for (std::size_t c : sol.support_cells) {
        const Point2 y =
            sol.grid.center(static_cast<int>(c) / sol.grid.m, static_cast<int>(c) % sol.grid.m);
        sum += std::polar(1.0, -sol.k * dot(xhat, y)) * sol.contrast[c] * sol.total_field[c];
    }
    return sol.k * sol.k * gamma2 * h2 * sum;
}

// ---------------------------------------------------------------------------
// DiskSeriesOracle
// ---------------------------------------------------------------------------

namespace {

// J_n(z), n = 0..nmax, by Miller's downward recurrence normalized with
// J_0 + 2 sum J_{2k} = 1.  Reliable for the moderate |z| used here.
std::vector<Complex> bessel_j_downward(Complex z, int nmax) {
    if (std::abs(z) < 1e-12) {
        std::vector<Complex> j(nmax + 1, Complex(0.0));
        j[0] = 1.0;
        return j;
    }
    const int start = nmax + 25 + static_cast<int>(std::abs(z));
    std::vector<Complex> f(start + 2, Complex(0.0));
    f[start + 1] = 0.0;
    f[start] = 1e-280;
    for (int n = start; n >= 1; --n) f[n - 1] = (2.0 * n / z) * f[n] - f[n + 1];
    Complex lambda = f[0];
    for (int n = 2; n <= start; n += 2) lambda += 2.0 * f[n];
    std::vector<Complex> j(nmax + 1);
    for (int n = 0; n <= nmax; ++n) j[n] = f[n] / lambda;
    return j;
}

// H^(1)_n(x), n = 0..nmax, upward recurrence from the order-0/1 values
// (stable: the Neumann part dominates upward).
std::vector<Complex> hankel1_upward(double x, int nmax) {
    std::vector<Complex> h(nmax + 1);
    h[0] = specfun::hankel1_0(x);
    if (nmax >= 1) h[1] = specfun::hankel1_1(x);
    for (int n = 1; n < nmax; ++n) h[n + 1] = (2.0 * n / x) * h[n] - h[n - 1];
    return h;
}

} // namespace

DiskSeriesOracle::DiskSeriesOracle(Complex eta0, double radius, double k, int extra_order)
    : radius_(radius), k_(k), tail_ratio_(0.0) {
    if (radius <= 0.0 || k <= 0.0)
        throw std::invalid_argument("DiskSeriesOracle: radius and k must be > 0");
    if (eta0.imag() < 0.0) throw std::invalid_argument("DiskSeriesOracle: Im(eta) must be >= 0");

    const double ka = k * radius;
    const int N =
        std::max(12, static_cast<int>(std::ceil(ka + 8.0 * std::cbrt(ka + 1.0) + 6.0))) +
        extra_order;

    const Complex ki = k * std::sqrt(Complex(1.0) + eta0);
    const std::vector<Complex> ji = bessel_j_downward(ki * radius, N + 1);
    const std::vector<Complex> jo = bessel_j_downward(Complex(ka), N + 1);
    const std::vector<Complex> ho = hankel1_upward(ka, N + 1);

    const auto deriv = [](const std::vector<Complex>& fn, Complex z, int n) {
        if (n == 0) return -fn[1];
        return fn[n - 1] - (static_cast<double>(n) / z) * fn[n];
    };

    coeff_.resize(N + 1);
    double peak = 0.0;
    for (int n = 0; n <= N; ++n) {
        const Complex ji_n = ji[n], jo_n = jo[n], ho_n = ho[n];
        const Complex dji = deriv(ji, ki * radius, n);
        const Complex djo = deriv(jo, Complex(ka), n);
        const Complex dho = deriv(ho, Complex(ka), n);
        const Complex num = ki * dji * jo_n - k * djo * ji_n;
        const Complex den = k * dho * ji_n - ki * dji * ho_n;
        coeff_[n] = num / den;
        peak = std::max(peak, std::abs(coeff_[n]));
    }
    tail_ratio_ = peak > 0.0 ? std::abs(coeff_.back()) / peak : 0.0;
    if (tail_ratio_ > 1e-12)
        std::fprintf(stderr, "warning: disk series truncation tail %.3g exceeds 1e-12\n",
                     tail_ratio_);
}

Complex DiskSeriesOracle::scattered(Point2 x, Direction2 d) const {
    const double r = norm(x);
    if (r <= radius_) throw std::domain_error("DiskSeriesOracle::scattered: |x| must exceed radius");
    const int N = truncation_order();
    const std::vector<Complex> h = hankel1_upward(k_ * r, N);
    const double phi = std::atan2(x.x2, x.x1) - d.angle();
    Complex sum = coeff_[0] * h[0];
    Complex in = 1.0;
    for (int n = 1; n <= N; ++n) {
        in *= Complex(0.0, 1.0);
        sum += 2.0 * in * coeff_[n] * h[n] * std::cos(n * phi);
    }
    return sum;
}

Complex DiskSeriesOracle::scattered_radial_derivative(Point2 x, Direction2 d) const {
    const double r = norm(x);
    if (r <= radius_)
        throw std::domain_error("DiskSeriesOracle::scattered_radial_derivative: |x| <= radius");
    const int N = truncation_order();
    const std::vector<Complex> h = hankel1_upward(k_ * r, N + 1);
    const double phi = std::atan2(x.x2, x.x1) - d.angle();
    const auto dh = [&](int n) {
        if (n == 0) return -h[1];
        return h[n - 1] - (static_cast<double>(n) / (k_ * r)) * h[n];
    };
    Complex sum = coeff_[0] * dh(0);
    Complex in = 1.0;
    for (int n = 1; n <= N; ++n) {
        in *= Complex(0.0, 1.0);
        sum += 2.0 * in * coeff_[n] * dh(n) * std::cos(n * phi);
    }
    return k_ * sum;
}

Complex DiskSeriesOracle::far_field(Direction2 xhat, Direction2 d) const {
    const int N = truncation_order();
    const double phi = xhat.angle() - d.angle();
    Complex sum = coeff_[0];
    for (int n = 1; n <= N; ++n) sum += 2.0 * coeff_[n] * std::cos(n * phi);
    return std::sqrt(2.0 / (pi * k_)) * std::polar(1.0, -0.25 * pi) * sum;
}

Complex disk_series_oracle(Complex eta0, double radius, double k, Point2 x, Direction2 d) {
    return DiskSeriesOracle(eta0, radius, k).scattered(x, d);
}

} // namespace osm
