#include "osm/imaging.hpp"

#include <algorithm>
#include <cmath>

#include "detail/parallel.hpp"
#include "osm/errors.hpp"
#include "osm/specfun.hpp"

namespace osm {

Complex phi_test(Point2 z, Direction2 d, double k) {
    return std::polar(1.0, -k * dot(d, z));
}

FarFieldGreen far_field_green2(Direction2 xhat, Point2 y, Direction2 nu, double k) {
    const Complex gamma2 = std::polar(1.0, 0.25 * pi) / std::sqrt(8.0 * pi * k);
    const Complex value = gamma2 * std::polar(1.0, -k * dot(xhat, y));
    return {value, Complex(0.0, -k * dot(xhat, nu.as_point())) * value};
}

std::vector<Direction2> uniform_xhat(int n) { return incident_directions(n, full_aperture()); }

// ---------------------------------------------------------------------------
// Far-field extraction
// ---------------------------------------------------------------------------

namespace {

double receiver_weight(const CauchyDataset& ds) {
    return ds.circle.radius * ds.circle.aperture.length() / ds.circle.n_receivers;
}

double direction_weight(const CauchyDataset& ds) {
    return ds.directions.aperture.length() / ds.directions.count();
}

} // namespace

FarFieldMatrix extract_far_field(const CauchyDataset& ds, const std::vector<Direction2>& xhat,
                                 FarFieldKernel kernel) {
    ds.validate();
    if (kernel == FarFieldKernel::cauchy && !ds.has_normal_derivative)
        throw ConfigError("extract_far_field: dataset has no normal-derivative data; "
                          "use the impedance kernel");

    const std::vector<Receiver> rcv = ds.receiver_list();
    const std::size_t nx = rcv.size();
    const std::size_t nhat = xhat.size();
    const std::size_t nd = ds.directions.directions.size();
    const double wx = receiver_weight(ds);
    const Complex ik(0.0, ds.k);

    FarFieldMatrix ff;
    ff.xhat = xhat;
    ff.d = ds.directions.directions;
    ff.values = ComplexMatrix(nhat, nd);
    ff.k = ds.k;
    ff.weight_xhat = two_pi / static_cast<double>(nhat);
    ff.weight_d = direction_weight(ds);

    detail::parallel_for(nhat, [&](std::size_t begin, std::size_t end) {
        for (std::size_t a = begin; a < end; ++a) {
            for (std::size_t j = 0; j < nx; ++j) {
                const FarFieldGreen g =
                    far_field_green2(xhat[a], rcv[j].position, rcv[j].normal, ds.k);
                // weight u_sc by dPhi_inf/dnu and du/dnu (or ik u) by -Phi_inf
                const Complex cu = wx * g.normal_derivative;
                const Complex cd = -wx * g.value;
                Complex* row = &ff.values(a, 0);
                const Complex* urow = &ds.U(j, 0);
                if (kernel == FarFieldKernel::cauchy) {
                    const Complex* drow = &ds.dU(j, 0);
                    for (std::size_t l = 0; l < nd; ++l) row[l] += cu * urow[l] + cd * drow[l];
                } else {
                    const Complex c = cu + cd * ik;
                    for (std::size_t l = 0; l < nd; ++l) row[l] += c * urow[l];
                }
            }
        }
    });
    return ff;
}

FarFieldMatrix extract_far_field(const CauchyDataset& ds, int n_xhat, FarFieldKernel kernel) {
    return extract_far_field(ds, uniform_xhat(n_xhat), kernel);
}

// ---------------------------------------------------------------------------
// Indicator images
// ---------------------------------------------------------------------------

double IndicatorImage::max_value() const {
    double best = 0.0;
    for (double v : values) best = std::max(best, v);
    return best;
}

std::pair<int, int> IndicatorImage::argmax() const {
    std::size_t best = 0;
    for (std::size_t t = 1; t < values.size(); ++t)
        if (values[t] > values[best]) best = t;
    return {static_cast<int>(best) / grid.n2, static_cast<int>(best) % grid.n2};
}

double imaging_I_at(const FarFieldMatrix& ff, Point2 z) {
    const std::size_t nhat = ff.xhat.size();
    const std::size_t nd = ff.d.size();
    std::vector<Complex> g(nd);
    for (std::size_t l = 0; l < nd; ++l) g[l] = ff.weight_d * phi_test(z, ff.d[l], ff.k);
    double sum = 0.0;
    for (std::size_t a = 0; a < nhat; ++a) {
        Complex s = 0.0;
        const Complex* row = &ff.values(a, 0);
        for (std::size_t l = 0; l < nd; ++l) s += row[l] * g[l];
        sum += std::norm(s);
    }
    return ff.weight_xhat * sum;
}

namespace {

IndicatorImage image_from_farfield(const FarFieldMatrix& ff, const SamplingGrid& grid,
                                   const std::string& name) {
    IndicatorImage img{grid, std::vector<double>(grid.count(), 0.0), false, name, ff.k, 0.0};
    detail::parallel_for(static_cast<std::size_t>(grid.n1), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i1 = begin; i1 < end; ++i1)
            for (int i2 = 0; i2 < grid.n2; ++i2)
                img.values[grid.index(static_cast<int>(i1), i2)] =
                    imaging_I_at(ff, grid.point(static_cast<int>(i1), i2));
    });
    return img;
}

// Per-z receiver coefficients of the Im Phi boundary kernel:
//   a_j = w_x * dImPhi/dnu(x_j, z),  b_j = w_x * ImPhi(x_j, z)
// with Im Phi = (1/4) J0(k r) and dImPhi/dnu = -(k/4) J1(k r) ((x-z).nu)/r.
void im_phi_coefficients(const std::vector<Receiver>& rcv, Point2 z, double k, double wx,
                         std::vector<Complex>& a, std::vector<Complex>& b) {
    const std::size_t nx = rcv.size();
    a.resize(nx);
    b.resize(nx);
    for (std::size_t j = 0; j < nx; ++j) {
        const Point2 diff = rcv[j].position - z;
        const double r = norm(diff);
        if (r < 1e-14) {
            // J1(kr)((x-z).nu)/r stays bounded and vanishes with r
            a[j] = 0.0;
            b[j] = wx * 0.25;
            continue;
        }
        const auto jp = specfun::bessel_j01(k * r);
        const double proj = dot(diff, rcv[j].normal.as_point()) / r;
        a[j] = wx * (-0.25 * k) * jp.j1 * proj;
        b[j] = wx * 0.25 * jp.j0;
    }
}

double i2_point(const CauchyDataset& ds, const std::vector<Receiver>& rcv, Point2 z,
                FarFieldKernel kernel, double wx, double wd) {
    const std::size_t nx = rcv.size();
    const std::size_t nd = ds.directions.directions.size();
    std::vector<Complex> a, b;
    im_phi_coefficients(rcv, z, ds.k, wx, a, b);
    const Complex ik(0.0, ds.k);

    std::vector<Complex> s(nd, Complex(0.0));
    if (kernel == FarFieldKernel::cauchy) {
        for (std::size_t j = 0; j < nx; ++j) {
            const Complex* urow = &ds.U(j, 0);
            const Complex* drow = &ds.dU(j, 0);
            const Complex aj = a[j], bj = b[j];
            for (std::size_t l = 0; l < nd; ++l) s[l] += aj * urow[l] - bj * drow[l];
        }
    } else {
        for (std::size_t j = 0; j < nx; ++j) {
            const Complex* urow = &ds.U(j, 0);
            const Complex c = a[j] - ik * b[j];
            for (std::size_t l = 0; l < nd; ++l) s[l] += c * urow[l];
        }
    }
    double sum = 0.0;
    for (std::size_t l = 0; l < nd; ++l) sum += std::norm(s[l]);
    return wd * sum;
}

IndicatorImage i2_image(const CauchyDataset& ds, const SamplingGrid& grid, FarFieldKernel kernel,
                        const std::string& name) {
    ds.validate();
    if (kernel == FarFieldKernel::cauchy && !ds.has_normal_derivative)
        throw ConfigError("imaging_I2: dataset has no normal-derivative data");
    const std::vector<Receiver> rcv = ds.receiver_list();
    const double wx = receiver_weight(ds);
    const double wd = direction_weight(ds);
    IndicatorImage img{grid, std::vector<double>(grid.count(), 0.0), false, name, ds.k, 0.0};
    detail::parallel_for(static_cast<std::size_t>(grid.n1), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i1 = begin; i1 < end; ++i1)
            for (int i2 = 0; i2 < grid.n2; ++i2)
                img.values[grid.index(static_cast<int>(i1), i2)] =
                    i2_point(ds, rcv, grid.point(static_cast<int>(i1), i2), kernel, wx, wd);
    });
    return img;
}

} // namespace

IndicatorImage imaging_I(const CauchyDataset& ds, const SamplingGrid& grid, int n_xhat) {
    if (n_xhat <= 0) n_xhat = ds.directions.count();
    const FarFieldMatrix ff = extract_far_field(ds, n_xhat, FarFieldKernel::cauchy);
    return image_from_farfield(ff, grid, "I");
}

IndicatorImage imaging_I_far(const CauchyDataset& ds, const SamplingGrid& grid, int n_xhat) {
    if (n_xhat <= 0) n_xhat = ds.directions.count();
    const FarFieldMatrix ff = extract_far_field(ds, n_xhat, FarFieldKernel::impedance);
    return image_from_farfield(ff, grid, "I_far");
}

IndicatorImage imaging_I2(const CauchyDataset& ds, const SamplingGrid& grid) {
    return i2_image(ds, grid, FarFieldKernel::cauchy, "I2");
}

IndicatorImage imaging_I2_far(const CauchyDataset& ds, const SamplingGrid& grid) {
    return i2_image(ds, grid, FarFieldKernel::impedance, "I2_far");
}

double imaging_I2_at(const CauchyDataset& ds, Point2 z, FarFieldKernel kernel) {
    const std::vector<Receiver> rcv = ds.receiver_list();
    return i2_point(ds, rcv, z, kernel, receiver_weight(ds), direction_weight(ds));
}

IndicatorImage normalize(const IndicatorImage& img) {
    const double peak = img.max_value();
    if (peak <= 0.0) throw std::domain_error("normalize: degenerate all-zero image");
    IndicatorImage out = img;
    for (double& v : out.values) v /= peak;
    out.normalized = true;
    return out;
}

double stability_constant_I(const CauchyDataset& clean, int n_xhat) {
    clean.validate();
    if (!clean.has_normal_derivative)
        throw ConfigError("stability_constant_I: Cauchy pair required");
    if (n_xhat <= 0) n_xhat = clean.directions.count();
    const std::vector<Receiver> rcv = clean.receiver_list();
    const std::vector<Direction2> xhat = uniform_xhat(n_xhat);
    const double wx = receiver_weight(clean);
    const double w_xhat = two_pi / static_cast<double>(n_xhat);
    const double wd = direction_weight(clean);

    double phi_norm2 = 0.0, dphi_norm2 = 0.0;
    for (const Receiver& r : rcv)
        for (const Direction2& a : xhat) {
            const FarFieldGreen g = far_field_green2(a, r.position, r.normal, clean.k);
            phi_norm2 += std::norm(g.value) * wx * w_xhat;
            dphi_norm2 += std::norm(g.normal_derivative) * wx * w_xhat;
        }
    double u_norm2 = 0.0, du_norm2 = 0.0;
    for (const Complex& v : clean.U.data) u_norm2 += std::norm(v) * wx * wd;
    for (const Complex& v : clean.dU.data) du_norm2 += std::norm(v) * wx * wd;

    const double sphere = clean.directions.aperture.length();
    return sphere * sphere * (phi_norm2 + dphi_norm2) * (u_norm2 + du_norm2);
}

} // namespace osm
