#include "osm/data.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "detail/parallel.hpp"
#include "detail/rng.hpp"
#include "osm/errors.hpp"
#include "osm/specfun.hpp"

namespace osm {

DirectionSet DirectionSet::uniform(int n, Aperture aperture) {
    return {aperture, incident_directions(n, aperture)};
}

void CauchyDataset::validate() const {
    const std::size_t nx = static_cast<std::size_t>(circle.n_receivers);
    const std::size_t nd = directions.directions.size();
    if (U.rows != nx || U.cols != nd)
        throw DataFormatError("CauchyDataset: U shape does not match geometry");
    if (has_normal_derivative && (dU.rows != nx || dU.cols != nd))
        throw DataFormatError("CauchyDataset: dU shape does not match geometry");
    for (const Complex& v : U.data)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DataFormatError("CauchyDataset: non-finite entry in U");
    for (const Complex& v : dU.data)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DataFormatError("CauchyDataset: non-finite entry in dU");
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

CauchyDataset synthesize(const ContrastMap& map, double k, const MeasurementCircle& circle,
                         const DirectionSet& directions, const VolumeGrid& grid,
                         SynthesisStats* stats) {
    const auto t0 = std::chrono::steady_clock::now();
    const double support_radius =
        std::max({std::hypot(map.box.x1_lo, map.box.x2_lo), std::hypot(map.box.x1_lo, map.box.x2_hi),
                  std::hypot(map.box.x1_hi, map.box.x2_lo), std::hypot(map.box.x1_hi, map.box.x2_hi)});
    if (circle.radius <= support_radius)
        throw ConfigError("synthesize: measurement circle must enclose the contrast support");

    const LsOperator op = assemble_ls_system(map, grid, k);
    const std::vector<Receiver> rcv = receivers(circle);
    const std::size_t nx = rcv.size();
    const std::size_t nd = directions.directions.size();
    const auto& nz = op.support_cells();
    const auto& eta = op.contrast();
    const double h2 = grid.h() * grid.h();
    const double k2 = k * k;

    // Receiver kernels over the support cells, shared by all directions;
    // eta and the quadrature weight are folded in.
    //   G0[j][c] = k^2 Phi(x_j, y_c) eta_c h^2
    //   G1[j][c] = k^2 dPhi/dnu_j(x_j, y_c) eta_c h^2
    std::vector<std::vector<Complex>> G0(nx), G1(nx);
    detail::parallel_for(nx, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            G0[j].resize(nz.size());
            G1[j].resize(nz.size());
            for (std::size_t t = 0; t < nz.size(); ++t) {
                const std::size_t c = nz[t];
                const Point2 y = grid.center(static_cast<int>(c) / grid.m,
                                             static_cast<int>(c) % grid.m);
                const Point2 diff = rcv[j].position - y;
                const double r = norm(diff);
                const double proj = dot(diff, rcv[j].normal.as_point()) / r;
                const Complex h0 = specfun::hankel1_0(k * r);
                const Complex h1 = specfun::hankel1_1(k * r);
                const Complex w = k2 * h2 * eta[c];
                G0[j][t] = Complex(0.0, 0.25) * h0 * w;
                G1[j][t] = Complex(0.0, -0.25 * k) * h1 * proj * w;
            }
        }
    });

    CauchyDataset ds;
    ds.k = k;
    ds.circle = circle;
    ds.directions = directions;
    ds.U = ComplexMatrix(nx, nd);
    ds.dU = ComplexMatrix(nx, nd);
    ds.has_normal_derivative = true;

    std::vector<double> residuals(nd, 0.0);
    std::vector<int> iterations(nd, 0);
    detail::parallel_for(nd, [&](std::size_t begin, std::size_t end) {
        for (std::size_t l = begin; l < end; ++l) {
            const ForwardSolution sol = solve_forward(op, directions.directions[l]);
            residuals[l] = sol.residual;
            iterations[l] = sol.iterations;
            std::vector<Complex> w(nz.size());
            for (std::size_t t = 0; t < nz.size(); ++t) w[t] = sol.total_field[nz[t]];
            for (std::size_t j = 0; j < nx; ++j) {
                Complex u = 0.0, du = 0.0;
                const auto& g0 = G0[j];
                const auto& g1 = G1[j];
                for (std::size_t t = 0; t < nz.size(); ++t) {
                    u += g0[t] * w[t];
                    du += g1[t] * w[t];
                }
                ds.U(j, l) = u;
                ds.dU(j, l) = du;
            }
        }
    });

    if (stats) {
        for (std::size_t l = 0; l < nd; ++l) {
            stats->max_residual = std::max(stats->max_residual, residuals[l]);
            stats->max_iterations = std::max(stats->max_iterations, iterations[l]);
        }
        stats->seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return ds;
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

namespace {

ComplexMatrix noise_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                           unsigned stream) {
    detail::UniformPm1Stream rng(seed, stream);
    ComplexMatrix n(rows, cols);
    for (Complex& v : n.data) {
        const double re = rng.next();
        const double im = rng.next();
        v = Complex(re, im);
    }
    return n;
}

void perturb(ComplexMatrix& m, std::uint64_t seed, unsigned stream, double delta) {
    const double scale = frobenius_norm(m);
    ComplexMatrix n = noise_matrix(m.rows, m.cols, seed, stream);
    const double nnorm = frobenius_norm(n);
    const double factor = delta * scale / nnorm;
    for (std::size_t t = 0; t < m.data.size(); ++t) m.data[t] += factor * n.data[t];
}

} // namespace

CauchyDataset add_noise(const CauchyDataset& ds, const NoiseSpec& spec) {
    if (spec.delta < 0.0 || spec.delta > 1.5)
        throw ConfigError("add_noise: delta must lie in [0, 1.5]");
    CauchyDataset out = ds;
    if (spec.delta == 0.0) return out;
    if (frobenius_norm(ds.U) == 0.0)
        throw ConfigError("add_noise: degenerate dataset (||U||_F = 0) with delta > 0");
    perturb(out.U, spec.seed, 1, spec.delta);
    if (ds.has_normal_derivative) perturb(out.dU, spec.seed, 2, spec.delta);
    return out;
}

// ---------------------------------------------------------------------------
// Binary persistence
// ---------------------------------------------------------------------------

namespace {

constexpr char magic[4] = {'O', 'S', 'M', 'D'};
constexpr std::uint16_t format_version = 1;

template <class T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::istream& is, const char* field) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw DataFormatError(std::string("dataset load: truncated while reading ") + field);
    return v;
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
    for (const Complex& v : m.data) {
        write_raw(os, v.real());
        write_raw(os, v.imag());
    }
}

void read_matrix(std::istream& is, ComplexMatrix& m, const char* field) {
    for (Complex& v : m.data) {
        const double re = read_raw<double>(is, field);
        const double im = read_raw<double>(is, field);
        v = Complex(re, im);
    }
}

} // namespace

void save_binary(const CauchyDataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataFormatError("save: cannot open " + path + " for writing");
    os.write(magic, 4);
    write_raw(os, format_version);
    const std::uint16_t flags = ds.has_normal_derivative ? 1 : 0;
    write_raw(os, flags);
    write_raw(os, ds.k);
    write_raw(os, ds.circle.radius);
    write_raw(os, static_cast<std::uint32_t>(ds.circle.n_receivers));
    write_raw(os, ds.circle.aperture.lo);
    write_raw(os, ds.circle.aperture.hi);
    write_raw(os, static_cast<std::uint32_t>(ds.directions.count()));
    write_raw(os, ds.directions.aperture.lo);
    write_raw(os, ds.directions.aperture.hi);
    write_matrix(os, ds.U);
    if (ds.has_normal_derivative) write_matrix(os, ds.dU);
    if (!os) throw DataFormatError("save: short write to " + path);
}

CauchyDataset load_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataFormatError("load: cannot open " + path);
    char m4[4];
    is.read(m4, 4);
    if (!is || std::memcmp(m4, magic, 4) != 0)
        throw DataFormatError("load: bad magic bytes (not an OSMD dataset): " + path);
    const auto version = read_raw<std::uint16_t>(is, "version");
    if (version != format_version)
        throw DataFormatError("load: unsupported format version " + std::to_string(version));
    const auto flags = read_raw<std::uint16_t>(is, "flags");

    CauchyDataset ds;
    ds.k = read_raw<double>(is, "k");
    ds.circle.radius = read_raw<double>(is, "R");
    const auto nx = read_raw<std::uint32_t>(is, "n_receivers");
    ds.circle.aperture.lo = read_raw<double>(is, "aperture_lo");
    ds.circle.aperture.hi = read_raw<double>(is, "aperture_hi");
    const auto nd = read_raw<std::uint32_t>(is, "n_directions");
    Aperture dap;
    dap.lo = read_raw<double>(is, "direction_aperture_lo");
    dap.hi = read_raw<double>(is, "direction_aperture_hi");
    if (nx == 0) throw DataFormatError("load: field n_receivers must be positive");
    if (nd == 0) throw DataFormatError("load: field n_directions must be positive");
    ds.circle.n_receivers = static_cast<int>(nx);
    ds.directions = DirectionSet::uniform(static_cast<int>(nd), dap);
    ds.has_normal_derivative = (flags & 1) != 0;
    ds.U = ComplexMatrix(nx, nd);
    read_matrix(is, ds.U, "U");
    ds.dU = ComplexMatrix(nx, nd);
    if (ds.has_normal_derivative) read_matrix(is, ds.dU, "dU");
    char extra;
    if (is.read(&extra, 1))
        throw DataFormatError("load: trailing bytes after dU block (n_receivers/n_directions "
                              "inconsistent with payload)");
    ds.validate();
    return ds;
}

// ---------------------------------------------------------------------------
// CSV export
// ---------------------------------------------------------------------------

void save_csv(const CauchyDataset& ds, const std::string& path) {
    ds.validate();
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw DataFormatError("save: cannot open " + path + " for writing");
    std::fprintf(f, "# k R n_x n_d aperture_lo aperture_hi\n");
    std::fprintf(f, "# %.17g %.17g %d %d %.17g %.17g\n", ds.k, ds.circle.radius,
                 ds.circle.n_receivers, ds.directions.count(), ds.circle.aperture.lo,
                 ds.circle.aperture.hi);
    if (!ds.directions.aperture.full())
        std::fprintf(f, "# directions %.17g %.17g\n", ds.directions.aperture.lo,
                     ds.directions.aperture.hi);
    for (std::size_t j = 0; j < ds.U.rows; ++j)
        for (std::size_t l = 0; l < ds.U.cols; ++l) {
            const Complex u = ds.U(j, l);
            const Complex du = ds.has_normal_derivative ? ds.dU(j, l) : Complex(0.0);
            std::fprintf(f, "%zu, %zu, %.17g, %.17g, %.17g, %.17g\n", j, l, u.real(), u.imag(),
                         du.real(), du.imag());
        }
    std::fclose(f);
}

CauchyDataset load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataFormatError("load: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# k R", 0) != 0)
        throw DataFormatError("load: missing CSV header line in " + path);
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw DataFormatError("load: missing CSV parameter line in " + path);

    CauchyDataset ds;
    int nx = 0, nd = 0;
    {
        std::istringstream ss(line.substr(2));
        if (!(ss >> ds.k >> ds.circle.radius >> nx >> nd >> ds.circle.aperture.lo >>
              ds.circle.aperture.hi))
            throw DataFormatError("load: malformed CSV parameter line");
    }
    if (nx <= 0) throw DataFormatError("load: field n_receivers must be positive");
    if (nd <= 0) throw DataFormatError("load: field n_directions must be positive");
    ds.circle.n_receivers = nx;
    Aperture dap = full_aperture();

    std::streampos data_start = is.tellg();
    if (std::getline(is, line) && line.rfind("# directions", 0) == 0) {
        std::istringstream ss(line.substr(std::string("# directions").size()));
        if (!(ss >> dap.lo >> dap.hi)) throw DataFormatError("load: malformed directions line");
    } else {
        is.clear();
        is.seekg(data_start);
    }
    ds.directions = DirectionSet::uniform(nd, dap);
    ds.U = ComplexMatrix(nx, nd);
    ds.dU = ComplexMatrix(nx, nd);
    ds.has_normal_derivative = true;

    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::size_t j, l;
        double ur, ui, dr, di;
        char c;
        std::istringstream ss(line);
        if (!(ss >> j >> c >> l >> c >> ur >> c >> ui >> c >> dr >> c >> di))
            throw DataFormatError("load: malformed CSV data row " + std::to_string(rows + 1));
        if (j >= static_cast<std::size_t>(nx))
            throw DataFormatError("load: rx_index out of range (n_receivers mismatch)");
        if (l >= static_cast<std::size_t>(nd))
            throw DataFormatError("load: dir_index out of range (n_directions mismatch)");
        ds.U(j, l) = Complex(ur, ui);
        ds.dU(j, l) = Complex(dr, di);
        ++rows;
    }
    if (rows != static_cast<std::size_t>(nx) * nd)
        throw DataFormatError("load: expected " + std::to_string(static_cast<std::size_t>(nx) * nd) +
                              " data rows (n_receivers x n_directions), found " +
                              std::to_string(rows));
    ds.validate();
    return ds;
}

void save(const CauchyDataset& ds, const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
        save_csv(ds, path);
    else
        save_binary(ds, path);
}

CauchyDataset load(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return load_csv(path);
    return load_binary(path);
}

} // namespace osm
