#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "osm/data.hpp"
#include "osm/errors.hpp"
#include "osm/forward.hpp"

using namespace osm;

namespace {

CauchyDataset small_dataset() {
    CauchyDataset ds;
    ds.k = 4.0;
    ds.circle = {3.0, 4, full_aperture()};
    ds.directions = DirectionSet::uniform(2, full_aperture());
    ds.U = ComplexMatrix(4, 2);
    ds.dU = ComplexMatrix(4, 2);
    ds.has_normal_derivative = true;
    for (std::size_t t = 0; t < ds.U.data.size(); ++t) {
        ds.U.data[t] = Complex(0.3 * (t + 1.0), -0.1 * (t + 2.0));
        ds.dU.data[t] = Complex(-0.2 * (t + 1.0), 0.4 * (t + 0.5));
    }
    return ds;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

double noise_level(const ComplexMatrix& noisy, const ComplexMatrix& clean) {
    double s = 0.0;
    for (std::size_t t = 0; t < clean.data.size(); ++t)
        s += std::norm(noisy.data[t] - clean.data[t]);
    return std::sqrt(s) / frobenius_norm(clean);
}

} // namespace

TEST_CASE("synthesis of the empty medium is identically zero") {
    const ContrastMap empty({}, default_support_box());
    const CauchyDataset ds =
        synthesize(empty, 4.0, {3.0, 8, full_aperture()},
                   DirectionSet::uniform(4, full_aperture()), VolumeGrid(-1.2, 1.2, 16));
    for (const Complex& v : ds.U.data) CHECK(std::abs(v) == 0.0);
    for (const Complex& v : ds.dU.data) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("synthesized disk columns match the series oracle") {
    const Complex eta0(0.5, 0.0);
    const double radius = 0.4, k = 4.0;
    const ContrastMap map({{Shape{Disk{{0.0, 0.0}, radius}}, eta0}}, {-0.6, 0.6, -0.6, 0.6});
    const MeasurementCircle circle{3.0, 16, full_aperture()};
    const DirectionSet dirs = DirectionSet::uniform(4, full_aperture());
    const CauchyDataset ds = synthesize(map, k, circle, dirs, VolumeGrid(-0.6, 0.6, 64));

    const DiskSeriesOracle oracle(eta0, radius, k);
    const auto rcv = receivers(circle);
    for (int l = 0; l < dirs.count(); ++l) {
        double nu = 0.0, du = 0.0, nd = 0.0, dd = 0.0;
        for (std::size_t j = 0; j < rcv.size(); ++j) {
            const Complex wu = oracle.scattered(rcv[j].position, dirs.directions[l]);
            const Complex wd =
                oracle.scattered_radial_derivative(rcv[j].position, dirs.directions[l]);
            nu += std::norm(ds.U(j, l) - wu);
            du += std::norm(wu);
            nd += std::norm(ds.dU(j, l) - wd);
            dd += std::norm(wd);
        }
        CHECK(std::sqrt(nu / du) < 0.01);
        CHECK(std::sqrt(nd / dd) < 0.01);
    }
}

TEST_CASE("synthesis rejects a circle inside the support box") {
    const ContrastMap map = catalogue("kite");
    CHECK_THROWS_AS(synthesize(map, 4.0, {1.0, 8, full_aperture()},
                               DirectionSet::uniform(4, full_aperture()),
                               VolumeGrid(-1.2, 1.2, 16)),
                    ConfigError);
}

TEST_CASE("noise level is exact by construction") {
    const CauchyDataset ds = small_dataset();
    for (double delta : {0.3, 0.6, 0.9}) {
        const CauchyDataset noisy = add_noise(ds, {delta, 123});
        CHECK(std::abs(noise_level(noisy.U, ds.U) - delta) < 1e-13);
        CHECK(std::abs(noise_level(noisy.dU, ds.dU) - delta) < 1e-13);
    }
}

TEST_CASE("noise statistics across 100 seeds") {
    const CauchyDataset ds = small_dataset();
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        mean += noise_level(add_noise(ds, {0.3, seed}).U, ds.U);
    mean /= 100.0;
    CHECK(std::abs(mean - 0.3) < 1e-13);
}

TEST_CASE("zero noise is a bitwise no-op") {
    const CauchyDataset ds = small_dataset();
    const CauchyDataset same = add_noise(ds, {0.0, 9});
    for (std::size_t t = 0; t < ds.U.data.size(); ++t) {
        CHECK(same.U.data[t] == ds.U.data[t]);
        CHECK(same.dU.data[t] == ds.dU.data[t]);
    }
}

TEST_CASE("noise is deterministic under a fixed seed and streams differ") {
    const CauchyDataset ds = small_dataset();
    const CauchyDataset a = add_noise(ds, {0.3, 77});
    const CauchyDataset b = add_noise(ds, {0.3, 77});
    for (std::size_t t = 0; t < a.U.data.size(); ++t) {
        CHECK(a.U.data[t] == b.U.data[t]);
        CHECK(a.dU.data[t] == b.dU.data[t]);
    }
    const CauchyDataset c = add_noise(ds, {0.3, 78});
    bool any_diff = false;
    for (std::size_t t = 0; t < a.U.data.size(); ++t)
        if (a.U.data[t] != c.U.data[t]) any_diff = true;
    CHECK(any_diff);
    // U and dU perturbations come from independent streams
    bool streams_differ = false;
    for (std::size_t t = 0; t < a.U.data.size(); ++t)
        if (std::abs((a.U.data[t] - ds.U.data[t]) - (a.dU.data[t] - ds.dU.data[t])) > 1e-12)
            streams_differ = true;
    CHECK(streams_differ);
}

TEST_CASE("noise rejects degenerate and out-of-range inputs") {
    CauchyDataset zero = small_dataset();
    for (Complex& v : zero.U.data) v = 0.0;
    CHECK_THROWS_AS(add_noise(zero, {0.3, 1}), ConfigError);
    const CauchyDataset ds = small_dataset();
    CHECK_THROWS_AS(add_noise(ds, {-0.1, 1}), ConfigError);
    CHECK_THROWS_AS(add_noise(ds, {1.6, 1}), ConfigError);
}

TEST_CASE("binary round-trip is bit exact") {
    const CauchyDataset ds = small_dataset();
    const std::string path = temp_path("osm2d_roundtrip.osmd");
    save_binary(ds, path);
    const CauchyDataset back = load_binary(path);
    CHECK(back.k == ds.k);
    CHECK(back.circle.radius == ds.circle.radius);
    CHECK(back.circle.n_receivers == ds.circle.n_receivers);
    CHECK(back.circle.aperture.lo == ds.circle.aperture.lo);
    CHECK(back.circle.aperture.hi == ds.circle.aperture.hi);
    CHECK(back.directions.count() == ds.directions.count());
    CHECK(back.has_normal_derivative == ds.has_normal_derivative);
    for (std::size_t t = 0; t < ds.U.data.size(); ++t) {
        CHECK(back.U.data[t] == ds.U.data[t]);
        CHECK(back.dU.data[t] == ds.dU.data[t]);
    }
    std::filesystem::remove(path);
}

TEST_CASE("binary round-trip preserves a partial-aperture direction set") {
    CauchyDataset ds = small_dataset();
    ds.directions = DirectionSet::uniform(2, bottom_half_aperture());
    const std::string path = temp_path("osm2d_partial.osmd");
    save_binary(ds, path);
    const CauchyDataset back = load_binary(path);
    CHECK(back.directions.aperture.lo == pi);
    CHECK(back.directions.aperture.hi == two_pi);
    std::filesystem::remove(path);
}

TEST_CASE("binary load reports malformed files") {
    const std::string path = temp_path("osm2d_bad.osmd");
    {
        std::ofstream os(path, std::ios::binary);
        os << "not a dataset";
    }
    CHECK_THROWS_WITH_AS(load_binary(path), doctest::Contains("magic"), DataFormatError);

    // corrupt the receiver count so the payload size disagrees
    const CauchyDataset ds = small_dataset();
    save_binary(ds, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(4 + 2 + 2 + 8 + 8); // magic, version, flags, k, R
        const std::uint32_t wrong = 5;
        f.write(reinterpret_cast<const char*>(&wrong), sizeof wrong);
    }
    CHECK_THROWS_AS(load_binary(path), DataFormatError);
    std::filesystem::remove(path);
}

TEST_CASE("csv export format and round-trip") {
    const CauchyDataset ds = small_dataset();
    const std::string path = temp_path("osm2d_ds.csv");
    save_csv(ds, path);

    // 4 receivers x 2 directions -> 8 data rows after the header
    std::ifstream is(path);
    std::string line;
    int header = 0, rows = 0;
    while (std::getline(is, line)) {
        if (line.rfind("#", 0) == 0)
            ++header;
        else if (!line.empty())
            ++rows;
    }
    CHECK(rows == 8);
    CHECK(header == 2);

    const CauchyDataset back = load_csv(path);
    for (std::size_t t = 0; t < ds.U.data.size(); ++t) {
        CHECK(std::abs(back.U.data[t] - ds.U.data[t]) <=
              1e-15 * std::max(1.0, std::abs(ds.U.data[t])));
        CHECK(std::abs(back.dU.data[t] - ds.dU.data[t]) <=
              1e-15 * std::max(1.0, std::abs(ds.dU.data[t])));
    }
    std::filesystem::remove(path);
}

TEST_CASE("save/load dispatch on the extension") {
    const CauchyDataset ds = small_dataset();
    const std::string bin = temp_path("osm2d_dispatch.osmd");
    const std::string csv = temp_path("osm2d_dispatch.csv");
    save(ds, bin);
    save(ds, csv);
    CHECK(load(bin).U.data == ds.U.data);
    CHECK(load(csv).U.rows == ds.U.rows);
    std::filesystem::remove(bin);
    std::filesystem::remove(csv);
}
