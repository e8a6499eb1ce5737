#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "osm/errors.hpp"
#include "osm/experiment.hpp"
#include "osm/forward.hpp"

using namespace osm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

ExperimentConfig tiny_config(const std::string& outdir) {
    ExperimentConfig cfg;
    cfg.medium = "disk(0,0,0.4)";
    cfg.has_eta = true;
    cfg.eta = Complex(0.5, 0.0);
    cfg.k = 2.0;
    cfg.sample_n1 = 12;
    cfg.sample_n2 = 12;
    cfg.n_receivers = 8;
    cfg.n_directions = 4;
    cfg.delta = 0.3;
    cfg.seed = 5;
    cfg.functionals = {"I", "I_far", "I2", "I2_far"};
    cfg.solver_m = 24;
    cfg.output_dir = outdir;
    return cfg;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("config text round-trips through the parser") {
    ExperimentConfig cfg = tiny_config("out/x");
    cfg.receiver_aperture = bottom_half_aperture();
    const ExperimentConfig back = parse_config_text(config_to_text(cfg));
    CHECK(back.medium == cfg.medium);
    CHECK(back.k == cfg.k);
    CHECK(back.delta == cfg.delta);
    CHECK(back.seed == cfg.seed);
    CHECK(back.n_receivers == cfg.n_receivers);
    CHECK(back.receiver_aperture.lo == cfg.receiver_aperture.lo);
    CHECK(back.functionals == cfg.functionals);
    CHECK(back.solver_m == cfg.solver_m);
    CHECK(back.output_dir == cfg.output_dir);
}

TEST_CASE("config parser reports bad input by field") {
    CHECK_THROWS_WITH_AS(parse_config_text("wavenumber = 8\n"), doctest::Contains("wavenumber"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("k = eight\n"), doctest::Contains("\"k\""), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("just a line\n"), doctest::Contains("key = value"),
                         ConfigError);
    // comments and blank lines are fine
    CHECK_NOTHROW(parse_config_text("# comment\n\nk = 8 # trailing\n"));
}

TEST_CASE("config validation names the offending field") {
    ExperimentConfig cfg = tiny_config("out/x");
    cfg.delta = 2.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("delta"), ConfigError);
    cfg = tiny_config("out/x");
    cfg.functionals = {"I3"};
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("functionals"), ConfigError);
    cfg = tiny_config("out/x");
    cfg.functionals.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = tiny_config("out/x");
    cfg.n_receivers = 0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("n_receivers"), ConfigError);
}

TEST_CASE("invalid configs never start a forward solve") {
    ExperimentConfig cfg = tiny_config("should_not_exist_dir");
    cfg.solver_m = 0;
    CHECK_THROWS_AS(run(cfg), ConfigError);
    CHECK(!fs::exists("should_not_exist_dir"));
}

TEST_CASE("figure presets carry the published parameters") {
    const ExperimentConfig f4 = preset("fig4_kite");
    CHECK(f4.receiver_aperture.lo == doctest::Approx(pi));
    CHECK(f4.receiver_aperture.hi == doctest::Approx(two_pi));
    CHECK(f4.direction_aperture.lo == doctest::Approx(pi));
    CHECK(f4.n_receivers == 32);
    CHECK(f4.n_directions == 32);

    for (const char* object : {"kite", "disk_rectangle", "square_cavity"}) {
        const ExperimentConfig f3 = preset(std::string("fig3_") + object);
        CHECK(f3.R == 100.0);
        CHECK(f3.delta == 0.3);
    }

    const ExperimentConfig f2 = preset("fig2_kite");
    CHECK(f2.delta == 0.9);
    CHECK(f2.k == 8.0);

    const ExperimentConfig f1c = preset("fig1_square_cavity");
    CHECK(f1c.n_receivers == 96);
    CHECK(f1c.n_directions == 96);
    const ExperimentConfig f4c = preset("fig4_square_cavity");
    CHECK(f4c.n_receivers == 48);

    CHECK_THROWS_AS(preset("fig9_kite"), ConfigError);
    CHECK(preset_names().size() == 12);
}

TEST_CASE("shape expressions") {
    const Shape disk = parse_shape_expression("disk(-0.6, 0.6, 0.4)");
    CHECK(contains(disk, {-0.6, 0.6}));
    CHECK(!contains(disk, {0.0, 0.0}));

    const Shape uni = parse_shape_expression("disk(-0.6,0.6,0.4) + rect(0.6,-0.6,0.45,0.25)");
    CHECK(contains(uni, {-0.6, 0.6}));
    CHECK(contains(uni, {0.6, -0.6}));

    const Shape diff = parse_shape_expression("rect(0,0,0.5,0.5) - disk(0,0,0.3)");
    CHECK(!contains(diff, {0.0, 0.0}));
    CHECK(contains(diff, {0.45, 0.45}));

    CHECK_NOTHROW(parse_shape_expression("kite"));
    CHECK_NOTHROW(parse_shape_expression("square_cavity(0.5, 0.3)"));
    CHECK_THROWS_AS(parse_shape_expression("blob(1,2)"), ConfigError);
    CHECK_THROWS_AS(parse_shape_expression("disk(1,2)"), ConfigError);
    CHECK_THROWS_AS(parse_shape_expression("disk(0,0,0.4) * kite"), ConfigError);
}

TEST_CASE("medium construction from the config") {
    ExperimentConfig cfg = tiny_config("out/x");
    const ContrastMap inline_map = build_medium(cfg);
    CHECK(inline_map.eval({0.0, 0.0}) == Complex(0.5, 0.0));

    cfg.medium = "kite";
    cfg.has_eta = false;
    CHECK(build_medium(cfg).eval({-0.3, 0.0}) == Complex(0.5, 0.1));
    cfg.has_eta = true;
    cfg.eta = Complex(1.0, 0.0);
    CHECK(build_medium(cfg).eval({-0.3, 0.0}) == Complex(1.0, 0.0));

    cfg.medium = "disk(0,0,0.4)";
    cfg.has_eta = false;
    CHECK_THROWS_WITH_AS(build_medium(cfg), doctest::Contains("eta"), ConfigError);

    // inline media declare a box sized to the shape, so tight solver grids work
    cfg.has_eta = true;
    cfg.eta = Complex(0.5, 0.0);
    cfg.solver_lo = -0.6;
    cfg.solver_hi = 0.6;
    CHECK_NOTHROW(assemble_ls_system(build_medium(cfg), cfg.solver_grid(), cfg.k));
}

TEST_CASE("image export and reload") {
    const SamplingGrid grid(-2, 2, -2, 2, 5, 4);
    IndicatorImage img{grid, std::vector<double>(20, 0.0), false, "I", 8.0, 0.3};
    for (std::size_t t = 0; t < img.values.size(); ++t) img.values[t] = 0.01 * (t + 1.0);
    img = normalize(img);

    TempDir dir("osm2d_test_images");
    const std::string csv = (dir.path / "img.csv").string();
    export_image_csv(img, csv);

    int rows = 0, headers = 0;
    std::ifstream is(csv);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind('#', 0) == 0)
            ++headers;
        else if (!line.empty())
            ++rows;
    }
    CHECK(rows == 20);
    CHECK(headers == 2);

    const IndicatorImage back = load_image_csv(csv);
    CHECK(back.grid.n1 == 5);
    CHECK(back.grid.n2 == 4);
    CHECK(back.functional == "I");
    CHECK(back.normalized);
    for (std::size_t t = 0; t < img.values.size(); ++t)
        CHECK(std::abs(back.values[t] - img.values[t]) <= 1e-15 * std::max(1.0, img.values[t]));

    // constant-1 image renders as all-255 PGM
    IndicatorImage ones{grid, std::vector<double>(20, 1.0), true, "I", 8.0, 0.0};
    const std::string pgm = (dir.path / "img.pgm").string();
    export_image_pgm(ones, pgm);
    const std::string bytes = slurp(pgm);
    const std::string header = "P5\n5 4\n255\n";
    REQUIRE(bytes.size() == header.size() + 20);
    CHECK(bytes.rfind(header, 0) == 0);
    for (std::size_t t = header.size(); t < bytes.size(); ++t)
        CHECK(static_cast<unsigned char>(bytes[t]) == 255);
}

TEST_CASE("runs are deterministic and reports are complete") {
    TempDir dir("osm2d_test_run");
    ExperimentConfig cfg = tiny_config((dir.path / "a").string());
    const RunReport ra = run(cfg);

    // every requested functional appears exactly once
    REQUIRE(ra.images.size() == cfg.functionals.size());
    for (std::size_t i = 0; i < cfg.functionals.size(); ++i)
        CHECK(ra.images[i].name == cfg.functionals[i]);
    CHECK(std::abs(ra.achieved_noise_u - cfg.delta) < 1e-13);
    CHECK(fs::exists(ra.report_path));

    cfg.output_dir = (dir.path / "b").string();
    const RunReport rb = run(cfg);
    for (std::size_t i = 0; i < ra.images.size(); ++i) {
        CHECK(slurp(ra.images[i].csv_path) == slurp(rb.images[i].csv_path));
        CHECK(slurp(ra.images[i].pgm_path) == slurp(rb.images[i].pgm_path));
    }

    // a different seed changes the noisy images
    cfg.output_dir = (dir.path / "c").string();
    cfg.seed = 6;
    const RunReport rc = run(cfg);
    CHECK(slurp(ra.images[0].csv_path) != slurp(rc.images[0].csv_path));
}

TEST_CASE("clean datasets are cached and reused") {
    TempDir dir("osm2d_test_cache");
    ExperimentConfig cfg = tiny_config((dir.path / "run").string());
    const RunReport first = run(cfg);
    CHECK(!first.cache_hit);
    CHECK(fs::exists(first.dataset_cache_path));

    cfg.seed = 99; // noise changes, synthesis input does not
    const RunReport second = run(cfg);
    CHECK(second.cache_hit);
    CHECK(second.dataset_cache_path == first.dataset_cache_path);

    CHECK(config_data_hash(cfg) == config_data_hash(tiny_config(cfg.output_dir)));
    ExperimentConfig other = cfg;
    other.k = 3.0;
    CHECK(config_data_hash(other) != config_data_hash(cfg));
}

TEST_CASE("synthesize-then-image pipeline") {
    TempDir dir("osm2d_test_stage");
    ExperimentConfig cfg = tiny_config((dir.path / "staged").string());
    const std::string dataset = run_synthesize(cfg);
    CHECK(fs::exists(dataset));

    cfg.functionals = {"I2"};
    const RunReport report = run_image(dataset, cfg);
    REQUIRE(report.images.size() == 1);
    CHECK(report.images[0].name == "I2");
    CHECK(!report.images[0].degenerate);
    CHECK(fs::exists(report.images[0].csv_path));
}
