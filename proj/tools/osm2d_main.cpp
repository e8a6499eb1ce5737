// Batch experiment runner for the 2D orthogonality-sampling toolkit.
//
// Subcommands:
//   run <config>            full pipeline from a config file
//   preset <name>           full pipeline from a built-in figure preset
//   synthesize <config>     data synthesis only (writes dataset.osmd)
//   image <dataset> <cfg>   imaging only, reusing a saved dataset
//   validate                quick oracle suite
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "osm/errors.hpp"
#include "osm/experiment.hpp"
#include "osm/forward.hpp"
#include "osm/imaging.hpp"
#include "osm/specfun.hpp"

namespace {

void apply_overrides(osm::ExperimentConfig& cfg, const std::vector<std::string>& overrides) {
    for (const std::string& kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw osm::ConfigError("--override expects key=value, got \"" + kv + "\"");
        osm::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
}

void print_report(const osm::RunReport& report) {
    std::printf("%s\n", report.data.dump(2).c_str());
    std::printf("report written to %s\n", report.report_path.c_str());
}

int run_validate() {
    int failures = 0;
    const auto check = [&failures](const char* name, bool ok, double measure) {
        std::printf("[validate] %-42s %s (%.3g)\n", name, ok ? "PASS" : "FAIL", measure);
        if (!ok) ++failures;
    };

    // Special functions against their classical identities.
    {
        const double x = 3.7;
        const double w = osm::specfun::bessel_j1(x) * osm::specfun::bessel_y0(x) -
                         osm::specfun::bessel_j0(x) * osm::specfun::bessel_y1(x);
        const double expected = 2.0 / (osm::pi * x);
        check("wronskian J1 Y0 - J0 Y1 = 2/(pi x)", std::abs(w / expected - 1.0) < 1e-10,
              std::abs(w / expected - 1.0));
        check("first zero of J0", std::abs(osm::specfun::bessel_j0(2.404825557695773)) < 1e-10,
              std::abs(osm::specfun::bessel_j0(2.404825557695773)));
    }

    // Forward solver against the separation-of-variables disk solution.
    {
        const osm::Complex eta0(0.5, 0.0);
        const double radius = 0.4, k = 4.0;
        const osm::ContrastMap map({{osm::Shape{osm::Disk{{0.0, 0.0}, radius}}, eta0}},
                                   {-0.6, 0.6, -0.6, 0.6});
        const osm::VolumeGrid grid(-0.6, 0.6, 96);
        const osm::Direction2 d(1.0, 0.0);
        const osm::ForwardSolution sol = osm::solve_forward(map, d, k, grid);
        const osm::DiskSeriesOracle oracle(eta0, radius, k);
        double num = 0.0, den = 0.0;
        for (int j = 0; j < 16; ++j) {
            const double theta = osm::two_pi * j / 16;
            const osm::Point2 x{3.0 * std::cos(theta), 3.0 * std::sin(theta)};
            const osm::Complex got = osm::scattered_at(sol, x);
            const osm::Complex want = oracle.scattered(x, d);
            num += std::norm(got - want);
            den += std::norm(want);
        }
        const double rel = std::sqrt(num / den);
        check("disk scattered field vs series", rel < 0.01, rel);
    }

    // Noise scaling is exact by construction.
    {
        osm::CauchyDataset ds;
        ds.k = 1.0;
        ds.circle = {3.0, 4, osm::full_aperture()};
        ds.directions = osm::DirectionSet::uniform(3, osm::full_aperture());
        ds.U = osm::ComplexMatrix(4, 3);
        ds.dU = osm::ComplexMatrix(4, 3);
        ds.has_normal_derivative = true;
        for (std::size_t t = 0; t < ds.U.data.size(); ++t)
            ds.U.data[t] = osm::Complex(0.1 * (t + 1), -0.2 * (t + 1));
        const osm::CauchyDataset noisy = osm::add_noise(ds, {0.3, 7});
        double s = 0.0;
        for (std::size_t t = 0; t < ds.U.data.size(); ++t)
            s += std::norm(noisy.U.data[t] - ds.U.data[t]);
        const double level = std::sqrt(s) / osm::frobenius_norm(ds.U);
        check("noise level ||U^d - U||_F / ||U||_F = delta", std::abs(level - 0.3) < 1e-13,
              std::abs(level - 0.3));
    }

    std::printf("[validate] %s\n", failures == 0 ? "all checks passed" : "FAILURES present");
    return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D inverse acoustic scattering: data synthesis and "
                 "orthogonality-sampling reconstruction"};
    app.require_subcommand(1);

    std::string config_path, preset_name, dataset_path;
    std::vector<std::string> overrides;
    bool print_config_only = false;

    CLI::App* cmd_run = app.add_subcommand("run", "run a full experiment from a config file");
    cmd_run->add_option("config", config_path, "config file")->required();
    cmd_run->add_option("--override", overrides, "key=value overrides");

    CLI::App* cmd_preset = app.add_subcommand("preset", "run a built-in figure preset");
    cmd_preset->add_option("name", preset_name, "preset name (e.g. fig1_kite)")->required();
    cmd_preset->add_option("--override", overrides, "key=value overrides");
    cmd_preset->add_flag("--print-config", print_config_only, "print the config and exit");

    CLI::App* cmd_synth = app.add_subcommand("synthesize", "synthesize the clean dataset only");
    cmd_synth->add_option("config", config_path, "config file")->required();
    cmd_synth->add_option("--override", overrides, "key=value overrides");

    CLI::App* cmd_image = app.add_subcommand("image", "image from a saved dataset");
    cmd_image->add_option("dataset", dataset_path, "dataset file (.osmd or .csv)")->required();
    cmd_image->add_option("config", config_path, "config file")->required();
    cmd_image->add_option("--override", overrides, "key=value overrides");

    CLI::App* cmd_validate = app.add_subcommand("validate", "run the oracle suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (cmd_run->parsed()) {
            osm::ExperimentConfig cfg = osm::parse_config_file(config_path);
            apply_overrides(cfg, overrides);
            print_report(osm::run(cfg));
        } else if (cmd_preset->parsed()) {
            osm::ExperimentConfig cfg = osm::preset(preset_name);
            apply_overrides(cfg, overrides);
            if (print_config_only) {
                std::printf("%s", osm::config_to_text(cfg).c_str());
                return 0;
            }
            print_report(osm::run(cfg));
        } else if (cmd_synth->parsed()) {
            osm::ExperimentConfig cfg = osm::parse_config_file(config_path);
            apply_overrides(cfg, overrides);
            const std::string path = osm::run_synthesize(cfg);
            std::printf("dataset written to %s\n", path.c_str());
        } else if (cmd_image->parsed()) {
            osm::ExperimentConfig cfg = osm::parse_config_file(config_path);
            apply_overrides(cfg, overrides);
            print_report(osm::run_image(dataset_path, cfg));
        } else if (cmd_validate->parsed()) {
            return run_validate();
        }
    } catch (const osm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const osm::DataFormatError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const osm::SolverError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
