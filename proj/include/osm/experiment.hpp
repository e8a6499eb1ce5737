#ifndef OSM_EXPERIMENT_HPP
#define OSM_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "osm/data.hpp"
#include "osm/geometry.hpp"
#include "osm/imaging.hpp"

namespace osm {

// One declarative description of a full run.  Parsed from a flat
// `key = value` text file (# comments); see parse_config_text for the keys.
struct ExperimentConfig {
    std::string medium = "kite";     // catalogue name or shape expression
    bool has_eta = false;            // inline media need an explicit eta
    Complex eta = Complex(0.0);
    double k = 8.0;

    double sample_x1_lo = -2.0, sample_x1_hi = 2.0;
    double sample_x2_lo = -2.0, sample_x2_hi = 2.0;
    int sample_n1 = 96, sample_n2 = 96;

    double R = 3.0;
    int n_receivers = 64;
    Aperture receiver_aperture = full_aperture();
    int n_directions = 64;
    Aperture direction_aperture = full_aperture();
    int n_xhat = 0; // 0 -> n_directions

    double delta = 0.3;
    std::uint64_t seed = 1;

    std::vector<std::string> functionals = {"I"};

    int solver_m = 96;
    double solver_lo = -1.2, solver_hi = 1.2;

    std::string output_dir = "out";
    bool write_csv = true;
    bool write_pgm = true;
    bool use_cache = true;

    void validate() const; // throws ConfigError naming the offending field
    SamplingGrid sampling_grid() const;
    MeasurementCircle measurement_circle() const;
    VolumeGrid solver_grid() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string config_to_text(const ExperimentConfig& cfg);

// Shape expressions: catalogue names or primitives combined with + (union)
// and - (difference), e.g. "disk(-0.6,0.6,0.4) + rect(0.6,-0.6,0.45,0.25)".
// Primitives: disk(cx,cy,r), rect(cx,cy,hw1,hw2), square_cavity(hw,r), kite.
Shape parse_shape_expression(const std::string& expr);
ContrastMap build_medium(const ExperimentConfig& cfg);

// Figure presets: "<fig>_<object>" with fig in {fig1..fig4} and object in
// {kite, disk_rectangle, square_cavity}; fig1/fig2 are the near-field runs
// (30% resp. 90% noise), fig3 the far-field circle R = 100 with the
// scattered-field-only variants, fig4 the bottom-half aperture.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Content hash of the synthesis-relevant config subset (cache key).
std::uint64_t config_data_hash(const ExperimentConfig& cfg);

struct FunctionalResult {
    std::string name;
    std::string csv_path;
    std::string pgm_path;
    double raw_max = 0.0;
    bool degenerate = false;
    double seconds = 0.0;
};

struct RunReport {
    nlohmann::json data;
    std::string report_path;
    std::vector<FunctionalResult> images;
    std::string dataset_cache_path;
    bool cache_hit = false;
    double achieved_noise_u = 0.0;
    double achieved_noise_du = 0.0;
};

// Full pipeline: medium -> synthesis (cached) -> noise -> images -> files.
RunReport run(const ExperimentConfig& cfg);

// Synthesis only; writes the clean dataset and returns its path.
std::string run_synthesize(const ExperimentConfig& cfg);

// Imaging only, from a previously saved dataset (noise from the config is
// applied on top if delta > 0).
RunReport run_image(const std::string& dataset_path, const ExperimentConfig& cfg);

// Image files.  CSV: two-line header (names, values) then `x1, x2, value`
// rows in row-major grid order.  PGM: binary 8-bit grayscale, 255 = 1,
// row 0 = top (max x2).
void export_image_csv(const IndicatorImage& img, const std::string& path);
void export_image_pgm(const IndicatorImage& img, const std::string& path);
IndicatorImage load_image_csv(const std::string& path);

} // namespace osm

#endif
