#include "osm/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "detail/parallel.hpp"
#include "osm/errors.hpp"

namespace osm {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: field \"" + key + "\": cannot parse number \"" + s + "\"");
    }
}

long parse_integer(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used, 10);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: field \"" + key + "\": cannot parse integer \"" + s + "\"");
    }
}

Aperture parse_aperture(const std::string& value, const std::string& key) {
    if (value == "full") return full_aperture();
    if (value == "half_bottom") return bottom_half_aperture();
    const auto parts = split_list(value);
    if (parts.size() != 2)
        throw ConfigError("config: field \"" + key + "\": expected 'full', 'half_bottom' or two angles");
    Aperture a{parse_number(parts[0], key), parse_number(parts[1], key)};
    if (a.hi <= a.lo) throw ConfigError("config: field \"" + key + "\": empty aperture");
    return a;
}

bool parse_flag(const std::string& value, const std::string& key) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw ConfigError("config: field \"" + key + "\": expected on/off");
}

} // namespace

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "medium") {
        cfg.medium = value;
    } else if (key == "eta") {
        const auto parts = split_list(value);
        if (parts.empty() || parts.size() > 2)
            throw ConfigError("config: field \"eta\": expected 're' or 're im'");
        cfg.eta = Complex(parse_number(parts[0], key),
                          parts.size() == 2 ? parse_number(parts[1], key) : 0.0);
        cfg.has_eta = true;
    } else if (key == "k") {
        cfg.k = parse_number(value, key);
    } else if (key == "delta") {
        cfg.delta = parse_number(value, key);
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_integer(value, key));
    } else if (key == "sampling_domain") {
        const auto parts = split_list(value);
        if (parts.size() != 4)
            throw ConfigError("config: field \"sampling_domain\": expected x1lo x1hi x2lo x2hi");
        cfg.sample_x1_lo = parse_number(parts[0], key);
        cfg.sample_x1_hi = parse_number(parts[1], key);
        cfg.sample_x2_lo = parse_number(parts[2], key);
        cfg.sample_x2_hi = parse_number(parts[3], key);
    } else if (key == "sampling_points") {
        const auto parts = split_list(value);
        if (parts.size() != 2)
            throw ConfigError("config: field \"sampling_points\": expected n1 n2");
        cfg.sample_n1 = static_cast<int>(parse_integer(parts[0], key));
        cfg.sample_n2 = static_cast<int>(parse_integer(parts[1], key));
    } else if (key == "R") {
        cfg.R = parse_number(value, key);
    } else if (key == "n_receivers") {
        cfg.n_receivers = static_cast<int>(parse_integer(value, key));
    } else if (key == "receiver_aperture") {
        cfg.receiver_aperture = parse_aperture(value, key);
    } else if (key == "n_directions") {
        cfg.n_directions = static_cast<int>(parse_integer(value, key));
    } else if (key == "direction_aperture") {
        cfg.direction_aperture = parse_aperture(value, key);
    } else if (key == "n_xhat") {
        cfg.n_xhat = static_cast<int>(parse_integer(value, key));
    } else if (key == "functionals") {
        cfg.functionals = split_list(value);
    } else if (key == "solver_m") {
        cfg.solver_m = static_cast<int>(parse_integer(value, key));
    } else if (key == "solver_box") {
        const auto parts = split_list(value);
        if (parts.size() != 2) throw ConfigError("config: field \"solver_box\": expected lo hi");
        cfg.solver_lo = parse_number(parts[0], key);
        cfg.solver_hi = parse_number(parts[1], key);
    } else if (key == "output_dir") {
        cfg.output_dir = value;
    } else if (key == "formats") {
        cfg.write_csv = false;
        cfg.write_pgm = false;
        for (const std::string& f : split_list(value)) {
            if (f == "csv")
                cfg.write_csv = true;
            else if (f == "pgm")
                cfg.write_pgm = true;
            else
                throw ConfigError("config: field \"formats\": unknown format \"" + f + "\"");
        }
    } else if (key == "cache") {
        cfg.use_cache = parse_flag(value, key);
    } else {
        throw ConfigError("config: unknown field \"" + key + "\"");
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + ": expected key = value");
        apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

void ExperimentConfig::validate() const {
    const auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("config: field \"" + field + "\": " + why);
    };
    if (medium.empty()) fail("medium", "must not be empty");
    if (k <= 0.0) fail("k", "must be > 0");
    if (delta < 0.0 || delta > 1.5) fail("delta", "must lie in [0, 1.5]");
    if (sample_n1 < 2 || sample_n2 < 2) fail("sampling_points", "counts must be >= 2");
    if (sample_x1_lo >= sample_x1_hi || sample_x2_lo >= sample_x2_hi)
        fail("sampling_domain", "empty ranges");
    if (R <= 0.0) fail("R", "must be > 0");
    if (n_receivers < 1) fail("n_receivers", "must be >= 1");
    if (n_directions < 1) fail("n_directions", "must be >= 1");
    if (n_xhat < 0) fail("n_xhat", "must be >= 0");
    if (functionals.empty()) fail("functionals", "must not be empty");
    for (const std::string& f : functionals)
        if (f != "I" && f != "I_far" && f != "I2" && f != "I2_far")
            fail("functionals", "unknown functional \"" + f + "\"");
    if (solver_m < 2) fail("solver_m", "must be >= 2");
    if (solver_lo >= solver_hi) fail("solver_box", "empty box");
    if (output_dir.empty()) fail("output_dir", "must not be empty");
    build_medium(*this); // medium expression must parse
}

SamplingGrid ExperimentConfig::sampling_grid() const {
    return SamplingGrid(sample_x1_lo, sample_x1_hi, sample_x2_lo, sample_x2_hi, sample_n1,
                        sample_n2);
}

MeasurementCircle ExperimentConfig::measurement_circle() const {
    return {R, n_receivers, receiver_aperture};
}

VolumeGrid ExperimentConfig::solver_grid() const { return VolumeGrid(solver_lo, solver_hi, solver_m); }

std::string config_to_text(const ExperimentConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "medium = " << c.medium << "\n";
    if (c.has_eta) os << "eta = " << c.eta.real() << " " << c.eta.imag() << "\n";
    os << "k = " << c.k << "\n";
    os << "delta = " << c.delta << "\n";
    os << "seed = " << c.seed << "\n";
    os << "sampling_domain = " << c.sample_x1_lo << " " << c.sample_x1_hi << " " << c.sample_x2_lo
       << " " << c.sample_x2_hi << "\n";
    os << "sampling_points = " << c.sample_n1 << " " << c.sample_n2 << "\n";
    os << "R = " << c.R << "\n";
    os << "n_receivers = " << c.n_receivers << "\n";
    os << "receiver_aperture = " << c.receiver_aperture.lo << " " << c.receiver_aperture.hi << "\n";
    os << "n_directions = " << c.n_directions << "\n";
    os << "direction_aperture = " << c.direction_aperture.lo << " " << c.direction_aperture.hi
       << "\n";
    os << "n_xhat = " << c.n_xhat << "\n";
    os << "functionals =";
    for (std::size_t i = 0; i < c.functionals.size(); ++i)
        os << (i ? ", " : " ") << c.functionals[i];
    os << "\n";
    os << "solver_m = " << c.solver_m << "\n";
    os << "solver_box = " << c.solver_lo << " " << c.solver_hi << "\n";
    os << "output_dir = " << c.output_dir << "\n";
    os << "formats =" << (c.write_csv ? " csv" : "") << (c.write_csv && c.write_pgm ? "," : "")
       << (c.write_pgm ? " pgm" : "") << "\n";
    os << "cache = " << (c.use_cache ? "on" : "off") << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Shape expressions
// ---------------------------------------------------------------------------

namespace {

struct ShapeParser {
    const std::string& s;
    std::size_t pos = 0;

    explicit ShapeParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string identifier() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }

    std::vector<double> arguments(const std::string& name, std::size_t expected) {
        if (!eat('(')) throw ConfigError("medium: expected '(' after \"" + name + "\"");
        std::vector<double> args;
        if (!eat(')')) {
            while (true) {
                skip_ws();
                std::size_t used = 0;
                double v = 0.0;
                try {
                    v = std::stod(s.substr(pos), &used);
                } catch (const std::exception&) {
                    throw ConfigError("medium: bad number in \"" + name + "(...)\"");
                }
                pos += used;
                args.push_back(v);
                if (eat(')')) break;
                if (!eat(',')) throw ConfigError("medium: expected ',' or ')' in \"" + name + "\"");
            }
        }
        if (args.size() != expected)
            throw ConfigError("medium: \"" + name + "\" takes " + std::to_string(expected) +
                              " arguments");
        return args;
    }

    Shape primary() {
        const std::string name = identifier();
        if (name.empty()) throw ConfigError("medium: expected a shape name");
        skip_ws();
        const bool call = pos < s.size() && s[pos] == '(';
        if (name == "kite") {
            if (call) arguments(name, 0);
            return Shape{Kite{}};
        }
        if (name == "disk") {
            const auto a = arguments(name, 3);
            if (a[2] <= 0.0) throw ConfigError("medium: disk radius must be > 0");
            return Shape{Disk{{a[0], a[1]}, a[2]}};
        }
        if (name == "rect") {
            const auto a = arguments(name, 4);
            if (a[2] <= 0.0 || a[3] <= 0.0)
                throw ConfigError("medium: rect half-widths must be > 0");
            return Shape{Rectangle{{a[0], a[1]}, a[2], a[3]}};
        }
        if (name == "square_cavity") {
            const auto a = arguments(name, 2);
            if (a[0] <= 0.0 || a[1] <= 0.0 || a[1] >= a[0])
                throw ConfigError("medium: square_cavity needs 0 < cavity radius < half-width");
            return Shape{SquareWithCavity{a[0], a[1]}};
        }
        throw ConfigError("medium: unknown shape \"" + name + "\"");
    }

    Shape expression() {
        Shape left = primary();
        while (true) {
            skip_ws();
            if (pos >= s.size()) break;
            if (s[pos] == '+') {
                ++pos;
                Shape right = primary();
                Union u;
                u.parts.push_back(std::move(left));
                u.parts.push_back(std::move(right));
                left = Shape{std::move(u)};
            } else if (s[pos] == '-') {
                ++pos;
                Shape right = primary();
                Difference d;
                d.parts.push_back(std::move(left));
                d.parts.push_back(std::move(right));
                left = Shape{std::move(d)};
            } else {
                throw ConfigError("medium: unexpected character '" + std::string(1, s[pos]) + "'");
            }
        }
        return left;
    }
};

} // namespace

Shape parse_shape_expression(const std::string& expr) {
    ShapeParser p(expr);
    return p.expression();
}

ContrastMap build_medium(const ExperimentConfig& cfg) {
    const bool is_catalogue =
        cfg.medium == "kite" || cfg.medium == "disk_rectangle" || cfg.medium == "square_cavity";
    if (is_catalogue) {
        ContrastMap map = catalogue(cfg.medium);
        if (cfg.has_eta)
            for (auto& piece : map.pieces) piece.eta = cfg.eta;
        if (cfg.has_eta && cfg.eta.imag() < 0.0)
            throw ConfigError("config: field \"eta\": Im(eta) must be >= 0");
        return map;
    }
    if (!cfg.has_eta)
        throw ConfigError("config: field \"eta\": required for inline medium \"" + cfg.medium +
                          "\"");
    Shape shape = parse_shape_expression(cfg.medium);
    // declared support box: the shape's own bounds with a small margin
    BoundingBox box = shape_bounding_box(shape);
    const double pad = 0.02 * std::max(box.x1_hi - box.x1_lo, box.x2_hi - box.x2_lo);
    box.x1_lo -= pad;
    box.x1_hi += pad;
    box.x2_lo -= pad;
    box.x2_hi += pad;
    return ContrastMap({{std::move(shape), cfg.eta}}, box);
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

struct ObjectPreset {
    const char* name;
    int n_full;    // N_x = N_d for figures 1-3
    int n_partial; // figure 4
};

constexpr ObjectPreset object_presets[] = {
    {"kite", 64, 32},
    {"disk_rectangle", 64, 32},
    {"square_cavity", 96, 48},
};

} // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const char* fig : {"fig1", "fig2", "fig3", "fig4"})
        for (const ObjectPreset& obj : object_presets)
            names.push_back(std::string(fig) + "_" + obj.name);
    return names;
}

ExperimentConfig preset(const std::string& name) {
    const std::size_t sep = name.find('_');
    const std::string fig = name.substr(0, sep);
    const std::string object = sep == std::string::npos ? "" : name.substr(sep + 1);

    const ObjectPreset* obj = nullptr;
    for (const ObjectPreset& o : object_presets)
        if (object == o.name) obj = &o;
    if (!obj || (fig != "fig1" && fig != "fig2" && fig != "fig3" && fig != "fig4"))
        throw ConfigError("preset: unknown preset \"" + name + "\" (try e.g. fig1_kite)");

    ExperimentConfig cfg;
    cfg.medium = object;
    cfg.k = 8.0;
    cfg.output_dir = "out/" + name;
    if (fig == "fig1") {
        cfg.R = 3.0;
        cfg.delta = 0.3;
        cfg.n_receivers = cfg.n_directions = obj->n_full;
        cfg.functionals = {"I", "I2"};
    } else if (fig == "fig2") {
        cfg.R = 3.0;
        cfg.delta = 0.9;
        cfg.n_receivers = cfg.n_directions = obj->n_full;
        cfg.functionals = {"I", "I2"};
    } else if (fig == "fig3") {
        cfg.R = 100.0;
        cfg.delta = 0.3;
        cfg.n_receivers = cfg.n_directions = obj->n_full;
        cfg.functionals = {"I", "I_far", "I2_far"};
    } else { // fig4: bottom-half aperture, half the data points
        cfg.R = 3.0;
        cfg.delta = 0.3;
        cfg.n_receivers = cfg.n_directions = obj->n_partial;
        cfg.receiver_aperture = bottom_half_aperture();
        cfg.direction_aperture = bottom_half_aperture();
        cfg.functionals = {"I", "I2"};
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Cache key
// ---------------------------------------------------------------------------

std::uint64_t config_data_hash(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << cfg.medium << "|";
    if (cfg.has_eta) os << cfg.eta.real() << "," << cfg.eta.imag();
    os << "|" << cfg.k << "|" << cfg.R << "|" << cfg.n_receivers << "|"
       << cfg.receiver_aperture.lo << "," << cfg.receiver_aperture.hi << "|" << cfg.n_directions
       << "|" << cfg.direction_aperture.lo << "," << cfg.direction_aperture.hi << "|"
       << cfg.solver_m << "|" << cfg.solver_lo << "," << cfg.solver_hi;
    const std::string key = os.str();
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Image export
// ---------------------------------------------------------------------------

void export_image_csv(const IndicatorImage& img, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw DataFormatError("export_image_csv: cannot open " + path);
    std::fprintf(f, "# functional k delta n1 n2 x1lo x1hi x2lo x2hi\n");
    std::fprintf(f, "# %s %.17g %.17g %d %d %.17g %.17g %.17g %.17g\n", img.functional.c_str(),
                 img.k, img.delta, img.grid.n1, img.grid.n2, img.grid.x1_lo, img.grid.x1_hi,
                 img.grid.x2_lo, img.grid.x2_hi);
    for (int i1 = 0; i1 < img.grid.n1; ++i1)
        for (int i2 = 0; i2 < img.grid.n2; ++i2)
            std::fprintf(f, "%.17g, %.17g, %.17g\n", img.grid.x1(i1), img.grid.x2(i2),
                         img.value(i1, i2));
    std::fclose(f);
}

IndicatorImage load_image_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataFormatError("load_image_csv: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("# functional", 0) != 0)
        throw DataFormatError("load_image_csv: missing header in " + path);
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw DataFormatError("load_image_csv: missing value header in " + path);
    std::istringstream hs(line.substr(2));
    std::string functional;
    double k, delta, x1lo, x1hi, x2lo, x2hi;
    int n1, n2;
    if (!(hs >> functional >> k >> delta >> n1 >> n2 >> x1lo >> x1hi >> x2lo >> x2hi))
        throw DataFormatError("load_image_csv: malformed value header");
    IndicatorImage img{SamplingGrid(x1lo, x1hi, x2lo, x2hi, n1, n2),
                       std::vector<double>(static_cast<std::size_t>(n1) * n2, 0.0),
                       false,
                       functional,
                       k,
                       delta};
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double x1, x2, v;
        char c;
        std::istringstream ss(line);
        if (!(ss >> x1 >> c >> x2 >> c >> v))
            throw DataFormatError("load_image_csv: malformed row " + std::to_string(rows + 1));
        if (rows >= img.values.size()) throw DataFormatError("load_image_csv: too many rows");
        img.values[rows++] = v;
    }
    if (rows != img.values.size())
        throw DataFormatError("load_image_csv: expected " + std::to_string(img.values.size()) +
                              " rows, found " + std::to_string(rows));
    double peak = 0.0;
    for (double v : img.values) peak = std::max(peak, v);
    img.normalized = std::abs(peak - 1.0) < 1e-12;
    return img;
}

void export_image_pgm(const IndicatorImage& img, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw DataFormatError("export_image_pgm: cannot open " + path);
    std::fprintf(f, "P5\n%d %d\n255\n", img.grid.n1, img.grid.n2);
    for (int i2 = img.grid.n2 - 1; i2 >= 0; --i2)
        for (int i1 = 0; i1 < img.grid.n1; ++i1) {
            const double v = std::clamp(img.value(i1, i2), 0.0, 1.0);
            const unsigned char byte = static_cast<unsigned char>(std::lround(255.0 * v));
            std::fwrite(&byte, 1, 1, f);
        }
    std::fclose(f);
}

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

namespace {

std::string cache_path_for(const ExperimentConfig& cfg) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(config_data_hash(cfg)));
    return (fs::path(cfg.output_dir) / "cache" / (std::string(hex) + ".osmd")).string();
}

CauchyDataset obtain_clean_dataset(const ExperimentConfig& cfg, RunReport& report,
                                   SynthesisStats& stats) {
    const std::string path = cache_path_for(cfg);
    report.dataset_cache_path = path;
    if (cfg.use_cache && fs::exists(path)) {
        CauchyDataset ds = load_binary(path);
        const bool matches = ds.k == cfg.k && ds.circle.radius == cfg.R &&
                             ds.circle.n_receivers == cfg.n_receivers &&
                             ds.directions.count() == cfg.n_directions;
        if (matches) {
            report.cache_hit = true;
            return ds;
        }
    }
    const ContrastMap medium = build_medium(cfg);
    CauchyDataset ds = synthesize(medium, cfg.k, cfg.measurement_circle(),
                                  DirectionSet::uniform(cfg.n_directions, cfg.direction_aperture),
                                  cfg.solver_grid(), &stats);
    if (cfg.use_cache) {
        fs::create_directories(fs::path(path).parent_path());
        save_binary(ds, path);
    }
    return ds;
}

double relative_gap(const ComplexMatrix& noisy, const ComplexMatrix& clean) {
    const double base = frobenius_norm(clean);
    if (base == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t t = 0; t < clean.data.size(); ++t)
        s += std::norm(noisy.data[t] - clean.data[t]);
    return std::sqrt(s) / base;
}

IndicatorImage compute_functional(const std::string& name, const CauchyDataset& ds,
                                  const SamplingGrid& grid, int n_xhat) {
    if (name == "I") return imaging_I(ds, grid, n_xhat);
    if (name == "I_far") return imaging_I_far(ds, grid, n_xhat);
    if (name == "I2") return imaging_I2(ds, grid);
    if (name == "I2_far") return imaging_I2_far(ds, grid);
    throw ConfigError("config: field \"functionals\": unknown functional \"" + name + "\"");
}

RunReport run_pipeline(const ExperimentConfig& cfg, const CauchyDataset& clean, RunReport report,
                       const SynthesisStats& stats) {
    const auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(cfg.output_dir);

    const CauchyDataset noisy = add_noise(clean, {cfg.delta, cfg.seed});
    report.achieved_noise_u = relative_gap(noisy.U, clean.U);
    report.achieved_noise_du = relative_gap(noisy.dU, clean.dU);

    const SamplingGrid grid = cfg.sampling_grid();
    nlohmann::json images_json = nlohmann::json::array();
    for (const std::string& name : cfg.functionals) {
        const auto f0 = std::chrono::steady_clock::now();
        IndicatorImage img = compute_functional(name, noisy, grid, cfg.n_xhat);
        img.delta = cfg.delta;
        FunctionalResult res;
        res.name = name;
        res.raw_max = img.max_value();
        res.degenerate = res.raw_max <= 0.0;
        if (!res.degenerate) img = normalize(img);
        if (cfg.write_csv) {
            res.csv_path = (fs::path(cfg.output_dir) / (name + ".csv")).string();
            export_image_csv(img, res.csv_path);
        }
        if (cfg.write_pgm) {
            res.pgm_path = (fs::path(cfg.output_dir) / (name + ".pgm")).string();
            export_image_pgm(img, res.pgm_path);
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - f0).count();
        report.images.push_back(res);
        images_json.push_back({{"functional", res.name},
                               {"csv", res.csv_path},
                               {"pgm", res.pgm_path},
                               {"raw_max", res.raw_max},
                               {"degenerate", res.degenerate},
                               {"seconds", res.seconds}});
    }

    report.data = {
        {"config", config_to_text(cfg)},
        {"medium", cfg.medium},
        {"k", cfg.k},
        {"delta", cfg.delta},
        {"seed", cfg.seed},
        {"noise", {{"requested", cfg.delta},
                   {"achieved_u", report.achieved_noise_u},
                   {"achieved_du", report.achieved_noise_du}}},
        {"solver", {{"max_residual", stats.max_residual},
                    {"max_iterations", stats.max_iterations},
                    {"synthesis_seconds", stats.seconds}}},
        {"cache", {{"path", report.dataset_cache_path}, {"hit", report.cache_hit}}},
        {"threads", detail::worker_count()},
        {"images", images_json},
        {"total_seconds",
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() +
             stats.seconds},
    };

    report.report_path = (fs::path(cfg.output_dir) / "report.json").string();
    std::ofstream os(report.report_path);
    os << report.data.dump(2) << "\n";
    return report;
}

} // namespace

RunReport run(const ExperimentConfig& cfg) {
    cfg.validate();
    RunReport report;
    SynthesisStats stats;
    const CauchyDataset clean = obtain_clean_dataset(cfg, report, stats);
    return run_pipeline(cfg, clean, std::move(report), stats);
}

std::string run_synthesize(const ExperimentConfig& cfg) {
    cfg.validate();
    RunReport report;
    SynthesisStats stats;
    const CauchyDataset clean = obtain_clean_dataset(cfg, report, stats);
    fs::create_directories(cfg.output_dir);
    const std::string path = (fs::path(cfg.output_dir) / "dataset.osmd").string();
    save_binary(clean, path);
    return path;
}

RunReport run_image(const std::string& dataset_path, const ExperimentConfig& cfg) {
    cfg.validate();
    RunReport report;
    report.dataset_cache_path = dataset_path;
    report.cache_hit = true;
    const CauchyDataset clean = load(dataset_path);
    SynthesisStats stats; // no synthesis happened
    return run_pipeline(cfg, clean, std::move(report), stats);
}

} // namespace osm
