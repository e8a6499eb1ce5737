#ifndef OSM_DATA_HPP
#define OSM_DATA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "osm/forward.hpp"
#include "osm/geometry.hpp"
#include "osm/types.hpp"

namespace osm {

// Incident plane-wave directions together with their angular aperture
// (needed to weight direction quadratures and to persist datasets).
struct DirectionSet {
    Aperture aperture;
    std::vector<Direction2> directions;

    static DirectionSet uniform(int n, Aperture aperture);
    int count() const { return static_cast<int>(directions.size()); }
};

// Multi-static Cauchy data on the measurement circle: U holds u_sc and dU
// holds du_sc/dnu, both [n_receivers x n_directions].
struct CauchyDataset {
    double k = 0.0;
    MeasurementCircle circle{1.0, 1, full_aperture()};
    DirectionSet directions;
    ComplexMatrix U;
    ComplexMatrix dU;
    bool has_normal_derivative = false;

    std::vector<Receiver> receiver_list() const { return receivers(circle); }
    void validate() const; // shapes match geometry, entries finite
};

struct NoiseSpec {
    double delta = 0.0;     // relative level in the Frobenius norm
    std::uint64_t seed = 0;
};

struct SynthesisStats {
    double max_residual = 0.0;
    int max_iterations = 0;
    double seconds = 0.0;
};

// Solves the forward problem once per incident direction and evaluates the
// Cauchy pair at the receivers.  Directions run in parallel (worker count
// capped by OSM_THREADS).
CauchyDataset synthesize(const ContrastMap& map, double k, const MeasurementCircle& circle,
                         const DirectionSet& directions, const VolumeGrid& grid,
                         SynthesisStats* stats = nullptr);

// u^delta = u + delta (N1/||N1||_F) ||u||_F, independently for U (noise
// stream 1) and dU (stream 2); entries of N are uniform on the complex
// square {a+ib : |a|<=1, |b|<=1}.  Deterministic under a fixed seed.
CauchyDataset add_noise(const CauchyDataset& ds, const NoiseSpec& spec);

// Canonical self-describing binary layout (magic "OSMD"); loads are
// validated field by field.  CSV is a plain-text export with the header
// `# k R n_x n_d aperture_lo aperture_hi`.
void save_binary(const CauchyDataset& ds, const std::string& path);
CauchyDataset load_binary(const std::string& path);
void save_csv(const CauchyDataset& ds, const std::string& path);
CauchyDataset load_csv(const std::string& path);

// Dispatch on extension: ".csv" text, anything else binary.
void save(const CauchyDataset& ds, const std::string& path);
CauchyDataset load(const std::string& path);

} // namespace osm

#endif
