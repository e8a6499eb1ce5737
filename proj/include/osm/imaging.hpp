#ifndef OSM_IMAGING_HPP
#define OSM_IMAGING_HPP

#include <string>
#include <vector>

#include "osm/data.hpp"
#include "osm/geometry.hpp"
#include "osm/types.hpp"

namespace osm {

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

// Test function phi_z(d) = exp(-i k z . d).
Complex phi_test(Point2 z, Direction2 d, double k);

// Scattering amplitude of the free-space kernel and its normal derivative:
//   Phi_inf(xhat, y)          = e^{i pi/4} / sqrt(8 pi k) * exp(-i k xhat . y)
//   dPhi_inf/dnu(y)(xhat, y)  = -i k (xhat . nu) Phi_inf(xhat, y)
struct FarFieldGreen {
    Complex value;
    Complex normal_derivative;
};
FarFieldGreen far_field_green2(Direction2 xhat, Point2 y, Direction2 nu, double k);

// ---------------------------------------------------------------------------
// Far-field extraction from Cauchy data
// ---------------------------------------------------------------------------

// Which boundary kernel closes the representation integral: the exact
// Cauchy pair, or the radiation-condition surrogate ik u_sc for du/dnu.
enum class FarFieldKernel { cauchy, impedance };

struct FarFieldMatrix {
    std::vector<Direction2> xhat;
    std::vector<Direction2> d;
    ComplexMatrix values; // [n_xhat x n_d]
    double k = 0.0;
    double weight_xhat = 0.0; // quadrature weight per xhat node
    double weight_d = 0.0;    // quadrature weight per incident direction
};

std::vector<Direction2> uniform_xhat(int n);

// Trapezoid quadrature of
//   u_inf(xhat, d) = int_dOmega u_sc dPhi_inf/dnu - du_sc/dnu Phi_inf ds(y)
// with weight (arc length)/n_receivers per node.
FarFieldMatrix extract_far_field(const CauchyDataset& ds, const std::vector<Direction2>& xhat,
                                 FarFieldKernel kernel = FarFieldKernel::cauchy);
FarFieldMatrix extract_far_field(const CauchyDataset& ds, int n_xhat,
                                 FarFieldKernel kernel = FarFieldKernel::cauchy);

// ---------------------------------------------------------------------------
// Indicator images
// ---------------------------------------------------------------------------

struct IndicatorImage {
    SamplingGrid grid;
    std::vector<double> values; // grid.index(i1, i2) addressing
    bool normalized = false;
    std::string functional;    // "I", "I_far", "I2", "I2_far"
    double k = 0.0;
    double delta = 0.0;        // noise level of the dataset that produced it

    double value(int i1, int i2) const { return values[grid.index(i1, i2)]; }
    double max_value() const;
    std::pair<int, int> argmax() const;
};

// I(z)  = int_{S^1} | int_{S^1} u_inf(xhat, d) phi_z(d) ds(d) |^2 ds(xhat),
// with u_inf extracted from the Cauchy pair; I_far replaces du/dnu by
// ik u_sc inside the extraction and needs only U.
IndicatorImage imaging_I(const CauchyDataset& ds, const SamplingGrid& grid, int n_xhat = 0);
IndicatorImage imaging_I_far(const CauchyDataset& ds, const SamplingGrid& grid, int n_xhat = 0);

// I2(z) = int_{S^1} | int_dOmega dImPhi/dnu u_sc - ImPhi du_sc/dnu ds |^2 ds(d)
// with Im Phi(x, z) = (1/4) J0(k |x - z|); I2_far uses ik u_sc for du/dnu.
IndicatorImage imaging_I2(const CauchyDataset& ds, const SamplingGrid& grid);
IndicatorImage imaging_I2_far(const CauchyDataset& ds, const SamplingGrid& grid);

// Point evaluations (shared with the grid versions; used for ray scans).
double imaging_I_at(const FarFieldMatrix& ff, Point2 z);
double imaging_I2_at(const CauchyDataset& ds, Point2 z,
                     FarFieldKernel kernel = FarFieldKernel::cauchy);

// Scale so the maximum is 1; rejects all-zero images (degenerate outcome).
IndicatorImage normalize(const IndicatorImage& img);

// Explicit constant of the noise-stability bound for I(z):
//   C = |S^1|^2 (||Phi_inf||^2 + ||dPhi_inf/dnu||^2) (||u_sc||^2 + ||du_sc/dnu||^2)
// with all norms over dOmega x S^1 evaluated by the same quadratures the
// functional uses.
double stability_constant_I(const CauchyDataset& clean, int n_xhat = 0);

} // namespace osm

#endif
