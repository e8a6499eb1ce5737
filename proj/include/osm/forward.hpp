#ifndef OSM_FORWARD_HPP
#define OSM_FORWARD_HPP

#include <memory>
#include <vector>

#include "osm/geometry.hpp"
#include "osm/types.hpp"

namespace osm {

// ---------------------------------------------------------------------------
// Volume grid for the Lippmann-Schwinger discretization
// ---------------------------------------------------------------------------

// m x m cells over a square box; field samples live at cell centers.
struct VolumeGrid {
    double lo, hi; // same range in both coordinates
    int m;

    VolumeGrid(double lo_, double hi_, int m_);

    double h() const { return (hi - lo) / m; }
    Point2 center(int i, int j) const {
        const double s = h();
        return {lo + (i + 0.5) * s, lo + (j + 0.5) * s};
    }
    std::size_t cells() const { return static_cast<std::size_t>(m) * m; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * m + j; }
};

// ---------------------------------------------------------------------------
// Free-space kernel
// ---------------------------------------------------------------------------

// Phi(x, y) = (i/4) H0^(1)(k |x - y|)
Complex green(Point2 x, Point2 y, double k);

// d/d nu(x) Phi(x, y) = -(i k / 4) H1^(1)(k r) ((x - y) . nu) / r
Complex green_normal_derivative(Point2 x, Direction2 nu, Point2 y, double k);

// ---------------------------------------------------------------------------
// Lippmann-Schwinger operator and solver
// ---------------------------------------------------------------------------

// Matrix-free handle for u -> (I - K) u where
//   (K u)_i = k^2 [ sum_{j != i} Phi(x_i, y_j) eta_j u_j h^2 + S eta_i u_i ],
// S being the closed-form integral of Phi over the equal-area disk of the
// diagonal cell.  Applications run through a padded-FFT convolution of the
// translation-invariant kernel table.
class LsOperator {
  public:
    LsOperator(const ContrastMap& map, const VolumeGrid& grid, double k);
    ~LsOperator();
    LsOperator(LsOperator&&) noexcept;
    LsOperator& operator=(LsOperator&&) noexcept;

    void apply(const std::vector<Complex>& u, std::vector<Complex>& out) const;

    const VolumeGrid& grid() const;
    double wave_number() const;
    const std::vector<Complex>& contrast() const;           // eta at cell centers
    const std::vector<std::size_t>& support_cells() const;  // indices with eta != 0

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

LsOperator assemble_ls_system(const ContrastMap& map, const VolumeGrid& grid, double k);

struct ForwardSolution {
    double k;
    Direction2 d;
    VolumeGrid grid;
    std::vector<Complex> total_field; // u at cell centers
    std::vector<Complex> contrast;    // eta at cell centers
    std::vector<std::size_t> support_cells;
    double residual = 0.0;
    int iterations = 0;
};

// Relative GMRES tolerance and iteration budget for the forward solve.
inline constexpr double forward_solver_tolerance = 1e-8;
inline constexpr int forward_solver_restart = 100;
inline constexpr int forward_solver_max_iterations = 2000;

ForwardSolution solve_forward(const LsOperator& op, Direction2 d);
ForwardSolution solve_forward(const ContrastMap& map, Direction2 d, double k,
                              const VolumeGrid& grid);

// Field evaluations outside the support: x must stay at least one cell
// width away from every contributing cell center (the quadrature's nearest
// singularity), else a domain error is raised.
Complex scattered_at(const ForwardSolution& sol, Point2 x);
Complex scattered_normal_at(const ForwardSolution& sol, Point2 x, Direction2 nu);

// Far-field pattern: k^2 gamma2 sum_c exp(-i k xhat.y_c) eta_c u_c h^2 with
// gamma2 = e^{i pi/4} / sqrt(8 pi k).
Complex farfield_at(const ForwardSolution& sol, Direction2 xhat);

// ---------------------------------------------------------------------------
// Separation-of-variables reference for the homogeneous disk
// ---------------------------------------------------------------------------

// Independent of the volume-integral path: expands the incident wave in
// cylindrical modes and matches u and du/dr across the disk boundary.  The
// disk is centered at the origin; the interior wave number is k sqrt(1+eta0).
class DiskSeriesOracle {
  public:
    // extra_order raises the automatic truncation order (for convergence
    // checks); the default is already converged to the discard threshold.
    DiskSeriesOracle(Complex eta0, double radius, double k, int extra_order = 0);

    Complex scattered(Point2 x, Direction2 d) const;                  // |x| > radius
    Complex scattered_radial_derivative(Point2 x, Direction2 d) const;
    Complex far_field(Direction2 xhat, Direction2 d) const;

    int truncation_order() const { return static_cast<int>(coeff_.size()) - 1; }
    // Largest |b_N| / max |b_n|; a loud tail means the truncation is suspect.
    double tail_ratio() const { return tail_ratio_; }

  private:
    double radius_;
    double k_;
    std::vector<Complex> coeff_; // b_n, n = 0..N
    double tail_ratio_;
};

Complex disk_series_oracle(Complex eta0, double radius, double k, Point2 x, Direction2 d);

} // namespace osm

#endif
