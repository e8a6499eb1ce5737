#ifndef OSM_DETAIL_GMRES_HPP
#define OSM_DETAIL_GMRES_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "osm/types.hpp"

namespace osm::detail {

struct GmresResult {
    double relative_residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Restarted GMRES with modified Gram-Schmidt Arnoldi and Givens rotations,
// matrix-free.  apply(in, out) must compute out = A * in.  x is overwritten
// with the solution (starting guess 0).
GmresResult gmres(
    const std::function<void(const std::vector<Complex>&, std::vector<Complex>&)>& apply,
    const std::vector<Complex>& b, std::vector<Complex>& x, double tol, int restart,
    int max_iterations);

} // namespace osm::detail

#endif
