#ifndef OSM_DETAIL_PARALLEL_HPP
#define OSM_DETAIL_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace osm::detail {

// Worker cap: min(OSM_THREADS, hardware threads), at least 1.  Read once.
unsigned worker_count();

// Runs body(begin, end) over a static contiguous partition of [0, n).
// Results must be written to disjoint slots so the outcome is independent
// of the partitioning.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace osm::detail

#endif
