#ifndef OSM_DETAIL_RNG_HPP
#define OSM_DETAIL_RNG_HPP

#include <cstdint>
#include <random>

namespace osm::detail {

// SplitMix64 step; used only to derive independent stream seeds from one
// master seed (stream k gets the k-th output).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seedable stream of doubles uniform on [-1, 1).  Backed by MT19937-64 with
// an explicit 53-bit mantissa mapping so that outputs are identical across
// standard libraries.
class UniformPm1Stream {
  public:
    UniformPm1Stream(std::uint64_t master_seed, unsigned stream_index) {
        std::uint64_t s = master_seed;
        std::uint64_t seed = 0;
        for (unsigned i = 0; i <= stream_index; ++i) seed = splitmix64_next(s);
        gen_.seed(seed);
    }

    double next() {
        const std::uint64_t mantissa = gen_() >> 11; // 53 bits
        return 2.0 * (static_cast<double>(mantissa) * 0x1.0p-53) - 1.0;
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace osm::detail

#endif
