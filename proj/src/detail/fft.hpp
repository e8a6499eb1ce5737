#ifndef OSM_DETAIL_FFT_HPP
#define OSM_DETAIL_FFT_HPP

#include <cstdint>
#include <vector>

#include "osm/types.hpp"

namespace osm::detail {

// Iterative radix-2 complex FFT on an n x n row-major grid (n a power of
// two).  Twiddles and the bit-reversal permutation are precomputed once per
// plan; transforms are deterministic regardless of thread count.
class Fft2 {
  public:
    explicit Fft2(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::vector<Complex>& a) const { transform(a, twiddle_fwd_); }
    // Unscaled inverse; callers fold the 1/n^2 into their own constants.
    void inverse(std::vector<Complex>& a) const { transform(a, twiddle_inv_); }

  private:
    void fft1(Complex* a, const std::vector<Complex>& tw) const;
    void transform(std::vector<Complex>& a, const std::vector<Complex>& tw) const;

    std::size_t n_;
    std::vector<std::uint32_t> bitrev_;
    std::vector<Complex> twiddle_fwd_; // exp(-2 pi i k / n), k < n/2
    std::vector<Complex> twiddle_inv_;
};

} // namespace osm::detail

#endif
