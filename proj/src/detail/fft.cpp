#include "detail/fft.hpp"

#include <stdexcept>

namespace osm::detail {

Fft2::Fft2(std::size_t n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0)
        throw std::invalid_argument("Fft2: size must be a power of two >= 2");
    bitrev_.resize(n);
    std::uint32_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t r = 0;
        for (std::uint32_t b = 0; b < log2n; ++b)
            if (i & (std::size_t{1} << b)) r |= std::uint32_t{1} << (log2n - 1 - b);
        bitrev_[i] = r;
    }
    twiddle_fwd_.resize(n / 2);
    twiddle_inv_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double phi = -two_pi * static_cast<double>(k) / static_cast<double>(n);
        twiddle_fwd_[k] = {std::cos(phi), std::sin(phi)};
        twiddle_inv_[k] = {std::cos(phi), -std::sin(phi)};
    }
}

void Fft2::fft1(Complex* a, const std::vector<Complex>& tw) const {
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = bitrev_[i];
        if (j > i) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const Complex w = tw[k * step];
                const Complex u = a[start + k];
                const Complex v = a[start + k + half] * w;
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
    }
}

void Fft2::transform(std::vector<Complex>& a, const std::vector<Complex>& tw) const {
    const std::size_t n = n_;
    if (a.size() != n * n) throw std::invalid_argument("Fft2: bad buffer size");
    for (std::size_t r = 0; r < n; ++r) fft1(a.data() + r * n, tw);
    std::vector<Complex> col(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t r = 0; r < n; ++r) col[r] = a[r * n + c];
        fft1(col.data(), tw);
        for (std::size_t r = 0; r < n; ++r) a[r * n + c] = col[r];
    }
}

} // namespace osm::detail
