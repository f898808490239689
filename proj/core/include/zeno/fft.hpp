#ifndef ZENO_FFT_HPP
#define ZENO_FFT_HPP

#include <complex>
#include <vector>

namespace zeno::fft {

using cplx = std::complex<double>;

/// In-place forward DFT, F[m] = sum_i a[i] e^{-2 pi i m i / M}.  Unnormalized.
void forward(cplx* data, std::size_t n);
/// In-place inverse DFT including the 1/M factor.
void inverse(cplx* data, std::size_t n);

inline void forward(std::vector<cplx>& v) { forward(v.data(), v.size()); }
inline void inverse(std::vector<cplx>& v) { inverse(v.data(), v.size()); }

}  // namespace zeno::fft

#endif
