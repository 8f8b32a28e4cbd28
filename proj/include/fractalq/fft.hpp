#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Thin FFTW3 wrappers. Plans are created with FFTW_ESTIMATE on SIMD-aligned
// scratch buffers, so a given length always runs the same codelets and
// repeated calls are bit-identical. Planning is serialized internally; the
// functions are safe to call from several threads.
namespace fractalq::fft {

using cplx = std::complex<double>;

/// Forward real-to-complex transform: bins 0..n/2 of sum x[j] e^{-2 pi i jk/n}.
std::vector<cplx> forward_real(std::span<const double> x);

/// Unnormalized inverse of forward_real for a length-n signal: returns
/// sum_k X[k] e^{+2 pi i jk/n} with the Hermitian half implied, i.e.
/// inverse_real(forward_real(x), n) == n * x.
std::vector<double> inverse_real(std::span<const cplx> half_spectrum, std::size_t n);

/// Forward complex transform, unnormalized.
std::vector<cplx> forward(std::span<const cplx> x);

} // namespace fractalq::fft
