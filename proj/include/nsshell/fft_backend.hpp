#pragma once

#include <complex>

namespace nsshell::fft {

/// Unnormalized c2c transforms on row-major complex data, n points per axis.
/// backward applies e^{+i x.xi} (synthesis of series coefficients at grid
/// points), forward applies e^{-i x.xi}; forward/n^dim inverts backward.
/// Plans are cached per (dim, n, sign); execution is in place.
void backward(int dim, int n, std::complex<double>* data);
void forward(int dim, int n, std::complex<double>* data);

}  // namespace nsshell::fft
