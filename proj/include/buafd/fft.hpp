#pragma once

#include <complex>
#include <span>
#include <vector>

namespace buafd {

// Unscaled forward DFT: X[k] = sum_t x[t] e^{-i 2 pi k t / L}.
std::vector<std::complex<double>> fft_forward(std::span<const std::complex<double>> x);

// Unscaled inverse DFT: x[t] = sum_k X[k] e^{+i 2 pi k t / L}.
std::vector<std::complex<double>> fft_inverse(std::span<const std::complex<double>> x);

// Nodes e^{i 2 pi k / L}, k = 0..L-1.
std::vector<std::complex<double>> unit_circle_nodes(std::size_t length);

}  // namespace buafd
