#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace buafd {

using Complex = std::complex<double>;

// One fixed-length window of real samples (ADC units).
struct RealFrame {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
};

// Validates length (>= 8), finiteness and the sample rate.
RealFrame make_real_frame(std::vector<double> samples, double sample_rate_hz);

// Discrete Hardy-space function on the unit circle: boundary samples at the
// L uniform nodes together with the matching truncated power-series
// coefficients. Bins at and above ceil(L/2) are identically zero, so the
// stored series *is* the function and the two views stay consistent under
// the discrete Fourier pair.
class AnalyticFrame {
public:
    // Builds a frame from coefficients; entries at k >= ceil(L/2) must be
    // zero (a shorter vector is zero-padded). Boundary values are derived.
    static AnalyticFrame from_coeffs(std::vector<Complex> coeffs, std::size_t length);

    // Projects arbitrary boundary samples into the model: forward DFT,
    // truncation of bins >= ceil(L/2), inverse DFT.
    static AnalyticFrame project_boundary(std::span<const Complex> boundary);

    std::size_t size() const noexcept { return boundary_.size(); }
    std::span<const Complex> boundary() const noexcept { return boundary_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }

    // Highest index whose coefficient is numerically significant.
    std::size_t effective_degree() const noexcept { return effective_degree_; }

    // Squared discrete H2 norm: sum_k |coeffs[k]|^2.
    double energy() const noexcept { return energy_; }

private:
    AnalyticFrame() = default;
    void finalize();

    std::vector<Complex> boundary_;
    std::vector<Complex> coeffs_;
    std::size_t effective_degree_ = 0;
    double energy_ = 0.0;
};

// Rectangular lattice of step `resolution` intersected with |a| <= r_max.
struct DiskGrid {
    std::vector<Complex> points;
    double resolution = 0.0;
    double r_max = 0.0;
};

// Hardy projection of a real window. Keeps Fourier bin 0 whole and bins
// 1..ceil(L/2)-1 unchanged, so 2 Re F+ = F + c0 on the grid for signals
// inside the model band. Returns (F+, c0) with c0 the mean of the samples.
std::pair<AnalyticFrame, double> hardy_project(const RealFrame& frame);

// Truncated power series at an interior point, |z| < 1.
Complex evaluate_interior(const AnalyticFrame& f, Complex z);

// (1/L) sum_k f(w_k) conj(g(w_k)) over the boundary nodes. Normalized so
// monomials are orthonormal and Parseval holds without stray factors.
Complex boundary_inner_product(const AnalyticFrame& f, const AnalyticFrame& g);

DiskGrid build_grid(double resolution, double r_max);

}  // namespace buafd
