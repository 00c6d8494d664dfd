#include "buafd/hardy.hpp"

#include <algorithm>
#include <cmath>

#include "buafd/errors.hpp"
#include "buafd/fft.hpp"

namespace buafd {

namespace {

std::size_t kept_bins(std::size_t length) {
    return (length + 1) / 2;  // ceil(L/2)
}

}  // namespace

RealFrame make_real_frame(std::vector<double> samples, double sample_rate_hz) {
    if (samples.size() < 8) throw InvalidInput("real frame needs at least 8 samples");
    for (double s : samples) {
        if (!std::isfinite(s)) throw InvalidInput("real frame contains non-finite sample");
    }
    if (!(sample_rate_hz > 0.0)) throw InvalidInput("sample rate must be positive");
    return RealFrame{std::move(samples), sample_rate_hz};
}

void AnalyticFrame::finalize() {
    energy_ = 0.0;
    for (const Complex& c : coeffs_) energy_ += std::norm(c);
    double max_abs = 0.0;
    for (const Complex& c : coeffs_) max_abs = std::max(max_abs, std::abs(c));
    effective_degree_ = 0;
    const double floor = max_abs * 1e-16;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (std::abs(coeffs_[k]) > floor) effective_degree_ = k;
    }
}

AnalyticFrame AnalyticFrame::from_coeffs(std::vector<Complex> coeffs, std::size_t length) {
    if (length < 8) throw InvalidInput("analytic frame needs length >= 8");
    if (coeffs.size() > length) throw InvalidInput("coefficient vector longer than frame");
    coeffs.resize(length, Complex{0.0, 0.0});
    const std::size_t keep = kept_bins(length);
    for (std::size_t k = keep; k < length; ++k) {
        if (coeffs[k] != Complex{0.0, 0.0}) {
            throw InvalidInput("coefficients above ceil(L/2) must be zero");
        }
    }
    AnalyticFrame f;
    f.coeffs_ = std::move(coeffs);
    f.boundary_ = fft_inverse(f.coeffs_);
    f.finalize();
    return f;
}

AnalyticFrame AnalyticFrame::project_boundary(std::span<const Complex> boundary) {
    if (boundary.size() < 8) throw InvalidInput("analytic frame needs length >= 8");
    const std::size_t length = boundary.size();
    std::vector<Complex> coeffs = fft_forward(boundary);
    const double inv_l = 1.0 / static_cast<double>(length);
    const std::size_t keep = kept_bins(length);
    for (std::size_t k = 0; k < keep; ++k) coeffs[k] *= inv_l;
    for (std::size_t k = keep; k < length; ++k) coeffs[k] = Complex{0.0, 0.0};
    AnalyticFrame f;
    f.coeffs_ = std::move(coeffs);
    f.boundary_ = fft_inverse(f.coeffs_);
    f.finalize();
    return f;
}

std::pair<AnalyticFrame, double> hardy_project(const RealFrame& frame) {
    if (frame.samples.size() < 8) throw InvalidInput("frame too short");
    std::vector<Complex> boundary(frame.samples.size());
    double mean = 0.0;
    for (std::size_t t = 0; t < frame.samples.size(); ++t) {
        const double s = frame.samples[t];
        if (!std::isfinite(s)) throw InvalidInput("non-finite sample");
        boundary[t] = Complex{s, 0.0};
        mean += s;
    }
    mean /= static_cast<double>(frame.samples.size());
    return {AnalyticFrame::project_boundary(boundary), mean};
}

Complex evaluate_interior(const AnalyticFrame& f, Complex z) {
    if (std::abs(z) >= 1.0) throw DomainError("interior evaluation requires |z| < 1");
    // Ascending power sum over the significant coefficients.
    const auto coeffs = f.coeffs();
    const std::size_t top = f.effective_degree();
    Complex acc{0.0, 0.0};
    Complex z_pow{1.0, 0.0};
    for (std::size_t k = 0; k <= top; ++k) {
        acc += coeffs[k] * z_pow;
        z_pow *= z;
    }
    return acc;
}

Complex boundary_inner_product(const AnalyticFrame& f, const AnalyticFrame& g) {
    if (f.size() != g.size()) throw InvalidInput("inner product length mismatch");
    const auto fb = f.boundary();
    const auto gb = g.boundary();
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < fb.size(); ++k) acc += fb[k] * std::conj(gb[k]);
    return acc / static_cast<double>(fb.size());
}

DiskGrid build_grid(double resolution, double r_max) {
    if (!(resolution > 0.0) || resolution > 0.1) {
        throw InvalidInput("grid resolution must lie in (0, 0.1]");
    }
    if (r_max < 0.5 || r_max >= 1.0) throw InvalidInput("grid r_max must lie in [0.5, 1)");
    DiskGrid grid;
    grid.resolution = resolution;
    grid.r_max = r_max;
    const long span = static_cast<long>(std::floor(r_max / resolution + 1e-12));
    const double limit_sq = r_max * r_max * (1.0 + 1e-12);
    for (long n = -span; n <= span; ++n) {
        for (long m = -span; m <= span; ++m) {
            const double re = static_cast<double>(m) * resolution;
            const double im = static_cast<double>(n) * resolution;
            if (re * re + im * im <= limit_sq) grid.points.emplace_back(re, im);
        }
    }
    return grid;
}

}  // namespace buafd
