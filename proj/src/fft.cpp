#include "buafd/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "buafd/errors.hpp"

namespace buafd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// FFTW planning is not thread safe; execution through the new-array
// interface is. Plans are created once per (length, direction) with
// FFTW_UNALIGNED so they accept whatever buffers callers hand in.
class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<fftw_complex> in(n), out(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.data(), out.data(), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

std::vector<std::complex<double>> run(std::span<const std::complex<double>> x, int sign) {
    if (x.empty()) throw InvalidInput("fft: empty input");
    const std::size_t n = x.size();
    std::vector<std::complex<double>> in(x.begin(), x.end());
    std::vector<std::complex<double>> out(n);
    fftw_plan plan = plan_cache().get(n, sign);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

std::vector<std::complex<double>> fft_forward(std::span<const std::complex<double>> x) {
    return run(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> fft_inverse(std::span<const std::complex<double>> x) {
    return run(x, FFTW_BACKWARD);
}

std::vector<std::complex<double>> unit_circle_nodes(std::size_t length) {
    std::vector<std::complex<double>> nodes(length);
    for (std::size_t k = 0; k < length; ++k) {
        const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(length);
        nodes[k] = {std::cos(t), std::sin(t)};
    }
    return nodes;
}

}  // namespace buafd
