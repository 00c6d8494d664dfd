#include "buafd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "buafd/errors.hpp"

namespace buafd {

namespace {

constexpr double kSnrCapDb = 99.0;

// Centered moving average with edge windows clipped to the valid range.
std::vector<double> moving_average(std::span<const double> x, std::size_t width) {
    if (width < 1) width = 1;
    if (width % 2 == 0) ++width;
    const std::size_t n = x.size();
    const std::size_t half = width / 2;
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

}  // namespace

double prd(std::span<const double> original, std::span<const double> reconstructed) {
    if (original.size() != reconstructed.size()) throw InvalidInput("prd length mismatch");
    if (original.empty()) throw InvalidInput("prd on empty signal");
    double err = 0.0, sig = 0.0;
    for (std::size_t i = 0; i < original.size(); ++i) {
        const double d = original[i] - reconstructed[i];
        err += d * d;
        sig += original[i] * original[i];
    }
    if (!(sig > 0.0)) throw UndefinedMetric("prd undefined for a zero-energy signal");
    return 100.0 * std::sqrt(err / sig);
}

double snr(std::span<const double> original, std::span<const double> reconstructed) {
    if (original.size() != reconstructed.size()) throw InvalidInput("snr length mismatch");
    if (original.empty()) throw InvalidInput("snr on empty signal");
    double mean = 0.0;
    for (double v : original) mean += v;
    mean /= static_cast<double>(original.size());
    double var = 0.0, err = 0.0;
    for (std::size_t i = 0; i < original.size(); ++i) {
        var += (original[i] - mean) * (original[i] - mean);
        const double d = original[i] - reconstructed[i];
        err += d * d;
    }
    if (!(err > 0.0)) return kSnrCapDb;
    return std::min(kSnrCapDb, 10.0 * std::log10(var / err));
}

double compression_ratio(std::size_t n_inp_bits, std::size_t n_out_bits) {
    if (n_inp_bits == 0 || n_out_bits == 0) throw InvalidInput("bit counts must be positive");
    return static_cast<double>(n_inp_bits) / static_cast<double>(n_out_bits);
}

FidelityReport make_fidelity_report(std::span<const double> original,
                                    std::span<const double> reconstructed,
                                    std::size_t n_inp_bits, std::size_t n_out_bits) {
    FidelityReport report;
    report.n_inp_bits = n_inp_bits;
    report.n_out_bits = n_out_bits;
    report.cr = compression_ratio(n_inp_bits, n_out_bits);
    report.prd_percent = prd(original, reconstructed);
    report.snr_db = snr(original, reconstructed);
    report.qs = report.prd_percent > 0.0 ? report.cr / report.prd_percent
                                         : report.cr / 1e-12;
    return report;
}

std::vector<std::size_t> detect_qrs(std::span<const double> signal, double fs,
                                    const QrsDetectorConfig& config) {
    if (!(fs > 0.0)) throw InvalidInput("sample rate must be positive");
    if (signal.size() < static_cast<std::size_t>(2.0 * fs)) {
        throw InvalidInput("signal shorter than two seconds");
    }

    const auto width = [fs](double seconds) {
        return static_cast<std::size_t>(std::max(1.0, std::round(seconds * fs)));
    };

    // Difference of two centered moving averages as the 8-20 Hz band pass.
    const std::vector<double> narrow = moving_average(signal, width(config.bandpass_narrow_s));
    const std::vector<double> wide = moving_average(signal, width(config.bandpass_wide_s));
    std::vector<double> band(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) band[i] = narrow[i] - wide[i];

    std::vector<double> squared(signal.size());
    double mean_sq = 0.0;
    for (std::size_t i = 0; i < band.size(); ++i) {
        squared[i] = band[i] * band[i];
        mean_sq += squared[i];
    }
    mean_sq /= static_cast<double>(squared.size());

    const std::vector<double> ma_qrs = moving_average(squared, width(config.qrs_window_s));
    const std::vector<double> ma_beat = moving_average(squared, width(config.beat_window_s));

    const double offset = config.threshold_offset * mean_sq;
    const std::size_t min_block = width(config.min_block_s);
    const std::size_t refractory = width(config.refractory_s);

    std::vector<std::size_t> peaks;
    std::size_t block_start = 0;
    bool in_block = false;
    for (std::size_t i = 0; i <= signal.size(); ++i) {
        const bool active = i < signal.size() && ma_qrs[i] > ma_beat[i] + offset;
        if (active && !in_block) {
            in_block = true;
            block_start = i;
        } else if (!active && in_block) {
            in_block = false;
            const std::size_t block_len = i - block_start;
            if (block_len < min_block) continue;
            std::size_t peak = block_start;
            double peak_value = squared[block_start];
            double peak_band = std::abs(band[block_start]);
            for (std::size_t j = block_start + 1; j < i; ++j) {
                peak_band = std::max(peak_band, std::abs(band[j]));
                if (squared[j] > peak_value) {
                    peak_value = squared[j];
                    peak = j;
                }
            }
            if (peak_band < config.amplitude_floor) continue;
            if (!peaks.empty() && peak - peaks.back() < refractory) {
                // Keep the stronger of the two candidates inside the
                // refractory window.
                if (peak_value > squared[peaks.back()]) peaks.back() = peak;
                continue;
            }
            peaks.push_back(peak);
        }
    }
    return peaks;
}

BeatMatchReport match_beats(std::span<const std::size_t> reference,
                            std::span<const std::size_t> test, double fs, double tolerance_s) {
    if (!(fs > 0.0)) throw InvalidInput("sample rate must be positive");
    BeatMatchReport report;
    report.tolerance_s = tolerance_s;

    // Candidate pairs within tolerance, greedily consumed by ascending gap.
    // The tie-break uses the unordered index pair so that swapping the roles
    // of reference and test selects the same matches.
    struct Pair {
        double gap;
        std::size_t lo, hi;
        std::size_t ref_idx, test_idx;
    };
    std::vector<Pair> pairs;
    const double tol_samples = tolerance_s * fs;
    std::size_t j_lo = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        while (j_lo < test.size() &&
               static_cast<double>(test[j_lo]) < static_cast<double>(reference[i]) - tol_samples) {
            ++j_lo;
        }
        for (std::size_t j = j_lo; j < test.size(); ++j) {
            const double gap = std::abs(static_cast<double>(reference[i]) -
                                        static_cast<double>(test[j]));
            if (static_cast<double>(test[j]) > static_cast<double>(reference[i]) + tol_samples) {
                break;
            }
            if (gap <= tol_samples) {
                pairs.push_back({gap, std::min(reference[i], test[j]),
                                 std::max(reference[i], test[j]), i, j});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& p, const Pair& q) {
        return std::tie(p.gap, p.lo, p.hi) < std::tie(q.gap, q.lo, q.hi);
    });

    std::vector<bool> ref_used(reference.size(), false);
    std::vector<bool> test_used(test.size(), false);
    for (const Pair& p : pairs) {
        if (ref_used[p.ref_idx] || test_used[p.test_idx]) continue;
        ref_used[p.ref_idx] = true;
        test_used[p.test_idx] = true;
        ++report.tp;
    }
    report.fn = reference.size() - report.tp;
    report.fp = test.size() - report.tp;

    const double tp = static_cast<double>(report.tp);
    const double fn = static_cast<double>(report.fn);
    const double fp = static_cast<double>(report.fp);
    report.se = (tp + fn) > 0.0 ? 100.0 * tp / (tp + fn) : 100.0;
    report.ppv = (tp + fp) > 0.0 ? 100.0 * tp / (tp + fp) : 100.0;
    report.f1 = (2.0 * tp + fn + fp) > 0.0 ? 100.0 * 2.0 * tp / (2.0 * tp + fn + fp) : 100.0;
    return report;
}

}  // namespace buafd
