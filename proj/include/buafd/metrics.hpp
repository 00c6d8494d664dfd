#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace buafd {

struct FidelityReport {
    double cr = 0.0;
    double prd_percent = 0.0;
    double qs = 0.0;
    double snr_db = 0.0;
    std::size_t n_inp_bits = 0;
    std::size_t n_out_bits = 0;
};

struct BeatMatchReport {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double se = 0.0;
    double ppv = 0.0;
    double f1 = 0.0;
    double tolerance_s = 0.010;
};

// Percentage root-mean-square difference with the raw (not mean-subtracted)
// denominator.
double prd(std::span<const double> original, std::span<const double> reconstructed);

// 10 log10 of mean-subtracted signal energy over error energy. A zero error
// energy is reported as the 99 dB cap.
double snr(std::span<const double> original, std::span<const double> reconstructed);

double compression_ratio(std::size_t n_inp_bits, std::size_t n_out_bits);

FidelityReport make_fidelity_report(std::span<const double> original,
                                    std::span<const double> reconstructed,
                                    std::size_t n_inp_bits, std::size_t n_out_bits);

struct QrsDetectorConfig {
    // Moving-average widths in seconds: band-pass pair, QRS window, beat window.
    double bandpass_narrow_s = 0.022;
    double bandpass_wide_s = 0.056;
    double qrs_window_s = 0.120;
    double beat_window_s = 0.600;
    double threshold_offset = 0.08;   // fraction of the mean squared band-passed signal
    double min_block_s = 0.060;       // shortest accepted QRS block
    double refractory_s = 0.200;
    double amplitude_floor = 1.0;     // band-passed peak amplitude below this is noise
};

// Two-moving-average QRS detector: difference-of-moving-averages band pass,
// squaring, a QRS-scale and a beat-scale moving average, and an adaptive
// offset threshold. Deterministic; applied identically to original and
// reconstructed signals.
std::vector<std::size_t> detect_qrs(std::span<const double> signal, double fs,
                                    const QrsDetectorConfig& config = {});

// Greedy one-to-one matching by ascending |delta|; a pair matches iff the
// gap is at most tolerance_s.
BeatMatchReport match_beats(std::span<const std::size_t> reference,
                            std::span<const std::size_t> test, double fs, double tolerance_s);

}  // namespace buafd
