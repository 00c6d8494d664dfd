#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "buafd/hardy.hpp"

namespace buafd {

// One two-lead record in ADC integer units.
struct EcgRecord {
    std::string record_id;
    double fs = 360.0;
    int adc_resolution_bits = 11;
    std::vector<std::int16_t> channels[2];
    std::optional<std::vector<std::pair<std::size_t, int>>> annotations;
};

// Parses a format-212 record pair (header text + signal bytes). Every
// 3-byte group packs two 12-bit two's-complement samples, one per channel.
EcgRecord parse_wfdb_212(const std::string& header_text,
                         const std::vector<std::uint8_t>& dat);

// Inverse of the parser, used to build synthetic fixtures.
std::string make_header_text(const EcgRecord& record);
std::vector<std::uint8_t> encode_wfdb_212(const EcgRecord& record);

// Loads <stem>.hea / <stem>.dat, plus <stem>.atr beat annotations when the
// file exists.
EcgRecord read_record(const std::string& path_stem);

struct Windowing {
    std::vector<RealFrame> frames;
    std::size_t dropped_samples = 0;
};

// Contiguous non-overlapping windows of channel 0; the trailing remainder is
// dropped and reported.
Windowing window(const EcgRecord& record, std::size_t window_len);

}  // namespace buafd
