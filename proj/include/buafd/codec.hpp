#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "buafd/unwinding.hpp"

namespace buafd {

struct QuantizedLevel {
    std::pair<std::int32_t, std::int32_t> c{0, 0};
    std::pair<std::int32_t, std::int32_t> a{0, 0};
    std::vector<std::pair<std::int32_t, std::int32_t>> roots;

    bool operator==(const QuantizedLevel&) const = default;
};

// Integer parameter set for one window. Levels whose coefficient rounds to
// (0, 0) are dropped entirely.
struct QuantizedRecord {
    std::int32_t c0 = 0;
    std::vector<QuantizedLevel> levels;

    bool operator==(const QuantizedRecord&) const = default;
};

QuantizedRecord quantize(const DecompositionRecord& rec);

// Inverse of the scaling only; rounding loss is permanent. Residual energies
// in the returned record are not meaningful and are set to zero.
DecompositionRecord dequantize(const QuantizedRecord& q, std::size_t window_len);

struct StreamHeader {
    std::uint8_t version = 1;
    std::uint16_t window_len = 600;
    std::uint16_t sample_rate = 360;
    std::uint8_t n_levels = 8;
    std::uint32_t window_count = 0;
    std::uint16_t scale_c = 1;
    std::uint16_t scale_ar = 100;
};

struct SessionMeta {
    std::uint16_t window_len = 600;
    std::uint16_t sample_rate = 360;
    std::uint8_t n_levels = 8;
};

// One window in the stream: a coded record, or a raw fallback frame kept
// verbatim when factorization failed.
struct WindowPayload {
    bool raw = false;
    QuantizedRecord record;
    std::vector<std::int16_t> raw_samples;
};

// Bit-exact container. `bytes` is the full serialized stream including the
// header; its length in bits is the N_out used for compression-ratio
// accounting.
struct CompressedStream {
    StreamHeader header;
    std::vector<std::uint8_t> bytes;
};

CompressedStream encode_session(const std::vector<WindowPayload>& windows,
                                const SessionMeta& meta);
std::vector<WindowPayload> decode_session(std::span<const std::uint8_t> bytes,
                                          StreamHeader* header_out = nullptr);

// Codec surface for all-coded sessions: one canonical Huffman code over every
// integer symbol appearing across the records, (symbol, length) table in the
// header, MSB-first bit packing.
CompressedStream huffman_encode(const std::vector<QuantizedRecord>& records,
                                const SessionMeta& meta);
std::vector<QuantizedRecord> huffman_decode(const CompressedStream& stream);

// Boundary values of the weighted partial sum: per level the cumulative
// inner function times the modified Blaschke product, scaled by c_n.
std::vector<Complex> partial_sum_boundary(const std::vector<LevelResult>& levels,
                                          std::size_t length);

// Real reconstruction from quantized parameters: 2 Re of the partial sum
// minus the quantized c0.
RealFrame reconstruct(const QuantizedRecord& q, std::size_t window_len, double sample_rate_hz);

// Bypass-quantization reconstruction straight from a decomposition record.
RealFrame reconstruct_exact(const DecompositionRecord& rec, double sample_rate_hz);

}  // namespace buafd
