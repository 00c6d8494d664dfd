#include "buafd/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <string>

#include "buafd/blaschke.hpp"
#include "buafd/errors.hpp"
#include "buafd/fft.hpp"

namespace buafd {

namespace {

constexpr char kMagic[4] = {'B', 'U', 'A', 'F'};
constexpr int kMaxCodeBits = 57;
constexpr std::size_t kMaxAlphabet = 65535;  // table_size is a u16
constexpr double kDiskClamp = 0.992;         // keeps rounded parameters strictly inside the disk

std::int32_t round_away(double v) {
    return static_cast<std::int32_t>(std::llround(v));
}

Complex clamp_into_disk(Complex v) {
    const double a = std::abs(v);
    if (a > kDiskClamp) v *= kDiskClamp / a;
    return v;
}

// ---------------------------------------------------------------------
// Bit-level IO, MSB first
// ---------------------------------------------------------------------

class BitWriter {
public:
    void put_bit(int bit) {
        current_ = static_cast<std::uint8_t>((current_ << 1) | (bit & 1));
        if (++filled_ == 8) {
            bytes_.push_back(current_);
            current_ = 0;
            filled_ = 0;
        }
    }

    void put_bits(std::uint64_t value, int count) {
        for (int i = count - 1; i >= 0; --i) put_bit(static_cast<int>((value >> i) & 1U));
    }

    // Zero-pads the final partial byte.
    std::vector<std::uint8_t> finish() {
        if (filled_ > 0) {
            bytes_.push_back(static_cast<std::uint8_t>(current_ << (8 - filled_)));
            current_ = 0;
            filled_ = 0;
        }
        return std::move(bytes_);
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint8_t current_ = 0;
    int filled_ = 0;
};

class BitReader {
public:
    BitReader(std::span<const std::uint8_t> bytes, std::size_t base_byte_offset)
        : bytes_(bytes), base_(base_byte_offset) {}

    int get_bit() {
        const std::size_t byte = pos_ >> 3;
        if (byte >= bytes_.size()) {
            throw CorruptStream("truncated stream", base_ + bytes_.size());
        }
        const int bit = (bytes_[byte] >> (7 - (pos_ & 7))) & 1;
        ++pos_;
        return bit;
    }

    std::uint64_t get_bits(int count) {
        std::uint64_t v = 0;
        for (int i = 0; i < count; ++i) v = (v << 1) | static_cast<std::uint64_t>(get_bit());
        return v;
    }

    std::size_t byte_offset() const { return base_ + (pos_ >> 3); }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t base_ = 0;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------
// Canonical Huffman code
// ---------------------------------------------------------------------

// Deterministic code-length assignment: ties in the merge queue are broken
// by node creation order, with leaves created in ascending symbol order.
std::map<std::int32_t, std::uint8_t> build_code_lengths(
    const std::map<std::int32_t, std::uint64_t>& freq) {
    std::map<std::int32_t, std::uint8_t> lengths;
    if (freq.empty()) return lengths;
    if (freq.size() == 1) {
        lengths[freq.begin()->first] = 1;
        return lengths;
    }

    struct Node {
        std::uint64_t weight;
        int left = -1;
        int right = -1;
        std::int32_t symbol = 0;
    };
    std::vector<Node> nodes;
    nodes.reserve(freq.size() * 2);
    using Entry = std::pair<std::uint64_t, int>;  // (weight, node index)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    for (const auto& [symbol, count] : freq) {
        nodes.push_back(Node{count, -1, -1, symbol});
        queue.emplace(count, static_cast<int>(nodes.size()) - 1);
    }
    while (queue.size() > 1) {
        auto [wa, ia] = queue.top();
        queue.pop();
        auto [wb, ib] = queue.top();
        queue.pop();
        nodes.push_back(Node{wa + wb, ia, ib, 0});
        queue.emplace(wa + wb, static_cast<int>(nodes.size()) - 1);
    }

    // Depth-first walk assigning depths to leaves.
    std::vector<std::pair<int, int>> stack{{queue.top().second, 0}};
    while (!stack.empty()) {
        auto [idx, depth] = stack.back();
        stack.pop_back();
        const Node& node = nodes[idx];
        if (node.left < 0) {
            if (depth > kMaxCodeBits) throw EncoderError("Huffman code length exceeds limit");
            lengths[node.symbol] = static_cast<std::uint8_t>(std::max(depth, 1));
        } else {
            stack.emplace_back(node.left, depth + 1);
            stack.emplace_back(node.right, depth + 1);
        }
    }
    return lengths;
}

struct CanonicalCode {
    // Encoder view.
    std::map<std::int32_t, std::pair<std::uint64_t, int>> codes;  // symbol -> (code, length)
    // Decoder view, canonical order.
    std::vector<std::int32_t> symbols_by_order;
    std::vector<std::uint64_t> first_code;  // per length 0..max
    std::vector<std::size_t> order_offset;  // per length 0..max
    std::vector<std::size_t> count;         // per length 0..max
    int max_length = 0;
};

CanonicalCode make_canonical(const std::vector<std::pair<std::int32_t, std::uint8_t>>& table) {
    CanonicalCode code;
    std::vector<std::pair<std::int32_t, std::uint8_t>> sorted = table;
    std::sort(sorted.begin(), sorted.end(), [](const auto& p, const auto& q) {
        if (p.second != q.second) return p.second < q.second;
        return p.first < q.first;
    });
    for (const auto& [symbol, length] : sorted) {
        code.max_length = std::max(code.max_length, static_cast<int>(length));
    }
    if (code.max_length > kMaxCodeBits) throw CorruptStream("code length exceeds limit", 0);
    code.first_code.assign(code.max_length + 1, 0);
    code.order_offset.assign(code.max_length + 1, 0);
    code.count.assign(code.max_length + 1, 0);
    std::uint64_t next = 0;
    int prev_len = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const int len = sorted[i].second;
        next <<= (len - prev_len);
        if (code.count[len] == 0) {
            code.first_code[len] = next;
            code.order_offset[len] = i;
        }
        code.codes[sorted[i].first] = {next, len};
        code.symbols_by_order.push_back(sorted[i].first);
        ++code.count[len];
        ++next;
        prev_len = len;
        if (len < 64 && next > (1ULL << len)) {
            throw CorruptStream("over-subscribed Huffman code table", 0);
        }
    }
    return code;
}

std::int32_t decode_symbol(BitReader& reader, const CanonicalCode& code) {
    if (code.max_length == 0) throw CorruptStream("no Huffman table", reader.byte_offset());
    std::uint64_t acc = 0;
    for (int len = 1; len <= code.max_length; ++len) {
        acc = (acc << 1) | static_cast<std::uint64_t>(reader.get_bit());
        if (code.count[len] > 0 && acc >= code.first_code[len] &&
            acc - code.first_code[len] < code.count[len]) {
            return code.symbols_by_order[code.order_offset[len] + (acc - code.first_code[len])];
        }
    }
    throw CorruptStream("unknown codeword", reader.byte_offset());
}

// ---------------------------------------------------------------------
// Header serialization, big-endian
// ---------------------------------------------------------------------

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_i32(std::vector<std::uint8_t>& out, std::int32_t v) {
    put_u32(out, static_cast<std::uint32_t>(v));
}

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = (static_cast<std::uint32_t>(bytes_[pos_]) << 24) |
                          (static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 16) |
                          (static_cast<std::uint32_t>(bytes_[pos_ + 2]) << 8) |
                          static_cast<std::uint32_t>(bytes_[pos_ + 3]);
        pos_ += 4;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::size_t position() const { return pos_; }

private:
    void need(std::size_t n) {
        if (pos_ + n > bytes_.size()) throw CorruptStream("truncated header", bytes_.size());
    }
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void append_symbols(const QuantizedRecord& rec, std::vector<std::int32_t>& out) {
    out.push_back(rec.c0);
    out.push_back(static_cast<std::int32_t>(rec.levels.size()));
    for (const QuantizedLevel& level : rec.levels) {
        out.push_back(level.c.first);
        out.push_back(level.c.second);
        out.push_back(level.a.first);
        out.push_back(level.a.second);
        out.push_back(static_cast<std::int32_t>(level.roots.size()));
        for (const auto& r : level.roots) {
            out.push_back(r.first);
            out.push_back(r.second);
        }
    }
}

}  // namespace

QuantizedRecord quantize(const DecompositionRecord& rec) {
    QuantizedRecord q;
    q.c0 = round_away(rec.c0);
    for (const LevelResult& level : rec.levels) {
        QuantizedLevel ql;
        ql.c = {round_away(level.c.real()), round_away(level.c.imag())};
        if (ql.c.first == 0 && ql.c.second == 0) continue;  // threshold rule
        const Complex a = clamp_into_disk(level.a);
        ql.a = {round_away(100.0 * a.real()), round_away(100.0 * a.imag())};
        for (const Complex& root : level.roots) {
            const Complex r = clamp_into_disk(root);
            ql.roots.emplace_back(round_away(100.0 * r.real()), round_away(100.0 * r.imag()));
        }
        q.levels.push_back(std::move(ql));
    }
    return q;
}

DecompositionRecord dequantize(const QuantizedRecord& q, std::size_t window_len) {
    DecompositionRecord rec;
    rec.c0 = static_cast<double>(q.c0);
    rec.window_len = window_len;
    for (const QuantizedLevel& ql : q.levels) {
        LevelResult level;
        level.c = Complex{static_cast<double>(ql.c.first), static_cast<double>(ql.c.second)};
        level.a = Complex{ql.a.first / 100.0, ql.a.second / 100.0};
        if (std::abs(level.a) >= 1.0) {
            throw CorruptStream("dequantized parameter outside the unit disk", 0);
        }
        for (const auto& r : ql.roots) {
            const Complex root{r.first / 100.0, r.second / 100.0};
            if (std::abs(root) >= 1.0) {
                throw CorruptStream("dequantized root outside the unit disk", 0);
            }
            level.roots.push_back(root);
        }
        level.residual_energy = 0.0;
        rec.levels.push_back(std::move(level));
    }
    return rec;
}

CompressedStream encode_session(const std::vector<WindowPayload>& windows,
                                const SessionMeta& meta) {
    if (windows.empty()) throw InvalidInput("cannot encode an empty session");

    // Session-wide symbol histogram over the coded windows.
    std::map<std::int32_t, std::uint64_t> freq;
    for (const WindowPayload& w : windows) {
        if (w.raw) continue;
        std::vector<std::int32_t> symbols;
        append_symbols(w.record, symbols);
        for (std::int32_t s : symbols) ++freq[s];
    }
    if (freq.size() > kMaxAlphabet) throw EncoderError("symbol alphabet exceeds 65535 entries");

    const auto lengths = build_code_lengths(freq);
    std::vector<std::pair<std::int32_t, std::uint8_t>> table(lengths.begin(), lengths.end());
    const CanonicalCode code = table.empty() ? CanonicalCode{} : make_canonical(table);

    CompressedStream stream;
    stream.header.version = 1;
    stream.header.window_len = meta.window_len;
    stream.header.sample_rate = meta.sample_rate;
    stream.header.n_levels = meta.n_levels;
    stream.header.window_count = static_cast<std::uint32_t>(windows.size());
    stream.header.scale_c = 1;
    stream.header.scale_ar = 100;

    std::vector<std::uint8_t>& out = stream.bytes;
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(stream.header.version);
    put_u16(out, stream.header.window_len);
    put_u16(out, stream.header.sample_rate);
    out.push_back(stream.header.n_levels);
    put_u32(out, stream.header.window_count);
    put_u16(out, stream.header.scale_c);
    put_u16(out, stream.header.scale_ar);
    put_u16(out, static_cast<std::uint16_t>(table.size()));
    for (const auto& [symbol, length] : table) {
        put_i32(out, symbol);
        out.push_back(length);
    }

    BitWriter writer;
    for (const WindowPayload& w : windows) {
        writer.put_bit(w.raw ? 1 : 0);
        if (w.raw) {
            if (w.raw_samples.size() != meta.window_len) {
                throw EncoderError("raw window length does not match the header");
            }
            for (std::int16_t s : w.raw_samples) {
                writer.put_bits(static_cast<std::uint16_t>(s), 16);
            }
            continue;
        }
        std::vector<std::int32_t> symbols;
        append_symbols(w.record, symbols);
        for (std::int32_t s : symbols) {
            const auto it = code.codes.find(s);
            if (it == code.codes.end()) throw EncoderError("symbol missing from code table");
            writer.put_bits(it->second.first, it->second.second);
        }
    }
    const std::vector<std::uint8_t> payload = writer.finish();
    out.insert(out.end(), payload.begin(), payload.end());
    return stream;
}

std::vector<WindowPayload> decode_session(std::span<const std::uint8_t> bytes,
                                          StreamHeader* header_out) {
    if (bytes.size() < 4 || bytes[0] != 'B' || bytes[1] != 'U' || bytes[2] != 'A' ||
        bytes[3] != 'F') {
        throw CorruptStream("bad magic", 0);
    }
    ByteReader reader(bytes.subspan(4));
    StreamHeader header;
    header.version = reader.u8();
    if (header.version != 1) throw CorruptStream("unsupported version", 4);
    header.window_len = reader.u16();
    header.sample_rate = reader.u16();
    header.n_levels = reader.u8();
    header.window_count = reader.u32();
    header.scale_c = reader.u16();
    header.scale_ar = reader.u16();
    if (header.window_len < 8) throw CorruptStream("window length too small", 4);
    if (header.scale_c != 1 || header.scale_ar != 100) {
        throw CorruptStream("unsupported scale factors", 4);
    }
    const std::uint16_t table_size = reader.u16();
    std::vector<std::pair<std::int32_t, std::uint8_t>> table;
    table.reserve(table_size);
    for (std::uint16_t i = 0; i < table_size; ++i) {
        const std::int32_t symbol = reader.i32();
        const std::uint8_t length = reader.u8();
        if (length == 0) throw CorruptStream("zero code length", 4 + reader.position());
        table.emplace_back(symbol, length);
    }
    const CanonicalCode code = table.empty() ? CanonicalCode{} : make_canonical(table);
    const std::size_t payload_offset = 4 + reader.position();

    BitReader bits(bytes.subspan(payload_offset), payload_offset);
    std::vector<WindowPayload> windows;
    windows.reserve(header.window_count);
    for (std::uint32_t w = 0; w < header.window_count; ++w) {
        WindowPayload payload;
        payload.raw = bits.get_bit() != 0;
        if (payload.raw) {
            payload.raw_samples.resize(header.window_len);
            for (std::size_t t = 0; t < header.window_len; ++t) {
                payload.raw_samples[t] =
                    static_cast<std::int16_t>(static_cast<std::uint16_t>(bits.get_bits(16)));
            }
            windows.push_back(std::move(payload));
            continue;
        }
        QuantizedRecord rec;
        rec.c0 = decode_symbol(bits, code);
        const std::int32_t level_count = decode_symbol(bits, code);
        if (level_count < 0 || level_count > 64) {
            throw CorruptStream("implausible level count", bits.byte_offset());
        }
        for (std::int32_t n = 0; n < level_count; ++n) {
            QuantizedLevel level;
            level.c.first = decode_symbol(bits, code);
            level.c.second = decode_symbol(bits, code);
            level.a.first = decode_symbol(bits, code);
            level.a.second = decode_symbol(bits, code);
            const std::int32_t root_count = decode_symbol(bits, code);
            if (root_count < 0 || root_count > 64) {
                throw CorruptStream("implausible root count", bits.byte_offset());
            }
            for (std::int32_t j = 0; j < root_count; ++j) {
                const std::int32_t re = decode_symbol(bits, code);
                const std::int32_t im = decode_symbol(bits, code);
                level.roots.emplace_back(re, im);
            }
            rec.levels.push_back(std::move(level));
        }
        payload.record = std::move(rec);
        windows.push_back(std::move(payload));
    }
    if (header_out) *header_out = header;
    return windows;
}

CompressedStream huffman_encode(const std::vector<QuantizedRecord>& records,
                                const SessionMeta& meta) {
    if (records.empty()) throw InvalidInput("cannot encode an empty record list");
    std::vector<WindowPayload> windows;
    windows.reserve(records.size());
    for (const QuantizedRecord& rec : records) {
        WindowPayload w;
        w.record = rec;
        windows.push_back(std::move(w));
    }
    return encode_session(windows, meta);
}

std::vector<QuantizedRecord> huffman_decode(const CompressedStream& stream) {
    std::vector<WindowPayload> windows = decode_session(stream.bytes);
    std::vector<QuantizedRecord> records;
    records.reserve(windows.size());
    for (WindowPayload& w : windows) {
        if (w.raw) throw CorruptStream("raw window in a coded-only stream", 0);
        records.push_back(std::move(w.record));
    }
    return records;
}

std::vector<Complex> partial_sum_boundary(const std::vector<LevelResult>& levels,
                                          std::size_t length) {
    const auto nodes = unit_circle_nodes(length);
    std::vector<Complex> sum(length, Complex{0.0, 0.0});
    std::vector<Complex> cumulative_inner(length, Complex{1.0, 0.0});
    std::vector<Complex> blaschke_tail(length, Complex{1.0, 0.0});
    for (const LevelResult& level : levels) {
        for (const Complex& root : level.roots) {
            for (std::size_t k = 0; k < length; ++k) {
                cumulative_inner[k] *= eval_blaschke_factor(root, nodes[k]);
            }
        }
        for (std::size_t k = 0; k < length; ++k) {
            const Complex basis = eval_evaluator(level.a, nodes[k]) * blaschke_tail[k];
            sum[k] += level.c * cumulative_inner[k] * basis;
            blaschke_tail[k] *= eval_blaschke_factor(level.a, nodes[k]);
        }
    }
    return sum;
}

RealFrame reconstruct(const QuantizedRecord& q, std::size_t window_len, double sample_rate_hz) {
    const DecompositionRecord rec = dequantize(q, window_len);
    return reconstruct_exact(rec, sample_rate_hz);
}

RealFrame reconstruct_exact(const DecompositionRecord& rec, double sample_rate_hz) {
    const std::vector<Complex> sum = partial_sum_boundary(rec.levels, rec.window_len);
    std::vector<double> samples(rec.window_len);
    for (std::size_t t = 0; t < rec.window_len; ++t) {
        samples[t] = 2.0 * sum[t].real() - rec.c0;
    }
    return make_real_frame(std::move(samples), sample_rate_hz);
}

}  // namespace buafd
