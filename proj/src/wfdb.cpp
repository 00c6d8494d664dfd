#include "buafd/wfdb.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "buafd/errors.hpp"

namespace buafd {

namespace {

std::int16_t sign_extend_12(std::uint16_t v) {
    return static_cast<std::int16_t>((v & 0x800) ? (v | 0xF000) : v);
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

// MIT annotation codes regarded as beats for sanity counting.
bool is_beat_code(int code) {
    static const std::array<int, 17> beat_codes = {1, 2,  3,  4,  5,  6,  7,  8, 9,
                                                   10, 11, 12, 13, 25, 34, 35, 38};
    for (int c : beat_codes) {
        if (code == c) return true;
    }
    return false;
}

// Standard MIT .atr layout: 2-byte little-endian words, top 6 bits the code,
// low 10 bits the interval to the previous annotation. Codes 59-63 are
// pseudo-annotations (SKIP, NUM, SUB, CHN, AUX).
std::vector<std::pair<std::size_t, int>> parse_annotations(
    const std::vector<std::uint8_t>& bytes) {
    std::vector<std::pair<std::size_t, int>> beats;
    std::size_t pos = 0;
    long long time = 0;
    while (pos + 1 < bytes.size()) {
        const std::uint16_t word =
            static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
        pos += 2;
        const int code = word >> 10;
        const int interval = word & 0x3FF;
        if (code == 0 && interval == 0) break;  // end of file
        if (code == 59) {                       // SKIP: 4-byte interval follows
            if (pos + 3 >= bytes.size()) break;
            const std::uint32_t hi =
                static_cast<std::uint32_t>(bytes[pos] | (bytes[pos + 1] << 8));
            const std::uint32_t lo =
                static_cast<std::uint32_t>(bytes[pos + 2] | (bytes[pos + 3] << 8));
            time += static_cast<std::int32_t>((hi << 16) | lo);
            pos += 4;
            continue;
        }
        if (code == 63) {  // AUX: skip the payload, padded to even length
            pos += static_cast<std::size_t>(interval + (interval & 1));
            continue;
        }
        if (code == 60 || code == 61 || code == 62) continue;  // NUM/SUB/CHN
        time += interval;
        if (is_beat_code(code)) beats.emplace_back(static_cast<std::size_t>(time), code);
    }
    return beats;
}

}  // namespace

EcgRecord parse_wfdb_212(const std::string& header_text,
                         const std::vector<std::uint8_t>& dat) {
    std::istringstream in(header_text);
    std::string line;
    // First non-comment line: record name, signal count, [fs, [samples]].
    do {
        if (!std::getline(in, line)) throw FormatError("empty header");
    } while (!line.empty() && line[0] == '#');
    auto tokens = split_tokens(line);
    if (tokens.size() < 2) throw FormatError("malformed header record line");

    EcgRecord record;
    record.record_id = tokens[0];
    const int n_signals = std::stoi(tokens[1]);
    if (n_signals != 2) throw FormatError("expected exactly 2 signals");
    record.fs = tokens.size() > 2 ? std::stod(tokens[2]) : 360.0;
    long long declared_samples = tokens.size() > 3 ? std::stoll(tokens[3]) : -1;

    for (int s = 0; s < n_signals; ++s) {
        do {
            if (!std::getline(in, line)) throw FormatError("missing signal line");
        } while (!line.empty() && line[0] == '#');
        auto sig = split_tokens(line);
        if (sig.size() < 2) throw FormatError("malformed signal line");
        // Format token may carry xN/ :N suffixes; the base must be 212.
        const std::string& fmt = sig[1];
        std::size_t digits = 0;
        while (digits < fmt.size() && std::isdigit(static_cast<unsigned char>(fmt[digits]))) {
            ++digits;
        }
        if (fmt.substr(0, digits) != "212") {
            throw FormatError("unsupported signal format '" + fmt + "', only 212 is handled");
        }
        if (sig.size() > 3) record.adc_resolution_bits = std::stoi(sig[3]);
    }

    if (dat.size() % 3 != 0) throw FormatError("dat length is not a multiple of 3");
    const std::size_t n_samples = dat.size() / 3;
    if (declared_samples >= 0 && static_cast<std::size_t>(declared_samples) != n_samples) {
        throw FormatError("header sample count disagrees with dat payload");
    }

    record.channels[0].reserve(n_samples);
    record.channels[1].reserve(n_samples);
    for (std::size_t i = 0; i < dat.size(); i += 3) {
        const std::uint8_t b0 = dat[i], b1 = dat[i + 1], b2 = dat[i + 2];
        const std::uint16_t s0 = static_cast<std::uint16_t>(((b1 & 0x0F) << 8) | b0);
        const std::uint16_t s1 = static_cast<std::uint16_t>(((b1 & 0xF0) << 4) | b2);
        record.channels[0].push_back(sign_extend_12(s0));
        record.channels[1].push_back(sign_extend_12(s1));
    }
    return record;
}

std::string make_header_text(const EcgRecord& record) {
    std::ostringstream out;
    out << record.record_id << " 2 " << record.fs << " " << record.channels[0].size() << "\n";
    for (int s = 0; s < 2; ++s) {
        out << record.record_id << ".dat 212 200 " << record.adc_resolution_bits
            << " 1024 0 0 0 ch" << s << "\n";
    }
    return out.str();
}

std::vector<std::uint8_t> encode_wfdb_212(const EcgRecord& record) {
    if (record.channels[0].size() != record.channels[1].size()) {
        throw InvalidInput("channel lengths differ");
    }
    std::vector<std::uint8_t> out;
    out.reserve(record.channels[0].size() * 3);
    for (std::size_t i = 0; i < record.channels[0].size(); ++i) {
        const std::uint16_t s0 = static_cast<std::uint16_t>(record.channels[0][i]) & 0xFFF;
        const std::uint16_t s1 = static_cast<std::uint16_t>(record.channels[1][i]) & 0xFFF;
        out.push_back(static_cast<std::uint8_t>(s0 & 0xFF));
        out.push_back(static_cast<std::uint8_t>(((s0 >> 8) & 0x0F) | ((s1 >> 4) & 0xF0)));
        out.push_back(static_cast<std::uint8_t>(s1 & 0xFF));
    }
    return out;
}

EcgRecord read_record(const std::string& path_stem) {
    std::ifstream hea(path_stem + ".hea");
    if (!hea) throw FormatError("cannot open " + path_stem + ".hea");
    std::stringstream header;
    header << hea.rdbuf();
    const std::vector<std::uint8_t> dat = read_binary_file(path_stem + ".dat");
    EcgRecord record = parse_wfdb_212(header.str(), dat);

    std::ifstream atr(path_stem + ".atr", std::ios::binary);
    if (atr) {
        std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(atr)),
                                        std::istreambuf_iterator<char>());
        record.annotations = parse_annotations(bytes);
    }
    return record;
}

Windowing window(const EcgRecord& record, std::size_t window_len) {
    if (window_len < 8) throw InvalidInput("window length must be at least 8");
    Windowing out;
    const auto& channel = record.channels[0];
    const std::size_t count = channel.size() / window_len;
    out.dropped_samples = channel.size() - count * window_len;
    out.frames.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        std::vector<double> samples(window_len);
        for (std::size_t t = 0; t < window_len; ++t) {
            samples[t] = static_cast<double>(channel[w * window_len + t]);
        }
        out.frames.push_back(make_real_frame(std::move(samples), record.fs));
    }
    return out;
}

}  // namespace buafd
