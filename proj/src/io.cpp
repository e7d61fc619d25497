#include "blowup/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

namespace blowup {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

namespace {

double parse_double(std::string_view text, const std::string& context) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw ConfigError("cannot parse number '" + std::string(text) + "' in " + context);
    return value;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string() + " for reading");
    return in;
}

void read_two_column_csv(const std::filesystem::path& path, const std::string& expected_header,
                         std::vector<double>& col_a, std::vector<double>& col_b) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw ConfigError(path.string() + ": expected header '" + expected_header + "', got '" +
                          line + "'");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError(path.string() + ": missing comma on line " + std::to_string(line_no));
        const std::string ctx = path.string() + ":" + std::to_string(line_no);
        col_a.push_back(parse_double(std::string_view(line).substr(0, comma), ctx));
        col_b.push_back(parse_double(std::string_view(line).substr(comma + 1), ctx));
    }
}

}  // namespace

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& series) {
    auto out = open_out(path);
    out << "t,f_origin\n";
    for (std::size_t k = 0; k < series.times.size(); ++k)
        out << format_double(series.times[k]) << ',' << format_double(series.f_origin[k]) << '\n';
}

TimeSeries read_timeseries_csv(const std::filesystem::path& path) {
    TimeSeries series;
    read_two_column_csv(path, "t,f_origin", series.times, series.f_origin);
    if (series.times.empty()) throw ConfigError(path.string() + " holds no samples");
    return series;
}

void write_profile_csv(const std::filesystem::path& path, const RadialField& field) {
    auto out = open_out(path);
    out << "r,f\n";
    for (int i = 0; i < field.grid.n_points; ++i)
        out << format_double(field.grid.radius(i)) << ','
            << format_double(field.values[static_cast<std::size_t>(i)]) << '\n';
}

RadialField read_profile_csv(const std::filesystem::path& path) {
    std::vector<double> rs, fs;
    read_two_column_csv(path, "r,f", rs, fs);
    if (rs.size() < 4) throw ConfigError(path.string() + " holds fewer than 4 profile points");
    if (rs.front() != 0.0) throw ConfigError(path.string() + " must start at r = 0");
    const double dr = rs[1] - rs[0];
    for (std::size_t i = 1; i < rs.size(); ++i) {
        const double expected = static_cast<double>(i) * dr;
        if (std::abs(rs[i] - expected) > 1e-9 * std::max(1.0, expected))
            throw ConfigError(path.string() + " is not on a uniform grid");
    }
    RadialField field;
    field.grid = GridSpec::make(dr, rs.back());
    field.values = std::move(fs);
    return field;
}

void write_prediction_csv(const std::filesystem::path& path, const GeodesicTrajectory& curve) {
    auto out = open_out(path);
    out << "t,f\n";
    for (std::size_t k = 0; k < curve.times.size(); ++k)
        out << format_double(curve.times[k]) << ',' << format_double(curve.values[k]) << '\n';
}

GeodesicTrajectory read_prediction_csv(const std::filesystem::path& path) {
    GeodesicTrajectory curve;
    read_two_column_csv(path, "t,f", curve.times, curve.values);
    if (curve.times.empty()) throw ConfigError(path.string() + " holds no samples");
    return curve;
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": empty key");
        out[key] = value;
    }
    return out;
}

namespace {

// FIPS 180-4 SHA-256, single-shot over a memory buffer.
struct Sha256 {
    uint32_t state[8] = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
                         0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
    uint64_t total_bits = 0;
    unsigned char block[64];
    std::size_t block_len = 0;

    static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void process(const unsigned char* p) {
        static constexpr uint32_t K[64] = {
            0x428a2f98u, 0x71374491u, 0xb5c0fbcfu, 0xe9b5dba5u, 0x3956c25bu, 0x59f111f1u,
            0x923f82a4u, 0xab1c5ed5u, 0xd807aa98u, 0x12835b01u, 0x243185beu, 0x550c7dc3u,
            0x72be5d74u, 0x80deb1feu, 0x9bdc06a7u, 0xc19bf174u, 0xe49b69c1u, 0xefbe4786u,
            0x0fc19dc6u, 0x240ca1ccu, 0x2de92c6fu, 0x4a7484aau, 0x5cb0a9dcu, 0x76f988dau,
            0x983e5152u, 0xa831c66du, 0xb00327c8u, 0xbf597fc7u, 0xc6e00bf3u, 0xd5a79147u,
            0x06ca6351u, 0x14292967u, 0x27b70a85u, 0x2e1b2138u, 0x4d2c6dfcu, 0x53380d13u,
            0x650a7354u, 0x766a0abbu, 0x81c2c92eu, 0x92722c85u, 0xa2bfe8a1u, 0xa81a664bu,
            0xc24b8b70u, 0xc76c51a3u, 0xd192e819u, 0xd6990624u, 0xf40e3585u, 0x106aa070u,
            0x19a4c116u, 0x1e376c08u, 0x2748774cu, 0x34b0bcb5u, 0x391c0cb3u, 0x4ed8aa4au,
            0x5b9cca4fu, 0x682e6ff3u, 0x748f82eeu, 0x78a5636fu, 0x84c87814u, 0x8cc70208u,
            0x90befffau, 0xa4506cebu, 0xbef9a3f7u, 0xc67178f2u};
        uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (uint32_t(p[4 * i]) << 24) | (uint32_t(p[4 * i + 1]) << 16) |
                   (uint32_t(p[4 * i + 2]) << 8) | uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        uint32_t a = state[0], b = state[1], c = state[2], d = state[3];
        uint32_t e = state[4], f = state[5], g = state[6], h = state[7];
        for (int i = 0; i < 64; ++i) {
            const uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const uint32_t ch = (e & f) ^ (~e & g);
            const uint32_t t1 = h + S1 + ch + K[i] + w[i];
            const uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const uint32_t t2 = S0 + maj;
            h = g;
            g = f;
            f = e;
            e = d + t1;
            d = c;
            c = b;
            b = a;
            a = t1 + t2;
        }
        state[0] += a;
        state[1] += b;
        state[2] += c;
        state[3] += d;
        state[4] += e;
        state[5] += f;
        state[6] += g;
        state[7] += h;
    }

    void update(const unsigned char* data, std::size_t len) {
        total_bits += uint64_t(len) * 8;
        while (len > 0) {
            const std::size_t take = std::min<std::size_t>(64 - block_len, len);
            std::memcpy(block + block_len, data, take);
            block_len += take;
            data += take;
            len -= take;
            if (block_len == 64) {
                process(block);
                block_len = 0;
            }
        }
    }

    std::string finish() {
        unsigned char pad[72] = {0x80};
        const uint64_t bits = total_bits;
        const std::size_t pad_len = (block_len < 56) ? 56 - block_len : 120 - block_len;
        update(pad, pad_len);
        unsigned char len_bytes[8];
        for (int i = 0; i < 8; ++i) len_bytes[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        update(len_bytes, 8);
        static constexpr char hex[] = "0123456789abcdef";
        std::string out(64, '0');
        for (int i = 0; i < 8; ++i)
            for (int b = 0; b < 4; ++b) {
                const unsigned byte = (state[i] >> (24 - 8 * b)) & 0xff;
                out[std::size_t(8 * i + 2 * b)] = hex[byte >> 4];
                out[std::size_t(8 * i + 2 * b + 1)] = hex[byte & 0xf];
            }
        return out;
    }
};

}  // namespace

std::string sha256_hex(const void* data, std::size_t size) {
    Sha256 h;
    h.update(static_cast<const unsigned char*>(data), size);
    return h.finish();
}

std::string sha256_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    Sha256 h;
    std::array<char, 65536> buf;
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = in.gcount();
        if (got > 0) h.update(reinterpret_cast<const unsigned char*>(buf.data()),
                              static_cast<std::size_t>(got));
    }
    return h.finish();
}

}  // namespace blowup
