#include "seldkit/wav_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace seldkit {

namespace {

// On-disk ACN slot -> internal channel.
constexpr int kDiskToInternal[4] = {kW, kY, kZ, kX};

std::uint32_t rd_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
}
std::uint16_t rd_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void wr_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}
void wr_u16(std::ostream& os, std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

AmbisonicClip read_wav(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw std::runtime_error("'" + path + "' is not a RIFF/WAVE file");

    std::uint16_t format = 0, num_channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;
    bool have_fmt = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t size = rd_u32(bytes.data() + pos + 4);
        const std::size_t body = pos + 8;
        if (body + size > bytes.size()) throw std::runtime_error("'" + path + "' is truncated");
        if (std::memcmp(id, "fmt ", 4) == 0 && size >= 16) {
            format = rd_u16(bytes.data() + body);
            num_channels = rd_u16(bytes.data() + body + 2);
            sample_rate = rd_u32(bytes.data() + body + 4);
            bits = rd_u16(bytes.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.data() + body;
            data_size = size;
        }
        pos = body + size + (size % 2);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr)
        throw std::runtime_error("'" + path + "': missing fmt or data chunk");
    if (num_channels != 4)
        throw std::runtime_error("expected 4 channels, found " + std::to_string(num_channels));
    if (sample_rate != 24000)
        throw std::runtime_error("expected 24000 Hz sample rate, found " +
                                 std::to_string(sample_rate));

    AmbisonicClip clip;
    clip.sample_rate = 24000;
    if (format == 1 && bits == 16) {
        const std::size_t frames = data_size / (4 * 2);
        for (auto& ch : clip.channels) ch.resize(frames);
        for (std::size_t i = 0; i < frames; ++i)
            for (int c = 0; c < 4; ++c) {
                const auto raw = static_cast<std::int16_t>(rd_u16(data + (i * 4 +
                                 static_cast<std::size_t>(c)) * 2));
                clip.channels[static_cast<std::size_t>(kDiskToInternal[c])][i] =
                    static_cast<float>(raw) / 32768.0f;
            }
    } else if (format == 3 && bits == 32) {
        const std::size_t frames = data_size / (4 * 4);
        for (auto& ch : clip.channels) ch.resize(frames);
        for (std::size_t i = 0; i < frames; ++i)
            for (int c = 0; c < 4; ++c)
                clip.channels[static_cast<std::size_t>(kDiskToInternal[c])][i] =
                    std::bit_cast<float>(rd_u32(data + (i * 4 + static_cast<std::size_t>(c)) * 4));
    } else {
        throw std::runtime_error("unsupported WAV encoding (format " + std::to_string(format) +
                                 ", " + std::to_string(bits) + " bit); expected 16-bit PCM or "
                                 "32-bit float");
    }
    return clip;
}

void write_wav(const std::string& path, const AmbisonicClip& clip) {
    for (int c = 1; c < 4; ++c)
        if (clip.channels[static_cast<std::size_t>(c)].size() != clip.num_samples())
            throw std::invalid_argument("channel lengths differ");

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    const std::uint32_t frames = static_cast<std::uint32_t>(clip.num_samples());
    const std::uint32_t data_size = frames * 4 * 4;
    os.write("RIFF", 4);
    wr_u32(os, 36 + data_size);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    wr_u32(os, 16);
    wr_u16(os, 3);  // IEEE float
    wr_u16(os, 4);
    wr_u32(os, static_cast<std::uint32_t>(clip.sample_rate));
    wr_u32(os, static_cast<std::uint32_t>(clip.sample_rate) * 4 * 4);
    wr_u16(os, 16);
    wr_u16(os, 32);
    os.write("data", 4);
    wr_u32(os, data_size);
    for (std::uint32_t i = 0; i < frames; ++i)
        for (int c = 0; c < 4; ++c)
            wr_u32(os, std::bit_cast<std::uint32_t>(
                           clip.channels[static_cast<std::size_t>(kDiskToInternal[c])][i]));
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace seldkit
