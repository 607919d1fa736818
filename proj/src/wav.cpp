#include "tabsync/audio.hpp"
#include "tabsync/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

namespace tabsync {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

bool tag_is(const std::uint8_t* p, const char* tag) {
    return std::memcmp(p, tag, 4) == 0;
}

struct FormatChunk {
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t block_align = 0;
    std::uint16_t bits = 0;
};

FormatChunk parse_fmt(const std::uint8_t* p, std::uint32_t size) {
    if (size < 16) {
        throw FormatError("wav: fmt chunk too small");
    }
    FormatChunk fmt;
    fmt.format = read_u16(p);
    fmt.channels = read_u16(p + 2);
    fmt.sample_rate = read_u32(p + 4);
    fmt.block_align = read_u16(p + 12);
    fmt.bits = read_u16(p + 14);
    if (fmt.format == kFormatExtensible) {
        // cbSize(2) validBits(2) channelMask(4) then the subformat GUID,
        // whose first two bytes carry the real format code.
        if (size < 40) {
            throw FormatError("wav: extensible fmt chunk too small");
        }
        fmt.format = read_u16(p + 24);
    }
    if (fmt.channels == 0) {
        throw FormatError("wav: zero channels");
    }
    if (fmt.sample_rate == 0) {
        throw FormatError("wav: zero sample rate");
    }
    return fmt;
}

double decode_sample(const std::uint8_t* p, const FormatChunk& fmt) {
    if (fmt.format == kFormatFloat) {
        float v;
        std::uint32_t bitsv = read_u32(p);
        std::memcpy(&v, &bitsv, sizeof v);
        return std::clamp(static_cast<double>(v), -1.0, 1.0);
    }
    if (fmt.bits == 16) {
        const auto v = static_cast<std::int16_t>(read_u16(p));
        return static_cast<double>(v) / 32768.0;
    }
    // 24-bit: sign-extend through the top byte of an int32.
    const std::int32_t v =
        static_cast<std::int32_t>((static_cast<std::uint32_t>(p[0]) << 8) |
                                  (static_cast<std::uint32_t>(p[1]) << 16) |
                                  (static_cast<std::uint32_t>(p[2]) << 24)) >> 8;
    return static_cast<double>(v) / 8388608.0;
}

} // namespace

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") || !tag_is(bytes.data() + 8, "WAVE")) {
        throw FormatError("wav: missing RIFF/WAVE header");
    }

    std::optional<FormatChunk> fmt;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint8_t* header = bytes.data() + pos;
        const std::uint32_t size = read_u32(header + 4);
        const std::size_t body = pos + 8;
        const std::size_t available = bytes.size() - body;

        if (tag_is(header, "fmt ")) {
            if (size > available) {
                throw TruncationError("wav: fmt chunk extends past end of file");
            }
            fmt = parse_fmt(bytes.data() + body, size);
        } else if (tag_is(header, "data")) {
            if (!fmt) {
                throw FormatError("wav: data chunk before fmt chunk");
            }
            const bool pcm = fmt->format == kFormatPcm && (fmt->bits == 16 || fmt->bits == 24);
            const bool flt = fmt->format == kFormatFloat && fmt->bits == 32;
            if (!pcm && !flt) {
                throw UnsupportedFormatError("wav: unsupported format code " +
                                             std::to_string(fmt->format) + " with " +
                                             std::to_string(fmt->bits) + " bits");
            }
            if (size > available) {
                throw TruncationError("wav: data chunk declares " + std::to_string(size) +
                                      " bytes, " + std::to_string(available) + " present");
            }
            const std::size_t sample_bytes = fmt->bits / 8;
            const std::size_t frame_bytes = sample_bytes * fmt->channels;
            if (size % frame_bytes != 0) {
                throw TruncationError("wav: data chunk ends mid-frame");
            }
            const std::size_t frames = size / frame_bytes;

            AudioBuffer audio;
            audio.sample_rate = static_cast<int>(fmt->sample_rate);
            audio.samples.resize(static_cast<Eigen::Index>(frames));
            const std::uint8_t* p = bytes.data() + body;
            for (std::size_t i = 0; i < frames; ++i) {
                double sum = 0.0;
                for (std::size_t c = 0; c < fmt->channels; ++c) {
                    sum += decode_sample(p, *fmt);
                    p += sample_bytes;
                }
                audio.samples(static_cast<Eigen::Index>(i)) = sum / fmt->channels;
            }
            return audio;
        }
        // Chunks are word aligned.
        pos = body + size + (size & 1u);
    }
    throw FormatError(fmt ? "wav: no data chunk" : "wav: no fmt chunk");
}

std::vector<std::uint8_t> encode_wav_pcm16(const AudioBuffer& audio) {
    const auto frames = static_cast<std::uint32_t>(audio.size());
    const std::uint32_t data_bytes = frames * 2;
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);

    auto put_tag = [&](const char* tag) { out.insert(out.end(), tag, tag + 4); };
    auto put_u16 = [&](std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
    };
    auto put_u32 = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
        }
    };

    const auto rate = static_cast<std::uint32_t>(audio.sample_rate);
    put_tag("RIFF");
    put_u32(36 + data_bytes);
    put_tag("WAVE");
    put_tag("fmt ");
    put_u32(16);
    put_u16(kFormatPcm);
    put_u16(1);
    put_u32(rate);
    put_u32(rate * 2);
    put_u16(2);
    put_u16(16);
    put_tag("data");
    put_u32(data_bytes);
    for (Eigen::Index i = 0; i < audio.size(); ++i) {
        const double s = std::clamp(audio.samples(i), -1.0, 1.0);
        const long q = std::min(std::lround(s * 32768.0), 32767L);
        put_u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
    return out;
}

AudioBuffer read_wav_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::ios_base::failure("cannot open " + path);
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_wav(bytes);
}

void write_wav_file(const std::string& path, const AudioBuffer& audio) {
    const auto bytes = encode_wav_pcm16(audio);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::ios_base::failure("cannot write " + path);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::ios_base::failure("write failed for " + path);
    }
}

AudioBuffer resample_linear(const AudioBuffer& audio, int target_rate) {
    if (target_rate <= 0) {
        throw DomainError("resample_linear: target rate must be positive");
    }
    if (audio.sample_rate == target_rate || audio.size() == 0) {
        AudioBuffer copy = audio;
        copy.sample_rate = target_rate;
        return copy;
    }
    const double ratio = static_cast<double>(audio.sample_rate) / target_rate;
    const auto out_len = static_cast<Eigen::Index>(
        std::floor(static_cast<double>(audio.size() - 1) / ratio)) + 1;

    AudioBuffer out;
    out.sample_rate = target_rate;
    out.samples.resize(out_len);
    for (Eigen::Index i = 0; i < out_len; ++i) {
        const double src = static_cast<double>(i) * ratio;
        const auto lo = static_cast<Eigen::Index>(src);
        const Eigen::Index hi = std::min(lo + 1, audio.size() - 1);
        const double frac = src - static_cast<double>(lo);
        out.samples(i) = audio.samples(lo) + frac * (audio.samples(hi) - audio.samples(lo));
    }
    return out;
}

} // namespace tabsync
