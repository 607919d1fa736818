#include <doctest.h>

#include <cstring>

#include "tabsync/audio.hpp"
#include "tabsync/errors.hpp"

using namespace tabsync;

namespace {

struct WavBuilder {
    std::uint16_t format = 1;
    std::uint16_t channels = 1;
    std::uint32_t rate = 22050;
    std::uint16_t bits = 16;
    std::vector<std::uint8_t> data;
    std::vector<std::uint8_t> extra_chunk;  // inserted between fmt and data
    std::int64_t data_size_override = -1;

    static void u16(std::vector<std::uint8_t>& v, std::uint16_t x) {
        v.push_back(x & 0xFF);
        v.push_back(x >> 8);
    }
    static void u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
        for (int i = 0; i < 4; ++i) v.push_back((x >> (8 * i)) & 0xFF);
    }
    static void tag(std::vector<std::uint8_t>& v, const char* t) { v.insert(v.end(), t, t + 4); }

    std::vector<std::uint8_t> build() const {
        std::vector<std::uint8_t> body;
        tag(body, "WAVE");
        tag(body, "fmt ");
        u32(body, 16);
        u16(body, format);
        u16(body, channels);
        u32(body, rate);
        u32(body, rate * channels * bits / 8);
        u16(body, static_cast<std::uint16_t>(channels * bits / 8));
        u16(body, bits);
        body.insert(body.end(), extra_chunk.begin(), extra_chunk.end());
        tag(body, "data");
        u32(body, data_size_override >= 0 ? static_cast<std::uint32_t>(data_size_override)
                                          : static_cast<std::uint32_t>(data.size()));
        body.insert(body.end(), data.begin(), data.end());
        std::vector<std::uint8_t> out;
        tag(out, "RIFF");
        u32(out, static_cast<std::uint32_t>(body.size()));
        out.insert(out.end(), body.begin(), body.end());
        return out;
    }
};

void push_i16(std::vector<std::uint8_t>& v, std::int16_t s) {
    WavBuilder::u16(v, static_cast<std::uint16_t>(s));
}

} // namespace

TEST_CASE("16-bit PCM scales by 1/32768") {
    WavBuilder w;
    push_i16(w.data, 16384);
    push_i16(w.data, -32768);
    const AudioBuffer a = decode_wav(w.build());
    REQUIRE(a.size() == 2);
    CHECK(a.samples(0) == 0.5);
    CHECK(a.samples(1) == -1.0);
    CHECK(a.sample_rate == 22050);
}

TEST_CASE("stereo frames are averaged to mono") {
    WavBuilder w;
    w.format = 3;
    w.bits = 32;
    w.channels = 2;
    for (float f : {0.2f, 0.6f}) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        WavBuilder::u32(w.data, bits);
    }
    const AudioBuffer a = decode_wav(w.build());
    REQUIRE(a.size() == 1);
    CHECK(a.samples(0) == doctest::Approx(0.4).epsilon(1e-7));
}

TEST_CASE("24-bit PCM sign-extends") {
    WavBuilder w;
    w.bits = 24;
    // -4194304 = -2^22 -> -0.5
    for (std::uint8_t b : {0x00, 0x00, 0xC0, 0x00, 0x00, 0x40}) w.data.push_back(b);
    const AudioBuffer a = decode_wav(w.build());
    REQUIRE(a.size() == 2);
    CHECK(a.samples(0) == -0.5);
    CHECK(a.samples(1) == 0.5);
}

TEST_CASE("unknown chunks are skipped by declared size, including the pad byte") {
    WavBuilder w;
    push_i16(w.data, 8192);
    WavBuilder::tag(w.extra_chunk, "LIST");
    WavBuilder::u32(w.extra_chunk, 3);
    for (int i = 0; i < 4; ++i) w.extra_chunk.push_back(0xAB);  // 3 bytes + pad
    const AudioBuffer a = decode_wav(w.build());
    REQUIRE(a.size() == 1);
    CHECK(a.samples(0) == 0.25);
}

TEST_CASE("error cases") {
    SUBCASE("compression code other than PCM/float") {
        WavBuilder w;
        w.format = 2;  // ADPCM
        push_i16(w.data, 0);
        CHECK_THROWS_AS(decode_wav(w.build()), UnsupportedFormatError);
    }
    SUBCASE("8-bit PCM is unsupported") {
        WavBuilder w;
        w.bits = 8;
        w.data.push_back(0);
        CHECK_THROWS_AS(decode_wav(w.build()), UnsupportedFormatError);
    }
    SUBCASE("malformed header") {
        std::vector<std::uint8_t> junk{'R', 'I', 'F', 'X', 0, 0, 0, 0, 'W', 'A', 'V', 'E'};
        CHECK_THROWS_AS(decode_wav(junk), FormatError);
        CHECK_THROWS_AS(decode_wav(std::vector<std::uint8_t>{}), FormatError);
    }
    SUBCASE("data chunk longer than the file") {
        WavBuilder w;
        push_i16(w.data, 0);
        w.data_size_override = 4000;
        CHECK_THROWS_AS(decode_wav(w.build()), TruncationError);
    }
}

TEST_CASE("encode then decode is within one quantization step") {
    AudioBuffer a;
    a.sample_rate = 44100;
    a.samples = Eigen::ArrayXd::LinSpaced(101, -1.0, 1.0);
    const AudioBuffer b = decode_wav(encode_wav_pcm16(a));
    CHECK(b.sample_rate == 44100);
    REQUIRE(b.size() == a.size());
    CHECK((b.samples - a.samples).abs().maxCoeff() <= 1.0 / 32768.0 + 1e-12);
}

TEST_CASE("linear resampling") {
    AudioBuffer a;
    a.sample_rate = 44100;
    a.samples = Eigen::ArrayXd::LinSpaced(44101, 0.0, 1.0);
    const AudioBuffer b = resample_linear(a, 22050);
    CHECK(b.sample_rate == 22050);
    CHECK(b.size() == 22051);
    for (Eigen::Index i = 0; i < b.size(); i += 997) {
        CHECK(b.samples(i) == doctest::Approx(static_cast<double>(i) / 22050.0));
    }
    CHECK(resample_linear(b, 22050).samples.isApprox(b.samples));
}
