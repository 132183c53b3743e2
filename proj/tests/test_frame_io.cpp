#include <doctest.h>

#include <random>

#include "crowdtex/error.hpp"
#include "crowdtex/frame.hpp"
#include "crowdtex/frame_source.hpp"
#include "crowdtex/synth.hpp"
#include "support.hpp"

using namespace crowdtex;

TEST_CASE("quantize level examples") {
    CHECK(quantize_level(0, 32) == 0);
    CHECK(quantize_level(255, 32) == 31);
    CHECK(quantize_level(128, 32) == 16);
    CHECK(quantize_level(255, 256) == 255);
    CHECK(quantize_level(127, 2) == 0);
    CHECK(quantize_level(128, 2) == 1);
}

TEST_CASE("quantization is monotone and surjective for every ng") {
    for (int ng = 2; ng <= 256; ++ng) {
        std::vector<int> hit(ng, 0);
        int prev = 0;
        for (int v = 0; v < 256; ++v) {
            const int level = quantize_level(static_cast<std::uint8_t>(v), ng);
            REQUIRE(level >= prev);
            REQUIRE(level < ng);
            hit[level] = 1;
            prev = level;
        }
        for (int l = 0; l < ng; ++l) REQUIRE(hit[l] == 1);
    }
}

TEST_CASE("quantize keeps dimensions and maps every pixel") {
    std::mt19937_64 gen(3);
    std::vector<std::uint8_t> px(7 * 5);
    for (auto& p : px) p = static_cast<std::uint8_t>(gen());
    const RawFrame raw(7, 5, px);
    const auto q = quantize(raw, 32);
    CHECK(q.width() == 7);
    CHECK(q.height() == 5);
    CHECK(q.ng() == 32);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 7; ++c) CHECK(q.at(r, c) == (raw.at(r, c) * 32) / 256);
    CHECK_THROWS_AS(quantize(raw, 1), std::invalid_argument);
    CHECK_THROWS_AS(quantize(raw, 257), std::invalid_argument);
}

TEST_CASE("frame constructors validate shape and levels") {
    CHECK_THROWS(RawFrame(1, 4, std::vector<std::uint8_t>(4)));
    CHECK_THROWS(RawFrame(3, 3, std::vector<std::uint8_t>(8)));
    CHECK_THROWS(QuantizedFrame(2, 2, 2, {0, 1, 2, 0}));
    CHECK_THROWS(QuantizedFrame(2, 2, 1, {0, 0, 0, 0}));
    CHECK_NOTHROW(QuantizedFrame(2, 2, 2, {0, 1, 1, 0}));
}

TEST_CASE("pgm round trip and header parsing") {
    testing::TempDir dir("pgm");
    std::vector<std::uint8_t> px(12);
    for (int i = 0; i < 12; ++i) px[i] = static_cast<std::uint8_t>(i * 20);
    const RawFrame frame(4, 3, px);
    write_pgm(dir / "a.pgm", frame);
    CHECK(read_pgm(dir / "a.pgm") == frame);

    testing::write_file(dir / "c.pgm", std::string("P5\n# made by hand\n4 3\n# max\n255\n") +
                                           std::string(reinterpret_cast<const char*>(px.data()), 12));
    CHECK(read_pgm(dir / "c.pgm") == frame);
}

TEST_CASE("malformed pgm inputs are rejected") {
    testing::TempDir dir("pgmbad");
    testing::write_file(dir / "p2.pgm", "P2\n2 2\n255\n0 0 0 0\n");
    CHECK_THROWS_AS(read_pgm(dir / "p2.pgm"), FormatError);
    testing::write_file(dir / "max.pgm", "P5\n2 2\n65535\n" + std::string(8, '\0'));
    CHECK_THROWS_AS(read_pgm(dir / "max.pgm"), FormatError);
    testing::write_file(dir / "short.pgm", "P5\n2 2\n255\n" + std::string(3, '\0'));
    CHECK_THROWS_AS(read_pgm(dir / "short.pgm"), FormatError);
    testing::write_file(dir / "dims.pgm", "P5\nx 2\n255\n" + std::string(4, '\0'));
    CHECK_THROWS_AS(read_pgm(dir / "dims.pgm"), FormatError);
    CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), IoError);
}

TEST_CASE("pgm directory plays back in lexicographic order") {
    testing::TempDir dir("pgmdir");
    for (int i = 0; i < 100; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "f%03d.pgm", 99 - i);
        write_pgm(dir / name, RawFrame(3, 2, std::vector<std::uint8_t>(6, static_cast<std::uint8_t>(99 - i))));
    }
    testing::write_file(dir / "notes.txt", "ignored");
    PgmSequenceSource src(dir.path(), 25.0);
    CHECK(src.frame_count() == 100);
    CHECK(src.kind() == SourceKind::PgmSequenceDir);
    for (int i = 0; i < 100; ++i) {
        const auto f = src.next();
        REQUIRE(f.has_value());
        CHECK(f->at(0, 0) == i);
    }
    CHECK_FALSE(src.next().has_value());
}

TEST_CASE("pgm directory with mixed dimensions is an error") {
    testing::TempDir dir("pgmmix");
    write_pgm(dir / "a.pgm", RawFrame(3, 2, std::vector<std::uint8_t>(6, 0)));
    write_pgm(dir / "b.pgm", RawFrame(2, 3, std::vector<std::uint8_t>(6, 0)));
    CHECK_THROWS_AS(PgmSequenceSource(dir.path(), 25.0), FormatError);
    CHECK_THROWS_AS(PgmSequenceSource(dir / "nope", 25.0), IoError);
}

TEST_CASE("raw planar file frame count follows the size") {
    testing::TempDir dir("raw");
    std::string bytes;
    for (int k = 0; k < 5; ++k) bytes += std::string(4 * 3, static_cast<char>(k * 10));
    testing::write_file(dir / "v.raw", bytes);
    RawPlanarSource src(dir / "v.raw", 4, 3, 10.0);
    CHECK(src.frame_count() == 5);
    for (int k = 0; k < 5; ++k) {
        const auto f = src.next();
        REQUIRE(f);
        CHECK(f->width() == 4);
        CHECK(f->at(2, 3) == k * 10);
    }
    CHECK_FALSE(src.next());

    testing::write_file(dir / "bad.raw", bytes + "x");
    CHECK_THROWS_AS(RawPlanarSource(dir / "bad.raw", 4, 3, 10.0), FormatError);
    CHECK_THROWS(RawPlanarSource(dir / "v.raw", 0, 3, 10.0));
}

TEST_CASE("re-reading a source yields identical frames") {
    testing::TempDir dir("reread");
    synth::SynthSpec spec;
    spec.width = 20;
    spec.height = 16;
    spec.frames = 6;
    synth::write_pgm_sequence(spec, dir.path());
    SourceSpec s{SourceKind::PgmSequenceDir, dir.path().string(), 0, 0, 12.0};
    auto a = open_source(s);
    auto b = open_source(s);
    CHECK(a->frame_rate() == 12.0);
    for (int i = 0; i < 6; ++i) CHECK(*a->next() == *b->next());

    auto gen = open_source({SourceKind::Synthetic, synth::format_spec(spec), 0, 0, 0});
    CHECK(gen->frame_count() == 6);
    CHECK(*gen->next() == synth::render(spec, 0));
}

TEST_CASE("source kind names") {
    CHECK(parse_source_kind("pgm-dir") == SourceKind::PgmSequenceDir);
    CHECK(parse_source_kind("raw") == SourceKind::RawPlanarFile);
    CHECK(parse_source_kind("synth") == SourceKind::Synthetic);
    CHECK_THROWS_AS(parse_source_kind("mp4"), ConfigError);
}
