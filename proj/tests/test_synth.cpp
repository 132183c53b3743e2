#include <doctest.h>

#include <set>

#include "crowdtex/error.hpp"
#include "crowdtex/glcm.hpp"
#include "crowdtex/pipeline.hpp"
#include "crowdtex/synth.hpp"
#include "support.hpp"

using namespace crowdtex;
using synth::Kind;
using synth::SynthSpec;

namespace {

double mean_cell_ifu(const SynthSpec& spec) {
    PipelineConfig cfg;
    synth::SyntheticSource src(spec);
    DescriptorPipeline p(cfg, spec.fps);
    double sum = 0;
    int n = 0;
    while (auto f = src.next()) {
        if (!p.push_frame(*f)) continue;
        for (const auto& cell : p.last_summaries())
            for (int k = 0; k < kTextureFeatureCount; ++k) {
                sum += cell[summary_slot(static_cast<TextureFeature>(k), SummaryStat::Ifu)];
                ++n;
            }
    }
    return sum / n;
}

}  // namespace

TEST_CASE("spec text round trip and validation") {
    SynthSpec s;
    s.kind = Kind::MovingSprite;
    s.width = 50;
    s.seed = 123456789012345ULL;
    s.drift_rate = 0.15;
    const auto back = synth::parse_spec(synth::format_spec(s));
    CHECK(synth::format_spec(back) == synth::format_spec(s));
    CHECK(back.seed == s.seed);
    CHECK(back.drift_rate == 0.15);
    CHECK(synth::parse_spec("kind=static;width=10;height=12").height == 12);
    CHECK_THROWS_AS(synth::parse_spec("kind=lava"), ConfigError);
    CHECK_THROWS_AS(synth::parse_spec("width"), ConfigError);
    CHECK_THROWS_AS(synth::parse_spec("colour=red"), ConfigError);
    CHECK_THROWS_AS(synth::parse_spec("kind=moving-sprite;width=8;sprite-size=16"), ConfigError);
    CHECK(synth::class_label(Kind::BurstyFlicker) == 1);
    CHECK(synth::class_label(Kind::SmoothDrift) == 0);
    CHECK(SynthSpec{}.resolved_burst_period() == 11);
}

TEST_CASE("frames are a pure function of spec and index") {
    for (auto kind : {Kind::SmoothDrift, Kind::BurstyFlicker, Kind::Static, Kind::MovingSprite}) {
        SynthSpec s;
        s.kind = kind;
        s.frames = 10;
        synth::SyntheticSource src(s);
        std::vector<RawFrame> seq;
        while (auto f = src.next()) seq.push_back(*f);
        CHECK(seq.size() == 10);
        for (int t = 9; t >= 0; --t) CHECK(synth::render(s, t) == seq[t]);
        s.seed = 2;
        CHECK_FALSE(synth::render(s, 3) == seq[3]);
    }
}

TEST_CASE("static stream differences to zero") {
    SynthSpec s;
    s.kind = Kind::Static;
    const auto spec = PairSpec::of(OrientationSet::Eight, 1);
    auto prev = accumulate(quantize(synth::render(s, 0), 32), spec);
    for (int t = 1; t < 12; ++t) {
        const auto cur = accumulate(quantize(synth::render(s, t), 32), spec);
        CHECK(temporal_diff(cur, prev).total() == 0);
        prev = cur;
    }
}

TEST_CASE("bursty stream changes on isolated frames one period apart") {
    SynthSpec s;
    s.kind = Kind::BurstyFlicker;
    s.frames = 60;
    const int period = s.resolved_burst_period();
    std::vector<int> at;
    for (int t = 1; t < s.frames; ++t)
        if (!(synth::render(s, t) == synth::render(s, t - 1))) at.push_back(t);
    REQUIRE(at.size() >= 5);
    CHECK(at.front() <= period);
    for (std::size_t k = 1; k < at.size(); ++k) CHECK(at[k] - at[k - 1] == period);
}

TEST_CASE("moving sprite difference support lies on the change mask") {
    SynthSpec s;
    s.kind = Kind::MovingSprite;
    s.width = 64;
    s.height = 48;
    s.sprite_speed = 3;
    const int ng = 32;
    const auto offsets = PairSpec::of(OrientationSet::Eight, 2).offsets();
    for (int t = 1; t < 20; ++t) {
        const auto a = quantize(synth::render(s, t - 1), ng);
        const auto b = quantize(synth::render(s, t), ng);
        const auto [r0, c0] = synth::sprite_origin(s, t - 1);
        const auto [r1, c1] = synth::sprite_origin(s, t);
        CHECK(r0 == r1);
        CHECK(c1 == (c0 + 3) % (s.width - s.sprite_size));

        std::set<std::pair<int, int>> allowed;
        for (int r = 0; r < s.height; ++r)
            for (int c = 0; c < s.width; ++c) {
                const bool changed = a.at(r, c) != b.at(r, c);
                if (changed) {
                    // changed pixels are covered or uncovered sprite pixels
                    const bool in0 = r >= r0 && r < r0 + s.sprite_size && c >= c0 && c < c0 + s.sprite_size;
                    const bool in1 = r >= r1 && r < r1 + s.sprite_size && c >= c1 && c < c1 + s.sprite_size;
                    REQUIRE((in0 || in1));
                }
                for (const auto& o : offsets) {
                    const int r2 = r + o.drow, c2 = c + o.dcol;
                    if (r2 < 0 || r2 >= s.height || c2 < 0 || c2 >= s.width) continue;
                    if (changed || a.at(r2, c2) != b.at(r2, c2)) allowed.insert({b.at(r, c), b.at(r2, c2)});
                }
            }
        GlcmCounts ga(ng), gb(ng);
        accumulate_region(a, Region{0, 0, s.height, s.width}, offsets, ga);
        accumulate_region(b, Region{0, 0, s.height, s.width}, offsets, gb);
        const auto d = temporal_diff(gb, ga);
        for (int i = 0; i < ng; ++i)
            for (int j = 0; j < ng; ++j)
                if (d.at(i, j) > 0) REQUIRE(allowed.count({i, j}) == 1);
    }
}

TEST_CASE("smooth drift is more uniform than bursty flicker for every seed") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SynthSpec smooth, bursty;
        smooth.seed = bursty.seed = seed;
        smooth.width = smooth.height = bursty.width = bursty.height = 48;
        smooth.frames = bursty.frames = 30;
        bursty.kind = Kind::BurstyFlicker;
        REQUIRE(mean_cell_ifu(smooth) < mean_cell_ifu(bursty));
    }
}

TEST_CASE("pgm materialization") {
    testing::TempDir dir("synth");
    SynthSpec s;
    s.frames = 5;
    synth::write_pgm_sequence(s, dir / "seq");
    PgmSequenceSource src(dir / "seq", s.fps);
    CHECK(src.frame_count() == 5);
    for (int t = 0; t < 5; ++t) CHECK(*src.next() == synth::render(s, t));
}
