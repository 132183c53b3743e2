#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "crowdtex/config.hpp"
#include "crowdtex/descriptor_io.hpp"
#include "crowdtex/error.hpp"
#include "crowdtex/manifest.hpp"
#include "support.hpp"

using namespace crowdtex;

namespace {

DescriptorTable sample_table() {
    DescriptorTable t;
    t.metadata = {{"ng", "32"}, {"note", "two words"}};
    t.rows.push_back({{0.0, 1.0 / 3, 1e-300, 0.1}, 0, "video-a", 23});
    t.rows.push_back({{1.0, 0.5, std::nextafter(1.0, 0.0), 0.0}, 1, "video-b", 99});
    return t;
}

}  // namespace

TEST_CASE("descriptor csv round trip is exact") {
    const auto t = sample_table();
    std::stringstream ss;
    write_descriptor_csv(ss, t);
    CHECK(ss.str().rfind("# ng=32\n# note=two words\ngroup,label,frame,v0,v1,v2,v3\n", 0) == 0);
    const auto back = read_descriptor_csv(ss);
    CHECK(back.metadata == t.metadata);
    CHECK(back.rows == t.rows);
}

TEST_CASE("descriptor binary round trip and errors") {
    const auto t = sample_table();
    std::stringstream ss;
    write_descriptor_binary(ss, t);
    const auto bytes = ss.str();
    CHECK(bytes.substr(0, 4) == "CTDS");
    std::stringstream in(bytes);
    const auto back = read_descriptor_binary(in);
    CHECK(back.rows == t.rows);
    CHECK(back.metadata == t.metadata);

    std::stringstream cut(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(read_descriptor_binary(cut), FormatError);

    testing::TempDir dir("desc");
    write_descriptor_binary(dir / "d.bin", t);
    write_descriptor_csv(dir / "d.csv", t);
    CHECK(read_descriptors(dir / "d.bin").rows == t.rows);
    CHECK(read_descriptors(dir / "d.csv").rows == t.rows);
    CHECK_THROWS_AS(read_descriptors(dir / "none.csv"), IoError);
}

TEST_CASE("descriptor csv rejects malformed rows") {
    std::stringstream a("group,label,frame,v0\ng,0,1,0.5,0.7\n");
    CHECK_THROWS_AS(read_descriptor_csv(a), FormatError);
    std::stringstream b("group,label,frame,v0\ng,2,1,0.5\n");
    CHECK_THROWS_AS(read_descriptor_csv(b), FormatError);
    std::stringstream c("group,label,frame,v0\ng,1,1,abc\n");
    CHECK_THROWS_AS(read_descriptor_csv(c), FormatError);
}

TEST_CASE("manifest parsing") {
    std::stringstream in(
        "# comment\n"
        "path,label,group,format,width,height,fps\n"
        "clips/a,0,a,pgm-dir,0,0,25\n"
        "/abs/b.raw,1,b,raw,320,240,30\n"
        "kind=static;width=16,0,c,synth,0,0,12\n");
    const auto m = parse_manifest(in, "/data");
    REQUIRE(m.size() == 3);
    CHECK(m[0].source.location == "/data/clips/a");
    CHECK(m[1].source.location == "/abs/b.raw");
    CHECK(m[1].source.width == 320);
    CHECK(m[1].source.fps == 30.0);
    CHECK(m[1].label == 1);
    CHECK(m[2].source.kind == SourceKind::Synthetic);
    CHECK(m[2].source.location == "kind=static;width=16");

    std::stringstream bad_label("path,label,group,format,width,height,fps\na,3,a,raw,2,2,1\n");
    CHECK_THROWS_AS(parse_manifest(bad_label, "."), FormatError);
    std::stringstream no_group("path,label,group,format,width,height,fps\na,0,,raw,2,2,1\n");
    CHECK_THROWS_AS(parse_manifest(no_group, "."), FormatError);
    std::stringstream header("a,b\n");
    CHECK_THROWS_AS(parse_manifest(header, "."), FormatError);
    std::stringstream only_header("path,label,group,format,width,height,fps\n");
    CHECK(parse_manifest(only_header, ".").empty());

    testing::TempDir dir("manifest");
    write_manifest(dir / "m.csv", m);
    const auto back = read_manifest(dir / "m.csv");
    REQUIRE(back.size() == 3);
    CHECK(back[1].source.location == "/abs/b.raw");
    CHECK(back[2].source.location == m[2].source.location);
}

TEST_CASE("config defaults and overrides") {
    RunConfig c;
    CHECK(c.pipeline.ng == 32);
    CHECK(c.pipeline.pairs.orientations == std::vector<double>{0.0});
    CHECK(c.pipeline.pairs.distance == 1);
    CHECK(c.pipeline.grid.rows == 4);
    CHECK(c.pipeline.grid.cols == 4);
    CHECK(c.pipeline.window == 0);
    CHECK(c.pipeline.histogram.bins == 16);
    CHECK(c.pipeline.histogram.growth == 2.0);
    CHECK(c.pipeline.background_diff);
    CHECK_FALSE(c.pipeline.flip_ifu);
    CHECK(c.trees == 50);
    CHECK(c.repeats == 10);

    apply_setting(c, "grid", "8x2");
    CHECK(c.pipeline.grid.rows == 8);
    CHECK(c.pipeline.grid.cols == 2);
    apply_setting(c, "grid", "3");
    CHECK(c.pipeline.grid.cols == 3);
    apply_setting(c, "orientations", "eight");
    CHECK(c.pipeline.pairs.orientations.size() == 8);
    apply_setting(c, "orientations", "0,90");
    CHECK(c.pipeline.pairs.orientations.size() == 2);
    apply_setting(c, "background_diff", "false");
    CHECK_FALSE(c.pipeline.background_diff);
    apply_setting(c, "window", "fps");
    CHECK(c.pipeline.window == 0);
    CHECK_THROWS_AS(apply_setting(c, "colour", "1"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "ng", "many"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "orientations", "30"), ConfigError);
}

TEST_CASE("describe round-trips through settings") {
    RunConfig c;
    apply_setting(c, "bins", "8");
    apply_setting(c, "growth", "1.5");
    apply_setting(c, "seed", "18446744073709551615");
    apply_setting(c, "orientations", "four");
    apply_setting(c, "ifu-flip", "true");
    std::stringstream text;
    for (const auto& [k, v] : describe(c)) text << k << " = " << v << "  # resolved\n";
    RunConfig back;
    for (const auto& [k, v] : parse_settings(text)) apply_setting(back, k, v);
    CHECK(describe(back) == describe(c));
    CHECK(back.seed == std::numeric_limits<std::uint64_t>::max());
    CHECK(back.pipeline.histogram.growth == 1.5);

    std::stringstream bad("ng 32\n");
    CHECK_THROWS_AS(parse_settings(bad), ConfigError);
}
