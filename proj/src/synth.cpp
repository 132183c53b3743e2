#include "crowdtex/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "crowdtex/error.hpp"
#include "crowdtex/rng.hpp"

namespace crowdtex::synth {

namespace {

// Stream tags keep the hash keys of different random decisions disjoint.
constexpr std::uint64_t kTagTexture = 0x7465787475726531ULL;
constexpr std::uint64_t kTagPixel = 0x706978656c6e6f69ULL;
constexpr std::uint64_t kTagDrift = 0x6472696674626c6bULL;
constexpr std::uint64_t kTagPhase = 0x6275727374706873ULL;
constexpr std::uint64_t kSpriteEpoch = 0xffffffffULL;

std::uint64_t pack(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

// Blocky value noise: a per-block level plus per-pixel grain.
std::uint8_t texture_value(std::uint64_t seed, std::uint64_t epoch, int row, int col) {
    const double block =
        rng::to_unit(rng::hash(seed, kTagTexture, epoch, pack(row / kBlockSize, col / kBlockSize)));
    const double grain = rng::to_unit(rng::hash(seed, kTagPixel, epoch, pack(row, col)));
    const double v = 255.0 * (0.7 * block + 0.3 * grain);
    return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

// Frame at which block (br, bc) was last re-drawn, 0 if never.
std::int64_t drift_epoch(const SynthSpec& spec, std::int64_t index, int br, int bc) {
    for (std::int64_t s = index; s >= 1; --s) {
        if (rng::to_unit(rng::hash(spec.seed, kTagDrift, static_cast<std::uint64_t>(s), pack(br, bc))) <
            spec.drift_rate)
            return s;
    }
    return 0;
}

std::int64_t burst_epoch(const SynthSpec& spec, std::int64_t index) {
    const int period = spec.resolved_burst_period();
    const auto phase = static_cast<std::int64_t>(rng::hash(spec.seed, kTagPhase) % static_cast<std::uint64_t>(period)) + 1;
    if (index < phase) return 0;
    return 1 + (index - phase) / period;
}

}  // namespace

const char* to_string(Kind kind) noexcept {
    switch (kind) {
        case Kind::SmoothDrift: return "smooth-drift";
        case Kind::BurstyFlicker: return "bursty-flicker";
        case Kind::Static: return "static";
        case Kind::MovingSprite: return "moving-sprite";
    }
    return "unknown";
}

Kind parse_kind(const std::string& text) {
    if (text == "smooth-drift") return Kind::SmoothDrift;
    if (text == "bursty-flicker") return Kind::BurstyFlicker;
    if (text == "static") return Kind::Static;
    if (text == "moving-sprite") return Kind::MovingSprite;
    throw ConfigError("unknown synthetic kind '" + text + "'");
}

int class_label(Kind kind) noexcept { return kind == Kind::BurstyFlicker ? 1 : 0; }

int SynthSpec::resolved_burst_period() const noexcept {
    if (burst_period > 0) return burst_period;
    return std::max(2, static_cast<int>(std::lround(fps)) - 1);
}

void SynthSpec::validate() const {
    if (width < 2 || height < 2) throw ConfigError("synthetic frames must be at least 2x2");
    if (frames < 1) throw ConfigError("synthetic stream needs at least one frame");
    if (!(fps > 0)) throw ConfigError("synthetic fps must be positive");
    if (!(drift_rate > 0.0 && drift_rate <= 1.0)) throw ConfigError("drift rate must lie in (0, 1]");
    if (burst_period < 0) throw ConfigError("burst period must be >= 0");
    if (kind == Kind::MovingSprite && (sprite_size < 1 || sprite_size >= width || sprite_size > height))
        throw ConfigError("sprite must fit inside the frame");
}

std::pair<int, int> sprite_origin(const SynthSpec& spec, std::int64_t index) {
    const int travel = spec.width - spec.sprite_size;
    const auto col = static_cast<int>((static_cast<std::int64_t>(spec.sprite_speed) * index) % travel);
    return {(spec.height - spec.sprite_size) / 2, col};
}

RawFrame render(const SynthSpec& spec, std::int64_t index) {
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height));
    auto px = [&](int r, int c) -> std::uint8_t& {
        return pixels[static_cast<std::size_t>(r) * static_cast<std::size_t>(spec.width) + static_cast<std::size_t>(c)];
    };

    switch (spec.kind) {
        case Kind::Static:
        case Kind::MovingSprite:
            for (int r = 0; r < spec.height; ++r)
                for (int c = 0; c < spec.width; ++c) px(r, c) = texture_value(spec.seed, 0, r, c);
            if (spec.kind == Kind::MovingSprite) {
                const auto [row0, col0] = sprite_origin(spec, index);
                for (int r = 0; r < spec.sprite_size; ++r)
                    for (int c = 0; c < spec.sprite_size; ++c)
                        px(row0 + r, col0 + c) = texture_value(spec.seed, kSpriteEpoch, r, c);
            }
            break;
        case Kind::SmoothDrift: {
            const int block_rows = (spec.height + kBlockSize - 1) / kBlockSize;
            const int block_cols = (spec.width + kBlockSize - 1) / kBlockSize;
            for (int br = 0; br < block_rows; ++br) {
                for (int bc = 0; bc < block_cols; ++bc) {
                    const auto epoch = static_cast<std::uint64_t>(drift_epoch(spec, index, br, bc));
                    const int r_end = std::min(spec.height, (br + 1) * kBlockSize);
                    const int c_end = std::min(spec.width, (bc + 1) * kBlockSize);
                    for (int r = br * kBlockSize; r < r_end; ++r)
                        for (int c = bc * kBlockSize; c < c_end; ++c)
                            px(r, c) = texture_value(spec.seed, epoch, r, c);
                }
            }
            break;
        }
        case Kind::BurstyFlicker: {
            const auto epoch = static_cast<std::uint64_t>(burst_epoch(spec, index));
            for (int r = 0; r < spec.height; ++r)
                for (int c = 0; c < spec.width; ++c) px(r, c) = texture_value(spec.seed, epoch, r, c);
            break;
        }
    }
    return RawFrame(spec.width, spec.height, std::move(pixels));
}

SynthSpec parse_spec(const std::string& text) {
    SynthSpec spec;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ';')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("synthetic spec entry '" + item + "' lacks '='");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
            if (key == "kind") spec.kind = parse_kind(value);
            else if (key == "width") spec.width = std::stoi(value);
            else if (key == "height") spec.height = std::stoi(value);
            else if (key == "frames") spec.frames = std::stoi(value);
            else if (key == "fps") spec.fps = std::stod(value);
            else if (key == "seed") spec.seed = std::stoull(value);
            else if (key == "burst-period") spec.burst_period = std::stoi(value);
            else if (key == "drift-rate") spec.drift_rate = std::stod(value);
            else if (key == "sprite-size") spec.sprite_size = std::stoi(value);
            else if (key == "sprite-speed") spec.sprite_speed = std::stoi(value);
            else throw ConfigError("unknown synthetic spec key '" + key + "'");
        } catch (const std::logic_error&) {
            throw ConfigError("bad value '" + value + "' for synthetic spec key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

std::string format_spec(const SynthSpec& spec) {
    auto num = [](double v) {
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    };
    std::ostringstream out;
    out << "kind=" << to_string(spec.kind) << ";width=" << spec.width << ";height=" << spec.height
        << ";frames=" << spec.frames << ";fps=" << num(spec.fps) << ";seed=" << spec.seed
        << ";burst-period=" << spec.burst_period << ";drift-rate=" << num(spec.drift_rate)
        << ";sprite-size=" << spec.sprite_size << ";sprite-speed=" << spec.sprite_speed;
    return out.str();
}

SyntheticSource::SyntheticSource(SynthSpec spec) : spec_(spec) { spec_.validate(); }

std::optional<RawFrame> SyntheticSource::next() {
    if (cursor_ >= spec_.frames) return std::nullopt;
    return render(spec_, cursor_++);
}

void write_pgm_sequence(const SynthSpec& spec, const std::filesystem::path& dir) {
    spec.validate();
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    char name[32];
    for (std::int64_t t = 0; t < spec.frames; ++t) {
        std::snprintf(name, sizeof name, "frame_%05lld.pgm", static_cast<long long>(t));
        write_pgm(dir / name, render(spec, t));
    }
}

}  // namespace crowdtex::synth
