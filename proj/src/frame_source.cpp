#include "crowdtex/frame_source.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

#include "crowdtex/error.hpp"
#include "crowdtex/synth.hpp"

namespace crowdtex {

namespace fs = std::filesystem;

const char* to_string(SourceKind kind) noexcept {
    switch (kind) {
        case SourceKind::PgmSequenceDir: return "pgm-dir";
        case SourceKind::RawPlanarFile: return "raw";
        case SourceKind::Synthetic: return "synth";
    }
    return "unknown";
}

SourceKind parse_source_kind(const std::string& text) {
    if (text == "pgm-dir" || text == "pgm") return SourceKind::PgmSequenceDir;
    if (text == "raw") return SourceKind::RawPlanarFile;
    if (text == "synth") return SourceKind::Synthetic;
    throw ConfigError("unknown source format '" + text + "' (expected pgm-dir, raw or synth)");
}

namespace {

struct PgmHeader {
    int width = 0;
    int height = 0;
    std::streamoff data_offset = 0;
};

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in, const fs::path& path) {
    std::string token;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c) && c != '#') {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (token.empty()) throw FormatError(path.string() + ": truncated PGM header");
    // The single whitespace byte after maxval has been consumed by get().
    if (c == '#') in.unget();
    return token;
}

int parse_positive(const std::string& token, const fs::path& path, const char* what) {
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](unsigned char ch) {
            return std::isdigit(ch) != 0;
        }))
        throw FormatError(path.string() + ": malformed PGM " + what + " '" + token + "'");
    if (token.size() > 9) throw FormatError(path.string() + ": PGM " + what + " too large");
    return std::stoi(token);
}

PgmHeader read_pgm_header(std::istream& in, const fs::path& path) {
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        throw FormatError(path.string() + ": not a binary PGM (missing P5 magic)");
    PgmHeader header;
    header.width = parse_positive(next_token(in, path), path, "width");
    header.height = parse_positive(next_token(in, path), path, "height");
    const int maxval = parse_positive(next_token(in, path), path, "maxval");
    if (maxval != 255)
        throw FormatError(path.string() + ": only 8-bit PGM (maxval 255) is supported, got " +
                          std::to_string(maxval));
    if (header.width < 2 || header.height < 2)
        throw FormatError(path.string() + ": PGM dimensions must be at least 2x2");
    header.data_offset = in.tellg();
    return header;
}

std::ifstream open_binary(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

}  // namespace

RawFrame read_pgm(const fs::path& path) {
    auto in = open_binary(path);
    const auto header = read_pgm_header(in, path);
    std::vector<std::uint8_t> pixels(static_cast<std::size_t>(header.width) * header.height);
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(pixels.size()))
        throw FormatError(path.string() + ": PGM pixel data truncated");
    return RawFrame(header.width, header.height, std::move(pixels));
}

void write_pgm(const fs::path& path, const RawFrame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
    const auto px = frame.pixels();
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

PgmSequenceSource::PgmSequenceSource(const fs::path& dir, double fps) : fps_(fps) {
    if (!(fps > 0)) throw ConfigError("frame rate must be positive");
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            files_.push_back(entry.path());
    }
    std::sort(files_.begin(), files_.end());
    for (const auto& file : files_) {
        auto in = open_binary(file);
        const auto header = read_pgm_header(in, file);
        if (width_ == 0) {
            width_ = header.width;
            height_ = header.height;
        } else if (header.width != width_ || header.height != height_) {
            throw FormatError(file.string() + ": dimension mismatch within sequence (" +
                              std::to_string(header.width) + "x" + std::to_string(header.height) +
                              " vs " + std::to_string(width_) + "x" + std::to_string(height_) + ")");
        }
    }
}

std::optional<RawFrame> PgmSequenceSource::next() {
    if (cursor_ >= files_.size()) return std::nullopt;
    return read_pgm(files_[cursor_++]);
}

RawPlanarSource::RawPlanarSource(const fs::path& file, int width, int height, double fps)
    : file_(file), width_(width), height_(height), fps_(fps) {
    if (width < 2 || height < 2)
        throw ConfigError("raw planar input needs width and height of at least 2");
    if (!(fps > 0)) throw ConfigError("frame rate must be positive");
    std::error_code ec;
    const auto size = fs::file_size(file, ec);
    if (ec) throw IoError("cannot stat " + file.string() + ": " + ec.message());
    const auto frame_bytes = static_cast<std::uintmax_t>(width) * static_cast<std::uintmax_t>(height);
    if (size % frame_bytes != 0)
        throw FormatError(file.string() + ": size " + std::to_string(size) +
                          " is not a multiple of the frame size " + std::to_string(frame_bytes));
    count_ = static_cast<std::int64_t>(size / frame_bytes);
    in_ = open_binary(file);
}

std::optional<RawFrame> RawPlanarSource::next() {
    if (cursor_ >= count_) return std::nullopt;
    const auto frame_bytes = static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    std::vector<std::uint8_t> pixels(frame_bytes);
    in_.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(frame_bytes));
    if (in_.gcount() != static_cast<std::streamsize>(frame_bytes))
        throw IoError(file_.string() + ": short read at frame " + std::to_string(cursor_));
    ++cursor_;
    return RawFrame(width_, height_, std::move(pixels));
}

std::unique_ptr<FrameSource> open_source(const SourceSpec& spec) {
    switch (spec.kind) {
        case SourceKind::PgmSequenceDir:
            return std::make_unique<PgmSequenceSource>(spec.location, spec.fps);
        case SourceKind::RawPlanarFile:
            return std::make_unique<RawPlanarSource>(spec.location, spec.width, spec.height,
                                                     spec.fps);
        case SourceKind::Synthetic:
            return std::make_unique<synth::SyntheticSource>(synth::parse_spec(spec.location));
    }
    throw ConfigError("unsupported source kind");
}

}  // namespace crowdtex
