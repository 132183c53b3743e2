#include "crowdtex/manifest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "crowdtex/error.hpp"

namespace crowdtex {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

template <typename T>
T number(const std::string& text, int line_no, const char* what) {
    T out{};
    const auto* last = text.data() + text.size();
    const auto res = std::from_chars(text.data(), last, out);
    if (text.empty() || res.ec != std::errc{} || res.ptr != last)
        throw FormatError("manifest line " + std::to_string(line_no) + ": bad " + what + " '" + text + "'");
    return out;
}

}  // namespace

std::vector<VideoEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
    std::vector<VideoEntry> entries;
    std::string line;
    int line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_csv(line);
        if (!header) {
            if (fields.size() != 7 || fields[0] != "path" || fields[1] != "label" || fields[2] != "group")
                throw FormatError("manifest header must be path,label,group,format,width,height,fps");
            header = true;
            continue;
        }
        if (fields.size() != 7)
            throw FormatError("manifest line " + std::to_string(line_no) + ": expected 7 fields");
        VideoEntry e;
        e.label = number<int>(fields[1], line_no, "label");
        if (e.label != 0 && e.label != 1)
            throw FormatError("manifest line " + std::to_string(line_no) + ": label must be 0 or 1");
        e.group = fields[2];
        if (e.group.empty()) throw FormatError("manifest line " + std::to_string(line_no) + ": empty group id");
        try {
            e.source.kind = parse_source_kind(fields[3]);
        } catch (const ConfigError& err) {
            throw FormatError("manifest line " + std::to_string(line_no) + ": " + err.what());
        }
        e.source.width = number<int>(fields[4], line_no, "width");
        e.source.height = number<int>(fields[5], line_no, "height");
        e.source.fps = number<double>(fields[6], line_no, "fps");
        if (e.source.kind == SourceKind::Synthetic) {
            e.source.location = fields[0];
        } else {
            std::filesystem::path p(fields[0]);
            e.source.location = (p.is_relative() ? base_dir / p : p).string();
        }
        entries.push_back(std::move(e));
    }
    if (!header) throw FormatError("manifest is empty (no header)");
    return entries;
}

std::vector<VideoEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    return parse_manifest(in, path.parent_path());
}

void write_manifest(const std::filesystem::path& path, const std::vector<VideoEntry>& entries) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest " + path.string());
    out << "path,label,group,format,width,height,fps\n";
    char fps[32];
    for (const auto& e : entries) {
        out << e.source.location << ',' << e.label << ',' << e.group << ',' << to_string(e.source.kind) << ','
            << e.source.width << ',' << e.source.height << ',';
        const auto res = std::to_chars(fps, fps + sizeof fps, e.source.fps);
        out.write(fps, res.ptr - fps) << '\n';
    }
    if (!out) throw IoError("manifest write failed for " + path.string());
}

}  // namespace crowdtex
