#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "crowdtex/frame_source.hpp"

namespace crowdtex {

/// One labelled video. For synthetic entries `source.location` holds the
/// generator spec string.
struct VideoEntry {
    SourceSpec source;
    int label = 0;
    std::string group;
};

// Manifest CSV:
//   path,label,group,format,width,height,fps
// '#' lines are comments. Relative paths resolve against the manifest's
// directory. width/height may be 0 except for raw input.
std::vector<VideoEntry> read_manifest(const std::filesystem::path& path);
std::vector<VideoEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir);
void write_manifest(const std::filesystem::path& path, const std::vector<VideoEntry>& entries);

}  // namespace crowdtex
