#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "crowdtex/sample.hpp"

namespace crowdtex {

/// Descriptor rows plus the resolved configuration that produced them.
struct DescriptorTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<LabeledSample> rows;

    std::size_t feature_count() const noexcept { return rows.empty() ? 0 : rows.front().features.size(); }
};

// CSV layout:
//   # key=value            (one line per metadata entry)
//   group,label,frame,v0,...,v{K-1}
//   <group>,<0|1>,<frame>,<%.17g values>
void write_descriptor_csv(std::ostream& out, const DescriptorTable& table);
void write_descriptor_csv(const std::filesystem::path& path, const DescriptorTable& table);
DescriptorTable read_descriptor_csv(std::istream& in);

// Binary layout, all integers little-endian:
//   "CTDS" u32 version=1 u32 meta_len meta_bytes("key=value\n"...) u32 value_count
//   repeated: u32 record_len | i64 frame | i32 label | u16 group_len | group | f64 x value_count
void write_descriptor_binary(std::ostream& out, const DescriptorTable& table);
void write_descriptor_binary(const std::filesystem::path& path, const DescriptorTable& table);
DescriptorTable read_descriptor_binary(std::istream& in);

/// Reads either format, detected from the leading bytes.
DescriptorTable read_descriptors(const std::filesystem::path& path);

}  // namespace crowdtex
