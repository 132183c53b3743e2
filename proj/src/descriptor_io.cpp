#include "crowdtex/descriptor_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "byte_io.hpp"
#include "crowdtex/error.hpp"

namespace crowdtex {

namespace {

constexpr char kBinaryMagic[4] = {'C', 'T', 'D', 'S'};
constexpr std::uint32_t kBinaryVersion = 1;

void check_rows(const DescriptorTable& table) {
    const std::size_t k = table.feature_count();
    for (const auto& row : table.rows) {
        if (row.features.size() != k) throw std::invalid_argument("descriptor rows differ in length");
        if (row.group.empty()) throw std::invalid_argument("descriptor row has an empty group id");
        if (row.group.find_first_of(",\n\r") != std::string::npos)
            throw std::invalid_argument("group id may not contain commas or newlines: " + row.group);
    }
}

void append_double(std::string& line, double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    line.append(buf, static_cast<std::size_t>(n));
}

template <typename T>
T parse_number(const std::string& token, std::size_t line_no) {
    T value{};
    const auto* last = token.data() + token.size();
    const auto res = std::from_chars(token.data(), last, value);
    if (token.empty() || res.ec != std::errc{} || res.ptr != last)
        throw FormatError("line " + std::to_string(line_no) + ": bad number '" + token + "'");
    return value;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

}  // namespace

void write_descriptor_csv(std::ostream& out, const DescriptorTable& table) {
    check_rows(table);
    for (const auto& [key, value] : table.metadata) out << "# " << key << '=' << value << '\n';
    std::string line = "group,label,frame";
    for (std::size_t k = 0; k < table.feature_count(); ++k) line += ",v" + std::to_string(k);
    out << line << '\n';
    for (const auto& row : table.rows) {
        line = row.group;
        line += ',' + std::to_string(row.label) + ',' + std::to_string(row.frame_index);
        for (double v : row.features) {
            line += ',';
            append_double(line, v);
        }
        out << line << '\n';
    }
    if (!out) throw IoError("descriptor CSV write failed");
}

void write_descriptor_csv(const std::filesystem::path& path, const DescriptorTable& table) {
    auto out = open_out(path);
    write_descriptor_csv(out, table);
}

DescriptorTable read_descriptor_csv(std::istream& in) {
    DescriptorTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) table.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!header_seen) {
            if (fields.size() < 3 || fields[0] != "group" || fields[1] != "label" || fields[2] != "frame")
                throw FormatError("descriptor CSV header must start with group,label,frame");
            header_seen = true;
            columns = fields.size();
            continue;
        }
        if (fields.size() != columns)
            throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                              " columns, found " + std::to_string(fields.size()));
        LabeledSample row;
        row.group = fields[0];
        row.label = parse_number<int>(fields[1], line_no);
        if (row.label != 0 && row.label != 1)
            throw FormatError("line " + std::to_string(line_no) + ": label must be 0 or 1");
        row.frame_index = parse_number<std::int64_t>(fields[2], line_no);
        row.features.reserve(columns - 3);
        for (std::size_t k = 3; k < columns; ++k) row.features.push_back(parse_number<double>(fields[k], line_no));
        table.rows.push_back(std::move(row));
    }
    if (!header_seen) throw FormatError("descriptor CSV has no header");
    return table;
}

void write_descriptor_binary(std::ostream& out, const DescriptorTable& table) {
    using detail::put_le;
    check_rows(table);
    std::string buf(kBinaryMagic, sizeof kBinaryMagic);
    put_le<std::uint32_t>(buf, kBinaryVersion);
    std::string meta;
    for (const auto& [key, value] : table.metadata) meta += key + '=' + value + '\n';
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(meta.size()));
    buf += meta;
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(table.feature_count()));
    for (const auto& row : table.rows) {
        std::string rec;
        put_le<std::int64_t>(rec, row.frame_index);
        put_le<std::int32_t>(rec, row.label);
        put_le<std::uint16_t>(rec, static_cast<std::uint16_t>(row.group.size()));
        rec += row.group;
        for (double v : row.features) put_le<double>(rec, v);
        put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(rec.size()));
        buf += rec;
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("descriptor binary write failed");
}

void write_descriptor_binary(const std::filesystem::path& path, const DescriptorTable& table) {
    auto out = open_out(path);
    write_descriptor_binary(out, table);
}

DescriptorTable read_descriptor_binary(std::istream& in) {
    const std::string payload = detail::slurp(in);
    detail::ByteReader reader(payload.data(), payload.size());
    if (reader.get_bytes(4) != std::string(kBinaryMagic, 4)) throw FormatError("not a descriptor binary file");
    const auto version = reader.get<std::uint32_t>();
    if (version != kBinaryVersion)
        throw FormatError("descriptor binary version " + std::to_string(version) + " not supported (expected " +
                          std::to_string(kBinaryVersion) + ")");
    DescriptorTable table;
    const auto meta_len = reader.get<std::uint32_t>();
    std::stringstream meta(reader.get_bytes(meta_len));
    std::string line;
    while (std::getline(meta, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) table.metadata.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    const auto value_count = reader.get<std::uint32_t>();
    while (reader.remaining() > 0) {
        const auto rec_len = reader.get<std::uint32_t>();
        const auto start = reader.position();
        LabeledSample row;
        row.frame_index = reader.get<std::int64_t>();
        row.label = reader.get<std::int32_t>();
        row.group = reader.get_bytes(reader.get<std::uint16_t>());
        row.features.resize(value_count);
        for (auto& v : row.features) v = reader.get<double>();
        if (reader.position() - start != rec_len) throw FormatError("descriptor record length mismatch");
        table.rows.push_back(std::move(row));
    }
    return table;
}

DescriptorTable read_descriptors(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char head[4] = {0, 0, 0, 0};
    in.read(head, 4);
    in.clear();
    in.seekg(0);
    if (std::string(head, 4) == std::string(kBinaryMagic, 4)) return read_descriptor_binary(in);
    return read_descriptor_csv(in);
}

}  // namespace crowdtex
