#include "semsearch/artifact_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "semsearch/errors.hpp"

namespace semsearch {

void write_artifact_header(std::ostream& out, const ArtifactHeader& header) {
    out << "# semsearch " << header.kind << " v" << header.version << '\n';
    out << "# build " << header.build_id << '\n';
    for (const auto& [key, value] : header.params) out << "# " << key << ' ' << value << '\n';
}

ArtifactHeader read_artifact_header(std::istream& in, const std::string& expected_kind,
                                    int expected_version, const std::string& expected_build_id) {
    ArtifactHeader header;
    std::string line;
    if (!std::getline(in, line))
        throw IoError(expected_kind + ": empty artifact file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream magic(line);
    std::string hash_mark, project, kind, version_token;
    magic >> hash_mark >> project >> kind >> version_token;
    if (hash_mark != "#" || project != "semsearch" || version_token.size() < 2 ||
        version_token[0] != 'v')
        throw IoError(expected_kind + ": not a semsearch artifact: " + line);
    if (kind != expected_kind)
        throw IoError("expected " + expected_kind + " artifact, found " + kind);
    header.kind = kind;
    header.version = std::stoi(version_token.substr(1));
    if (header.version != expected_version)
        throw IoError(expected_kind + ": unsupported version " + version_token);

    while (in.peek() == '#') {
        std::getline(in, line);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream param(line);
        std::string mark, key;
        param >> mark >> key;
        std::string value;
        std::getline(param, value);
        auto start = value.find_first_not_of(' ');
        value = start == std::string::npos ? "" : value.substr(start);
        if (key == "build")
            header.build_id = value;
        else
            header.params.emplace_back(key, value);
    }
    if (header.build_id.empty())
        throw IoError(expected_kind + ": missing build id line");
    if (!expected_build_id.empty() && header.build_id != expected_build_id)
        throw IoError(expected_kind + ": build id mismatch (artifact " + header.build_id +
                      ", manifest " + expected_build_id + ")");
    return header;
}

const std::string& require_param(const ArtifactHeader& header, const std::string& key) {
    for (const auto& [k, v] : header.params)
        if (k == key) return v;
    throw IoError(header.kind + ": missing header parameter '" + key + "'");
}

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = seed;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ull;
    }
    return hash;
}

std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed) {
    return fnv1a64(data.data(), data.size(), seed);
}

std::string to_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf);
}

std::string format_score(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return std::string(buf);
}

}  // namespace semsearch
