#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace semsearch {

// Common leading block of every persisted artifact:
//
//   # semsearch <kind> v<version>
//   # build <hex build id>
//   # <key> <value>        (zero or more parameter lines)
//
// Data rows follow; they never start with '#'.
struct ArtifactHeader {
    std::string kind;
    int version = 1;
    std::string build_id;
    std::vector<std::pair<std::string, std::string>> params;
};

void write_artifact_header(std::ostream& out, const ArtifactHeader& header);

// Reads and validates a header. Throws IoError on kind/version mismatch or,
// when expected_build_id is non-empty, on a build id mismatch.
ArtifactHeader read_artifact_header(std::istream& in, const std::string& expected_kind,
                                    int expected_version,
                                    const std::string& expected_build_id = "");

// Returns the param value or throws IoError naming the missing key.
const std::string& require_param(const ArtifactHeader& header, const std::string& key);

// FNV-1a 64-bit, used for dataset/config content hashes in build manifests.
std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string to_hex(std::uint64_t value);

// Fixed 6-decimal rendering used for every score written to disk.
std::string format_score(double value);

}  // namespace semsearch
