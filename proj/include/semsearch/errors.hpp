#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semsearch {

// Malformed input data (N-Triples line, gold file line, ...).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + std::move(message)),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Invalid configuration value or unknown configuration key.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& message) : std::runtime_error(message) {}
};

// Artifact file problems: unreadable, wrong version, build mismatch, corrupt.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

// User-facing query validation failure (empty query, only stopwords).
class QueryError : public std::runtime_error {
public:
    explicit QueryError(const std::string& message) : std::runtime_error(message) {}
};

// Pipeline-level contract breach (empty idf corpus, partition gap, ...).
class BuildError : public std::runtime_error {
public:
    explicit BuildError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace semsearch
