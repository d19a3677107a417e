#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kdpmac {

// User ids are 1-based and dense in 1..m.
using UserId = int;

using Bytes = std::vector<std::uint8_t>;

// Index set over the key-material ground set {1..n}.
// Always kept sorted ascending with unique entries.
using IndexSet = std::vector<int>;

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_no(line) {}
    int line_no = 0;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when key generation cannot produce a collision-free matrix.
struct KeyGenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a zero (forbidden-channel) key reaches the cipher.
struct ZeroKeyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kdpmac
