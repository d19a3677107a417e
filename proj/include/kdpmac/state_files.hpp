#pragma once

#include <iosfwd>
#include <string_view>

#include "kdpmac/family.hpp"
#include "kdpmac/keyderive.hpp"

namespace kdpmac {

/// On-disk state written by `gen` and read back by `key`, `verify` and `sim`.
/// Both formats are line-oriented with '#' comments, like the other files.

// "users <m>" / "ground <n>" / one "sset <id> <sorted,comma,list>" per user.
void write_ssets(const SSetTable& table, std::ostream& out);
SSetTable read_ssets(std::istream& in);

struct StoredKeyMatrix {
    KeyMatrix matrix;
    DeltaRule rule = DeltaRule::containment;
};

// "users <m>" / "keylen <L>" / "rule <name>" / one "key <i> <j> <hex>" per
// nonzero entry in row-major order. Zero entries are implicit.
void write_key_matrix(const KeyMatrix& matrix, DeltaRule rule, std::ostream& out);
StoredKeyMatrix read_key_matrix(std::istream& in);

}  // namespace kdpmac
