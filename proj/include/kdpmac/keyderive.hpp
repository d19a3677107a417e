#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "kdpmac/family.hpp"
#include "kdpmac/types.hpp"

namespace kdpmac {

/// Pool of n secret key elements, each exactly element_len bytes, indexed 1..n.
struct KeyMaterial {
    int element_len = 0;
    std::vector<Bytes> elements;

    int size() const { return static_cast<int>(elements.size()); }
    const Bytes& element(int index) const { return elements.at(static_cast<std::size_t>(index) - 1); }
};

/// Deterministic material: a SplitMix64 stream seeded with
/// FNV-1a64(seed bytes || le64(n) || le64(element_len)) filled L bytes per
/// element, least significant word byte first. An element that comes out
/// all-zero is redrawn from the same stream, so no element is ever all-zero
/// and identical (n, element_len, seed) always yield identical material.
KeyMaterial generate_key_material(int n, int element_len, const Bytes& seed);

/// Branch condition for the directed delta set. Both rules agree on every
/// tree; on DAGs with shared subordinates the intersection rule leaks nonzero
/// keys between incomparable users, so containment is the default.
enum class DeltaRule {
    containment,   // S_i \ S_j when S_j is a proper subset of S_i, else empty
    intersection,  // S_i \ S_j when S_i and S_j intersect, else empty
};

std::string_view to_string(DeltaRule rule);
DeltaRule parse_delta_rule(std::string_view text);

/// Index set whose fold yields the key for the channel from u_j to u_i.
/// Always a subset of S_i, so the receiver can derive it from its own
/// material. Self pairs yield the empty set.
IndexSet delta_set(const SSetTable& table, UserId i, UserId j, DeltaRule rule = DeltaRule::containment);

/// Byte-wise XOR fold of the elements at the given indices; the empty set
/// folds to the all-zero key (the forbidden-channel sentinel).
Bytes pair_key(const KeyMaterial& material, const IndexSet& delta);

/// Directed m x m key table; entry (i, j) keys the channel from u_j to u_i.
class KeyMatrix {
public:
    KeyMatrix() = default;
    KeyMatrix(int user_count, int element_len)
        : user_count_(user_count),
          element_len_(element_len),
          data_(static_cast<std::size_t>(user_count) * user_count * element_len, 0) {}

    int user_count() const { return user_count_; }
    int element_len() const { return element_len_; }

    std::span<const std::uint8_t> key(UserId i, UserId j) const {
        return {data_.data() + offset(i, j), static_cast<std::size_t>(element_len_)};
    }
    std::span<std::uint8_t> key(UserId i, UserId j) {
        return {data_.data() + offset(i, j), static_cast<std::size_t>(element_len_)};
    }

    bool is_zero(UserId i, UserId j) const;
    int nonzero_count() const;

    bool operator==(const KeyMatrix&) const = default;

private:
    std::size_t offset(UserId i, UserId j) const;

    int user_count_ = 0;
    int element_len_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Full table build, parallelized across rows (each row touches disjoint
/// output and only reads shared inputs, so the result is schedule-independent).
KeyMatrix build_key_matrix(const KeyMaterial& material, const SSetTable& table,
                           DeltaRule rule = DeltaRule::containment);

/// Serial reference for the parallel builder; kept for tests and benchmarks.
KeyMatrix build_key_matrix_serial(const KeyMaterial& material, const SSetTable& table,
                                  DeltaRule rule = DeltaRule::containment);

/// Entries whose delta set is nonempty but whose key folded to zero. Such a
/// collision would make an allowed channel look forbidden, so generation
/// screens for it.
std::vector<std::pair<UserId, UserId>> zero_key_collisions(const KeyMatrix& matrix, const SSetTable& table,
                                                           DeltaRule rule);

struct ScreenedKeys {
    KeyMaterial material;
    KeyMatrix matrix;
    int attempts = 0;  // 1 when the first draw was collision-free
};

/// Generate material and the key matrix, re-deriving with seed || retry
/// counter byte appended whenever screening finds a zero collision. Throws
/// KeyGenError once max_retries re-derivations have all collided.
ScreenedKeys derive_keys_screened(const SSetTable& table, int element_len, const Bytes& seed,
                                  DeltaRule rule = DeltaRule::containment, int max_retries = 16);

}  // namespace kdpmac
