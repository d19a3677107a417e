#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "kdpmac/types.hpp"

namespace kdpmac {

/// Immutable user partial order. Edges run superior -> immediate subordinate;
/// dominance is the strict transitive closure of the edge relation, so
/// dominates(i, i) is always false. Any DAG is accepted: multiple parents and
/// multiple roots are fine, cycles are not.
class Hierarchy {
public:
    // Validates ids, rejects self-edges, duplicates and cycles, then
    // precomputes the dominance closure and the leaves-to-root order.
    static Hierarchy from_edges(int user_count, std::vector<std::pair<UserId, UserId>> edges);

    int user_count() const { return user_count_; }
    const std::vector<std::pair<UserId, UserId>>& edges() const { return edges_; }

    const std::vector<UserId>& subordinates(UserId u) const;  // immediate only
    const std::vector<UserId>& superiors(UserId u) const;     // immediate only

    bool dominates(UserId i, UserId j) const;

    // Neither dominates the other. i == j is a contract violation.
    bool incomparable(UserId i, UserId j) const;

    // Every user appears after all of its subordinates; leaves first.
    // Deterministic: users are emitted by generation (distance above the
    // deepest subordinate), ascending id within a generation.
    const std::vector<UserId>& leaves_to_root_order() const { return order_; }

private:
    Hierarchy() = default;
    void check_user(UserId u, const char* role) const;

    int user_count_ = 0;
    std::vector<std::pair<UserId, UserId>> edges_;
    std::vector<std::vector<UserId>> subordinates_;  // index 0 unused
    std::vector<std::vector<UserId>> superiors_;
    std::vector<std::uint8_t> dominance_;  // m*m, row i-1 = users dominated by i
    std::vector<UserId> order_;
};

/// Line-oriented hierarchy document: '#' comments, "users <m>" first, then
/// one "edge <superior> <subordinate>" per line.
Hierarchy parse_hierarchy(std::string_view text);

}  // namespace kdpmac
