#pragma once

#include <vector>

#include "kdpmac/hierarchy.hpp"
#include "kdpmac/types.hpp"

namespace kdpmac {

/// One index block per user over the ground set {1..ground_size}. Valid
/// families have nonempty, pairwise-disjoint blocks (which also makes them an
/// antichain). The struct itself is open so that validate_family can inspect
/// arbitrary input.
struct BlockFamily {
    int ground_size = 0;
    std::vector<IndexSet> blocks;

    int block_count() const { return static_cast<int>(blocks.size()); }
    const IndexSet& block(UserId u) const { return blocks.at(static_cast<std::size_t>(u) - 1); }
};

/// Deterministic layout: block i is the next contiguous run of sizes[i-1]
/// indices, assigned in user-id order; ground_size = sum of sizes.
BlockFamily build_block_family(int user_count, const std::vector<int>& sizes);

struct FamilyReport {
    bool blocks_nonempty = true;
    bool blocks_disjoint = true;
    bool antichain = true;  // no block contained in another

    bool valid() const { return blocks_nonempty && blocks_disjoint && antichain; }
};

FamilyReport validate_family(const BlockFamily& family);

/// Per-user index sets: S_u = D_u for leaves, otherwise D_u united with the
/// S-sets of all immediate subordinates.
struct SSetTable {
    int ground_size = 0;
    std::vector<IndexSet> ssets;

    int user_count() const { return static_cast<int>(ssets.size()); }
    const IndexSet& sset(UserId u) const { return ssets.at(static_cast<std::size_t>(u) - 1); }
};

SSetTable build_ssets(const Hierarchy& h, const BlockFamily& family);

// Same construction along an explicit order, which must list every user once
// with subordinates before superiors. The result does not depend on which
// valid order is chosen; tests exercise that.
SSetTable build_ssets(const Hierarchy& h, const BlockFamily& family, const std::vector<UserId>& order);

}  // namespace kdpmac
