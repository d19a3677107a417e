#include "kdpmac/family.hpp"

#include <algorithm>
#include <numeric>

#include "kdpmac/util.hpp"

namespace kdpmac {

BlockFamily build_block_family(int user_count, const std::vector<int>& sizes) {
    if (user_count < 1) throw ValidationError("user count must be positive");
    if (static_cast<int>(sizes.size()) != user_count)
        throw ValidationError("expected " + std::to_string(user_count) + " block sizes, got " +
                              std::to_string(sizes.size()));
    BlockFamily family;
    family.blocks.reserve(sizes.size());
    int next = 1;
    for (int size : sizes) {
        if (size < 1) throw ValidationError("block sizes must be positive");
        IndexSet block(static_cast<std::size_t>(size));
        std::iota(block.begin(), block.end(), next);
        next += size;
        family.blocks.push_back(std::move(block));
    }
    family.ground_size = next - 1;
    return family;
}

FamilyReport validate_family(const BlockFamily& family) {
    FamilyReport report;
    const auto& blocks = family.blocks;
    for (const auto& b : blocks)
        if (b.empty()) report.blocks_nonempty = false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < blocks.size(); ++j) {
            if (sets_intersect(blocks[i], blocks[j])) report.blocks_disjoint = false;
            if (is_subset(blocks[i], blocks[j]) || is_subset(blocks[j], blocks[i])) report.antichain = false;
        }
    }
    return report;
}

SSetTable build_ssets(const Hierarchy& h, const BlockFamily& family) {
    return build_ssets(h, family, h.leaves_to_root_order());
}

SSetTable build_ssets(const Hierarchy& h, const BlockFamily& family, const std::vector<UserId>& order) {
    const int m = h.user_count();
    if (family.block_count() != m)
        throw ValidationError("block family has " + std::to_string(family.block_count()) +
                              " blocks for " + std::to_string(m) + " users");
    if (static_cast<int>(order.size()) != m) throw ValidationError("order must list every user exactly once");

    SSetTable table;
    table.ground_size = family.ground_size;
    table.ssets.assign(static_cast<std::size_t>(m), {});
    std::vector<bool> done(static_cast<std::size_t>(m) + 1, false);
    for (UserId u : order) {
        if (u < 1 || u > m || done[u]) throw ValidationError("order must list every user exactly once");
        IndexSet s = family.block(u);
        for (UserId sub : h.subordinates(u)) {
            if (!done[sub]) throw ValidationError("order visits user " + std::to_string(u) +
                                                  " before its subordinate " + std::to_string(sub));
            s = sorted_union(s, table.sset(sub));
        }
        table.ssets[static_cast<std::size_t>(u) - 1] = std::move(s);
        done[u] = true;
    }
    return table;
}

}  // namespace kdpmac
