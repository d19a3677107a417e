#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "kdpmac/family.hpp"
#include "kdpmac/hierarchy.hpp"
#include "kdpmac/keyderive.hpp"

namespace kdpmac {

/// Allowed-channel table, entry (i, j) = information may flow from u_j up to
/// u_i. Recomputed from the edge list by plain reachability so it stays
/// independent of the S-set machinery it is used to check.
class PolicyMatrix {
public:
    PolicyMatrix() = default;
    explicit PolicyMatrix(int user_count)
        : user_count_(user_count), allowed_(static_cast<std::size_t>(user_count) * user_count, 0) {}

    int user_count() const { return user_count_; }
    bool allowed(UserId i, UserId j) const {
        return allowed_[static_cast<std::size_t>(i - 1) * user_count_ + (j - 1)] != 0;
    }
    void set(UserId i, UserId j, bool value) {
        allowed_[static_cast<std::size_t>(i - 1) * user_count_ + (j - 1)] = value ? 1 : 0;
    }
    int allowed_count() const;

private:
    int user_count_ = 0;
    std::vector<std::uint8_t> allowed_;
};

PolicyMatrix policy_matrix(const Hierarchy& h);

enum class ViolationKind {
    forbidden_channel_has_key,
    allowed_channel_key_zero,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    UserId i = 0;
    UserId j = 0;
    ViolationKind kind = ViolationKind::forbidden_channel_has_key;

    bool operator==(const Violation&) const = default;
};

struct ErratumEntry {
    std::string entry;  // e.g. "k36"
    Bytes recomputed;
    Bytes printed;
};

struct VerificationReport {
    bool policy_match = false;
    std::vector<Violation> violations;
    DeltaRule rule_used = DeltaRule::containment;
    int user_count = 0;
    int element_len = 0;
    int material_size = 0;    // n
    int sset_size_total = 0;  // sum of |S_i|
    int nonzero_keys = 0;
    int allowed_channels = 0;
    std::vector<ErratumEntry> errata;  // only filled by the bundled example
};

/// Check nonzero(matrix[i,j]) <=> policy[i,j] for every ordered pair.
/// Accounting fields beyond the matrix itself are left for the caller.
VerificationReport verify_scheme(const KeyMatrix& matrix, const PolicyMatrix& policy);

/// Stable line-oriented report rendering (key: value pairs, then violation
/// and erratum lines).
void write_report(const VerificationReport& report, std::ostream& out);

enum class HierarchyShape { tree, dag };

std::string_view to_string(HierarchyShape shape);
HierarchyShape parse_shape(std::string_view text);

/// Random instance generators used by the property driver and tests.
/// Trees pick each user's parent uniformly among earlier ids; DAGs add
/// roughly m/3 extra forward edges on top of such a tree spine. Block sizes
/// are uniform in 1..4.
Hierarchy random_hierarchy(std::mt19937_64& rng, int m_max, HierarchyShape shape);
std::vector<int> random_block_sizes(std::mt19937_64& rng, int user_count);

struct Counterexample {
    int trial_index = 0;  // 0-based
    int user_count = 0;
    std::vector<std::pair<UserId, UserId>> edges;
    std::vector<int> sizes;
    std::vector<Violation> violations;
};

struct RandomCheckReport {
    int trials = 0;
    int passes = 0;
    HierarchyShape shape = HierarchyShape::tree;
    DeltaRule rule = DeltaRule::containment;
    std::optional<Counterexample> first_failure;  // lowest trial index

    bool all_passed() const { return passes == trials; }
};

/// Run the full pipeline on `trials` random instances and verify policy
/// correspondence on each. Deterministic under seed; trials run in parallel
/// and the reported counterexample is always the lowest-index failure.
RandomCheckReport random_instance_check(int m_max, int trials, std::uint64_t seed, HierarchyShape shape,
                                        DeltaRule rule);

void write_random_check_report(const RandomCheckReport& report, std::ostream& out);

}  // namespace kdpmac
