#include "kdpmac/verifier.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "kdpmac/util.hpp"

namespace kdpmac {

int PolicyMatrix::allowed_count() const {
    int count = 0;
    for (std::uint8_t v : allowed_) count += v != 0;
    return count;
}

PolicyMatrix policy_matrix(const Hierarchy& h) {
    const int m = h.user_count();
    PolicyMatrix policy(m);
    // Depth-first reachability from each user over the raw edge list.
    std::vector<std::vector<UserId>> children(static_cast<std::size_t>(m) + 1);
    for (auto [sup, sub] : h.edges()) children[sup].push_back(sub);
    for (UserId start = 1; start <= m; ++start) {
        std::vector<UserId> stack = children[start];
        std::vector<bool> seen(static_cast<std::size_t>(m) + 1, false);
        while (!stack.empty()) {
            UserId u = stack.back();
            stack.pop_back();
            if (seen[u]) continue;
            seen[u] = true;
            policy.set(start, u, true);
            for (UserId next : children[u]) stack.push_back(next);
        }
    }
    return policy;
}

std::string_view to_string(ViolationKind kind) {
    return kind == ViolationKind::forbidden_channel_has_key ? "forbidden-channel-has-key"
                                                            : "allowed-channel-key-zero";
}

VerificationReport verify_scheme(const KeyMatrix& matrix, const PolicyMatrix& policy) {
    if (matrix.user_count() != policy.user_count())
        throw ValidationError("key matrix is " + std::to_string(matrix.user_count()) + " users, policy is " +
                              std::to_string(policy.user_count()));
    VerificationReport report;
    report.user_count = matrix.user_count();
    report.element_len = matrix.element_len();
    for (UserId i = 1; i <= matrix.user_count(); ++i) {
        for (UserId j = 1; j <= matrix.user_count(); ++j) {
            bool has_key = !matrix.is_zero(i, j);
            bool allowed = i != j && policy.allowed(i, j);
            if (has_key && !allowed)
                report.violations.push_back({i, j, ViolationKind::forbidden_channel_has_key});
            else if (!has_key && allowed)
                report.violations.push_back({i, j, ViolationKind::allowed_channel_key_zero});
        }
    }
    report.policy_match = report.violations.empty();
    report.nonzero_keys = matrix.nonzero_count();
    report.allowed_channels = policy.allowed_count();
    return report;
}

void write_report(const VerificationReport& report, std::ostream& out) {
    out << "rule: " << to_string(report.rule_used) << "\n";
    out << "users: " << report.user_count << "\n";
    out << "keylen: " << report.element_len << "\n";
    out << "material-size: " << report.material_size << "\n";
    out << "sset-size-total: " << report.sset_size_total << "\n";
    out << "allowed-channels: " << report.allowed_channels << "\n";
    out << "nonzero-keys: " << report.nonzero_keys << "\n";
    out << "policy-match: " << (report.policy_match ? "yes" : "no") << "\n";
    out << "violations: " << report.violations.size() << "\n";
    for (const Violation& v : report.violations)
        out << "violation " << v.i << " " << v.j << " " << to_string(v.kind) << "\n";
    if (!report.errata.empty()) {
        out << "errata: " << report.errata.size() << "\n";
        for (const ErratumEntry& e : report.errata) {
            bool one_byte = e.recomputed.size() == 1;
            out << "erratum " << e.entry << " recomputed "
                << (one_byte ? to_bits(e.recomputed) : to_hex(e.recomputed)) << " printed "
                << (one_byte ? to_bits(e.printed) : to_hex(e.printed)) << "\n";
        }
    }
}

std::string_view to_string(HierarchyShape shape) { return shape == HierarchyShape::tree ? "tree" : "dag"; }

HierarchyShape parse_shape(std::string_view text) {
    if (text == "tree") return HierarchyShape::tree;
    if (text == "dag") return HierarchyShape::dag;
    throw ParseError("unknown shape '" + std::string(text) + "' (expected tree or dag)");
}

Hierarchy random_hierarchy(std::mt19937_64& rng, int m_max, HierarchyShape shape) {
    if (m_max < 1) throw ValidationError("m_max must be positive");
    int m = std::uniform_int_distribution<int>(1, m_max)(rng);
    std::vector<std::pair<UserId, UserId>> edges;
    std::set<std::pair<UserId, UserId>> present;
    for (UserId u = 2; u <= m; ++u) {
        UserId parent = std::uniform_int_distribution<int>(1, u - 1)(rng);
        edges.emplace_back(parent, u);
        present.insert({parent, u});
    }
    if (shape == HierarchyShape::dag && m >= 3) {
        // Extra forward edges keep the spine acyclic while creating shared
        // subordinates and multiple parents.
        int extra = m / 3 + 1;
        for (int e = 0; e < extra; ++e) {
            UserId sub = std::uniform_int_distribution<int>(2, m)(rng);
            UserId sup = std::uniform_int_distribution<int>(1, sub - 1)(rng);
            if (present.insert({sup, sub}).second) edges.emplace_back(sup, sub);
        }
    }
    return Hierarchy::from_edges(m, std::move(edges));
}

std::vector<int> random_block_sizes(std::mt19937_64& rng, int user_count) {
    std::vector<int> sizes(static_cast<std::size_t>(user_count));
    std::uniform_int_distribution<int> dist(1, 4);
    for (int& s : sizes) s = dist(rng);
    return sizes;
}

namespace {
constexpr int kTrialKeyLen = 8;

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
    std::uint64_t state = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1);
    return splitmix64(state);
}
}  // namespace

RandomCheckReport random_instance_check(int m_max, int trials, std::uint64_t seed, HierarchyShape shape,
                                        DeltaRule rule) {
    if (m_max < 1 || trials < 1) throw ValidationError("m_max and trials must be positive");
    RandomCheckReport report;
    report.trials = trials;
    report.shape = shape;
    report.rule = rule;

    std::vector<std::optional<Counterexample>> failures(static_cast<std::size_t>(trials));
    int passes = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : passes)
    for (int trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(trial_seed(seed, trial));
        Hierarchy h = random_hierarchy(rng, m_max, shape);
        std::vector<int> sizes = random_block_sizes(rng, h.user_count());
        BlockFamily family = build_block_family(h.user_count(), sizes);
        SSetTable ssets = build_ssets(h, family);
        Bytes material_seed(8);
        std::uint64_t ms = trial_seed(seed ^ 0x5bd1e995, trial);
        for (int t = 0; t < 8; ++t) material_seed[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(ms >> (8 * t));
        ScreenedKeys keys = derive_keys_screened(ssets, kTrialKeyLen, material_seed, rule);
        VerificationReport vr = verify_scheme(keys.matrix, policy_matrix(h));
        if (vr.policy_match) {
            ++passes;
        } else {
            failures[static_cast<std::size_t>(trial)] =
                Counterexample{trial, h.user_count(), h.edges(), sizes, vr.violations};
        }
    }
    report.passes = passes;
    for (auto& f : failures)
        if (f) {
            report.first_failure = std::move(f);
            break;
        }
    return report;
}

void write_random_check_report(const RandomCheckReport& report, std::ostream& out) {
    out << "mode: random\n";
    out << "shape: " << to_string(report.shape) << "\n";
    out << "rule: " << to_string(report.rule) << "\n";
    out << "trials: " << report.trials << "\n";
    out << "passes: " << report.passes << "\n";
    out << "policy-match: " << (report.all_passed() ? "yes" : "no") << "\n";
    if (report.first_failure) {
        const Counterexample& ce = *report.first_failure;
        out << "counterexample-trial: " << ce.trial_index << "\n";
        out << "counterexample-users: " << ce.user_count << "\n";
        std::string sizes;
        for (std::size_t t = 0; t < ce.sizes.size(); ++t) {
            if (t) sizes.push_back(',');
            sizes += std::to_string(ce.sizes[t]);
        }
        out << "counterexample-sizes: " << sizes << "\n";
        for (auto [sup, sub] : ce.edges) out << "counterexample-edge " << sup << " " << sub << "\n";
        for (const Violation& v : ce.violations)
            out << "violation " << v.i << " " << v.j << " " << to_string(v.kind) << "\n";
    }
}

}  // namespace kdpmac
