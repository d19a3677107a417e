// Acceptance suite: drives every shipped guarantee end to end and prints one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kdpmac/cli.hpp"
#include "kdpmac/paper_example.hpp"
#include "kdpmac/provisioning.hpp"
#include "kdpmac/simulator.hpp"
#include "kdpmac/util.hpp"
#include "kdpmac/verifier.hpp"

namespace fs = std::filesystem;
using namespace kdpmac;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail = "") {
    std::printf("criterion %d %s: %s%s%s\n", criterion, name.c_str(), pass ? "PASS" : "FAIL",
                detail.empty() ? "" : " — ", detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct ExampleSystem {
    Hierarchy h = paper_example::hierarchy();
    BlockFamily family = build_block_family(7, paper_example::block_sizes());
    SSetTable ssets = build_ssets(h, family);
    KeyMaterial material = paper_example::material();
    KeyMatrix matrix = build_key_matrix(material, ssets);
};

// Independent bit-string fold over the published element list; shares no code
// with pair_key.
std::string oracle_fold(const std::vector<int>& indices) {
    static const char* kBits[] = {
        "00100100", "10101010", "01010101", "11011011", "11101110", "00010001", "10010010", "10110110",
        "00011000", "11101110", "10111001", "11100111", "00101101", "11010010", "01111111",
    };
    std::string acc = "00000000";
    for (int index : indices)
        for (int bit = 0; bit < 8; ++bit)
            acc[bit] = acc[bit] == kBits[index - 1][bit] ? '0' : '1';
    return acc;
}

void criterion1_ssets() {
    auto start = Clock::now();
    ExampleSystem sys;
    std::vector<IndexSet> expected = {
        {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
        {3, 4, 6, 7, 8, 9, 10},
        {5, 11, 12, 13, 14, 15},
        {6, 7, 8},
        {9, 10},
        {11, 12, 13},
        {14, 15},
    };
    bool pass = true;
    for (UserId u = 1; u <= 7; ++u) pass = pass && sys.ssets.sset(u) == expected[static_cast<std::size_t>(u) - 1];
    double elapsed = seconds_since(start);
    pass = pass && elapsed < 1.0;
    report(1, "sset-reproduction", pass, "7/7 sets exact in " + std::to_string(elapsed) + "s");
}

void criterion2_delta_table() {
    ExampleSystem sys;
    std::map<std::pair<int, int>, IndexSet> nonzero = {
        {{1, 2}, {1, 2, 5, 11, 12, 13, 14, 15}},
        {{1, 3}, {1, 2, 3, 4, 6, 7, 8, 9, 10}},
        {{1, 4}, {1, 2, 3, 4, 9, 10, 11, 12, 13, 14, 15}},
        {{1, 5}, {1, 2, 3, 4, 5, 6, 7, 8, 11, 12, 13, 14, 15}},
        {{1, 6}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 14, 15}},
        {{1, 7}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}},
        {{2, 4}, {3, 4, 9, 10}},
        {{2, 5}, {3, 4, 6, 7, 8}},
        {{3, 6}, {5, 14, 15}},
        {{3, 7}, {5, 11, 12, 13}},
    };
    int checked = 0;
    bool pass = true;
    for (DeltaRule rule : {DeltaRule::containment, DeltaRule::intersection}) {
        for (UserId i = 1; i <= 7; ++i)
            for (UserId j = 1; j <= 7; ++j) {
                if (i == j) continue;
                ++checked;
                IndexSet expected;
                if (auto it = nonzero.find({i, j}); it != nonzero.end()) expected = it->second;
                pass = pass && delta_set(sys.ssets, i, j, rule) == expected;
            }
    }
    report(2, "delta-table-reproduction", pass,
           std::to_string(checked / 2) + " ordered pairs exact under both rules");
}

void criterion3_key_table() {
    ExampleSystem sys;
    bool pass = true;
    // entries whose printed values are correct
    const std::map<std::pair<int, int>, std::string> printed_good = {
        {{1, 2}, "10111110"}, {{1, 3}, "11000011"}, {{1, 4}, "00101000"}, {{1, 5}, "00000101"},
        {{1, 6}, "10000000"}, {{1, 7}, "01011110"}, {{2, 4}, "01111000"}, {{2, 5}, "10111011"},
    };
    for (const auto& [pair, bits] : printed_good)
        pass = pass && to_bits(sys.matrix.key(pair.first, pair.second)) == bits;
    // every entry the table prints as zero must be zero
    for (UserId i = 1; i <= 7; ++i)
        for (UserId j = 1; j <= 7; ++j) {
            bool printed_nonzero = printed_good.count({i, j}) || (i == 3 && (j == 6 || j == 7));
            if (!printed_nonzero) pass = pass && sys.matrix.is_zero(i, j);
        }
    // the two misprints must equal the independent recomputation
    pass = pass && to_bits(sys.matrix.key(3, 6)) == oracle_fold({5, 14, 15});
    pass = pass && to_bits(sys.matrix.key(3, 6)) == "01000011";
    pass = pass && to_bits(sys.matrix.key(3, 7)) == oracle_fold({5, 11, 12, 13});
    pass = pass && to_bits(sys.matrix.key(3, 7)) == "10011101";
    // and be reported as errata against the printed values
    auto errata = paper_example::compute_errata(sys.matrix);
    pass = pass && errata.size() == 2;
    if (errata.size() == 2) {
        pass = pass && errata[0].i == 3 && errata[0].j == 6 && errata[0].recomputed == 0b01000011 &&
               errata[0].printed == 0b01100011;
        pass = pass && errata[1].i == 3 && errata[1].j == 7 && errata[1].recomputed == 0b10011101 &&
               errata[1].printed == 0b10011111;
    }
    report(3, "key-table-with-errata", pass, "bit-exact; k36/k37 flagged");
}

void criterion4_policy_property() {
    auto start = Clock::now();
    RandomCheckReport trees = random_instance_check(64, 200, 0x1a2b3c4dULL, HierarchyShape::tree,
                                                    DeltaRule::containment);
    RandomCheckReport dags = random_instance_check(64, 200, 0x9e8d7c6bULL, HierarchyShape::dag,
                                                   DeltaRule::containment);
    double elapsed = seconds_since(start);
    bool pass = trees.passes == 200 && dags.passes == 200 && elapsed < 30.0;
    report(4, "policy-correspondence", pass,
           std::to_string(trees.passes) + "/200 trees, " + std::to_string(dags.passes) + "/200 dags in " +
               std::to_string(elapsed) + "s");
}

void criterion5_rule_equivalence() {
    std::mt19937_64 rng(0x5eedULL);
    bool trees_equal = true;
    for (int trial = 0; trial < 200; ++trial) {
        Hierarchy h = random_hierarchy(rng, 64, HierarchyShape::tree);
        SSetTable ssets = build_ssets(h, build_block_family(h.user_count(), random_block_sizes(rng, h.user_count())));
        KeyMaterial material = generate_key_material(ssets.ground_size, 8,
                                                     {static_cast<std::uint8_t>(trial & 0xff),
                                                      static_cast<std::uint8_t>(trial >> 8), 0x55});
        trees_equal = trees_equal && build_key_matrix(material, ssets, DeltaRule::containment) ==
                                         build_key_matrix(material, ssets, DeltaRule::intersection);
    }
    // diamond: 1 over {2,3}, both over 4; the rules must disagree
    Hierarchy diamond = Hierarchy::from_edges(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
    SSetTable ssets = build_ssets(diamond, build_block_family(4, {1, 1, 1, 1}));
    KeyMaterial material = generate_key_material(4, 8, {0x0d});
    bool dag_differs = !(build_key_matrix(material, ssets, DeltaRule::containment) ==
                         build_key_matrix(material, ssets, DeltaRule::intersection));
    bool pass = trees_equal && dag_differs;
    report(5, "rule-equivalence-on-trees", pass, "200 trees identical; diamond DAG differs");
}

void criterion6_receiver_derivability() {
    bool pass = true;
    int channels = 0;
    std::mt19937_64 rng(0xabcdULL);
    for (int trial = 0; trial < 40; ++trial) {
        Hierarchy h = random_hierarchy(rng, 32, trial % 2 ? HierarchyShape::dag : HierarchyShape::tree);
        const int m = h.user_count();
        BlockFamily family = build_block_family(m, random_block_sizes(rng, m));
        SSetTable ssets = build_ssets(h, family);
        ScreenedKeys keys = derive_keys_screened(ssets, 16, {static_cast<std::uint8_t>(trial + 1), 0x66});
        auto bundles = make_bundles(h, family, ssets, keys.material, keys.matrix);
        for (UserId i = 1; i <= m; ++i)
            for (UserId j = 1; j <= m; ++j) {
                if (i == j || !h.dominates(i, j)) continue;
                ++channels;
                Bytes derived = derive_receive_key(bundles[static_cast<std::size_t>(i) - 1], ssets, j);
                auto entry = keys.matrix.key(i, j);
                pass = pass && derived == Bytes(entry.begin(), entry.end());
            }
    }
    report(6, "receiver-derivability", pass, std::to_string(channels) + " allowed channels exact");
}

void criterion7_simulator_enforcement() {
    ExampleSystem sys;
    auto bundles = make_bundles(sys.h, sys.family, sys.ssets, sys.material, sys.matrix);
    PolicyMatrix pm = policy_matrix(sys.h);
    Scenario scenario;
    for (UserId from = 1; from <= 7; ++from)
        for (UserId to = 1; to <= 7; ++to)
            scenario.steps.push_back({from, to, Bytes{'p', 'i', 'n', 'g'}, pm.allowed(to, from)});
    Transcript t = run_scenario(bundles, sys.ssets, scenario);
    int ok = 0, forbidden = 0;
    for (const auto& step : t.steps) {
        ok += step.outcome == Outcome::ok;
        forbidden += step.outcome == Outcome::forbidden;
    }
    bool pass = t.all_pass && ok == 10 && forbidden == 39 && t.steps.size() == 49;
    report(7, "simulator-enforcement", pass,
           std::to_string(ok) + " ok / " + std::to_string(forbidden) + " forbidden of 49");
}

void criterion8_serialization_roundtrip() {
    std::mt19937_64 rng(0x10adULL);
    int checked = 0;
    bool pass = true;
    while (checked < 100) {
        Hierarchy h = random_hierarchy(rng, 24, checked % 2 ? HierarchyShape::dag : HierarchyShape::tree);
        const int m = h.user_count();
        BlockFamily family = build_block_family(m, random_block_sizes(rng, m));
        SSetTable ssets = build_ssets(h, family);
        ScreenedKeys keys = derive_keys_screened(ssets, 1 + static_cast<int>(rng() % 32),
                                                 {static_cast<std::uint8_t>(rng() & 0xff), 0x77});
        for (const UserBundle& b : make_bundles(h, family, ssets, keys.material, keys.matrix)) {
            if (checked >= 100) break;
            ++checked;
            std::string text = bundle_to_string(b);
            UserBundle back = bundle_from_string(text);
            pass = pass && back == b && bundle_to_string(back) == text;
        }
    }
    report(8, "serialization-round-trip", pass, std::to_string(checked) + " bundles byte-identical");
}

void criterion9_generation_determinism() {
    fs::path base = fs::temp_directory_path() / "kdpmac_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    std::vector<std::string> common = {"gen",   "--hierarchy", "fig1", "--sizes", "2,1,3,1,2,1,1",
                                       "--seed", "0123456789abcdef", "--key-len", "16", "--out"};
    bool pass = true;
    std::vector<fs::path> dirs = {base / "run_a", base / "run_b"};
    for (const fs::path& dir : dirs) {
        auto args = common;
        args.push_back(dir.string());
        std::ostringstream out, err;
        pass = pass && cli::run(args, out, err) == 0;
    }
    int files = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
        ++files;
        fs::path name = entry.path().filename();
        std::ifstream a(dirs[0] / name, std::ios::binary), b(dirs[1] / name, std::ios::binary);
        std::ostringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        std::string ta = sa.str(), tb = sb.str();
        Bytes ba(ta.begin(), ta.end());
        Bytes bb(tb.begin(), tb.end());
        pass = pass && fnv1a64(ba) == fnv1a64(bb) && ba == bb;
    }
    pass = pass && files == 9;  // ssets, keymatrix, 7 bundles
    report(9, "generation-determinism", pass, std::to_string(files) + " files hash-identical");
}

}  // namespace

int main() {
    criterion1_ssets();
    criterion2_delta_table();
    criterion3_key_table();
    criterion4_policy_property();
    criterion5_rule_equivalence();
    criterion6_receiver_derivability();
    criterion7_simulator_enforcement();
    criterion8_serialization_roundtrip();
    criterion9_generation_determinism();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
