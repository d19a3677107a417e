#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "kdpmac/paper_example.hpp"
#include "kdpmac/provisioning.hpp"
#include "kdpmac/util.hpp"
#include "kdpmac/verifier.hpp"

using namespace kdpmac;

namespace {

struct ExampleSystem {
    Hierarchy h = paper_example::hierarchy();
    BlockFamily family = build_block_family(7, paper_example::block_sizes());
    SSetTable ssets = build_ssets(h, family);
    KeyMaterial material = paper_example::material();
    KeyMatrix matrix = build_key_matrix(material, ssets);
    std::vector<UserBundle> bundles = make_bundles(h, family, ssets, material, matrix);
};

std::vector<UserBundle> random_system_bundles(std::mt19937_64& rng, SSetTable& ssets_out) {
    Hierarchy h = random_hierarchy(rng, 16, HierarchyShape::tree);
    BlockFamily family = build_block_family(h.user_count(), random_block_sizes(rng, h.user_count()));
    ssets_out = build_ssets(h, family);
    ScreenedKeys keys = derive_keys_screened(ssets_out, 1 + static_cast<int>(rng() % 16),
                                             {static_cast<std::uint8_t>(rng() & 0xff), 1});
    return make_bundles(h, family, ssets_out, keys.material, keys.matrix);
}

}  // namespace

TEST_CASE("bundle for user 4 of the seven-user example") {
    ExampleSystem sys;
    const UserBundle& b = sys.bundles.at(3);
    CHECK(b.user == 4);
    CHECK(b.element_len == 1);
    CHECK(b.sset == IndexSet{6, 7, 8});
    REQUIRE(b.material.size() == 3);
    CHECK(to_hex(b.material.at(6)) == "11");  // 00010001
    CHECK(to_hex(b.material.at(7)) == "92");  // 10010010
    CHECK(to_hex(b.material.at(8)) == "b6");  // 10110110
    REQUIRE(b.send_keys.size() == 2);
    CHECK(to_bits(b.send_keys.at(2)) == "01111000");
    CHECK(b.send_keys.at(1) == Bytes(sys.matrix.key(1, 4).begin(), sys.matrix.key(1, 4).end()));
}

TEST_CASE("root bundle has no send keys") {
    ExampleSystem sys;
    CHECK(sys.bundles.at(0).send_keys.empty());
    CHECK(sys.bundles.at(0).sset.size() == 15);
}

TEST_CASE("single-user bundle") {
    Hierarchy h = Hierarchy::from_edges(1, {});
    BlockFamily family = build_block_family(1, {2});
    SSetTable ssets = build_ssets(h, family);
    ScreenedKeys keys = derive_keys_screened(ssets, 4, {9});
    auto bundles = make_bundles(h, family, ssets, keys.material, keys.matrix);
    REQUIRE(bundles.size() == 1);
    CHECK(bundles[0].sset == family.block(1));
    CHECK(bundles[0].send_keys.empty());
}

TEST_CASE("make_bundles rejects inconsistent inputs") {
    ExampleSystem sys;
    BlockFamily wrong = build_block_family(6, {2, 2, 1, 3, 2, 3});
    CHECK_THROWS_AS(make_bundles(sys.h, wrong, sys.ssets, sys.material, sys.matrix), ValidationError);
    KeyMaterial short_material = generate_key_material(14, 1, {1});
    CHECK_THROWS_AS(make_bundles(sys.h, sys.family, sys.ssets, short_material, sys.matrix), ValidationError);
    // an unscreened matrix with a zero key on an allowed channel is refused
    KeyMatrix zeroed = sys.matrix;
    std::fill(zeroed.key(2, 4).begin(), zeroed.key(2, 4).end(), 0);
    CHECK_THROWS_AS(make_bundles(sys.h, sys.family, sys.ssets, sys.material, zeroed), ValidationError);
}

TEST_CASE("bundle serialization matches the documented layout") {
    ExampleSystem sys;
    std::string text = bundle_to_string(sys.bundles.at(3));
    // sendkey 1 is the fold over the full difference {1,2,3,4,5,9..15} = c6;
    // the published table lists 28 because its delta enumeration drops index 5
    CHECK(text ==
          "bundle 4\n"
          "keylen 1\n"
          "sset 6,7,8\n"
          "material 6 11\n"
          "material 7 92\n"
          "material 8 b6\n"
          "sendkey 1 c6\n"
          "sendkey 2 78\n");
    CHECK(bundle_from_string(text) == sys.bundles.at(3));
}

TEST_CASE("round-trip identity for every example bundle") {
    ExampleSystem sys;
    for (const UserBundle& b : sys.bundles) CHECK(bundle_from_string(bundle_to_string(b)) == b);
}

TEST_CASE("round-trip identity for random bundles") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        SSetTable ssets;
        for (const UserBundle& b : random_system_bundles(rng, ssets)) {
            UserBundle back = bundle_from_string(bundle_to_string(b));
            CHECK(back == b);
        }
    }
}

TEST_CASE("malformed bundle documents are rejected") {
    CHECK_THROWS_AS(bundle_from_string(""), ParseError);
    CHECK_THROWS_AS(bundle_from_string("keylen 1\nbundle 4\n"), ParseError);  // header not first
    CHECK_THROWS_AS(bundle_from_string("bundle 4\nsset 1\n"), ParseError);    // missing keylen
    // element wider than the declared length
    CHECK_THROWS_AS(bundle_from_string("bundle 1\nkeylen 1\nsset 1\nmaterial 1 aabbcc\n"), ParseError);
    // bad hex
    CHECK_THROWS_AS(bundle_from_string("bundle 1\nkeylen 1\nsset 1\nmaterial 1 zz\n"), ParseError);
    // uppercase hex is not canonical
    CHECK_THROWS_AS(bundle_from_string("bundle 1\nkeylen 1\nsset 1\nmaterial 1 AB\n"), ParseError);
    // material indices disagree with the declared sset
    CHECK_THROWS_AS(bundle_from_string("bundle 1\nkeylen 1\nsset 1,2\nmaterial 1 ab\n"), ValidationError);
    CHECK_THROWS_AS(bundle_from_string("bundle 1\nkeylen 1\nsset 1\nmaterial 1 ab\nmaterial 2 cd\n"),
                    ValidationError);
    // zero send key stored
    CHECK_THROWS_AS(bundle_from_string("bundle 2\nkeylen 1\nsset 1\nmaterial 1 ab\nsendkey 1 00\n"),
                    ValidationError);
}

TEST_CASE("receive keys are derived from material alone") {
    ExampleSystem sys;
    const UserBundle& b2 = sys.bundles.at(1);
    CHECK(to_bits(derive_receive_key(b2, sys.ssets, 4)) == "01111000");
    CHECK(all_zero(derive_receive_key(b2, sys.ssets, 3)));  // forbidden channel
    CHECK(all_zero(derive_receive_key(b2, sys.ssets, 2)));  // self
}

TEST_CASE("corrupted bundle material is detected at derivation") {
    ExampleSystem sys;
    UserBundle broken = sys.bundles.at(1);
    broken.material.erase(3);  // index 3 is needed for delta(2, 4)
    CHECK_THROWS_AS(derive_receive_key(broken, sys.ssets, 4), ValidationError);
}

TEST_CASE("agreement between center, sender and receiver") {
    std::mt19937_64 rng(211);
    for (int trial = 0; trial < 20; ++trial) {
        Hierarchy h = random_hierarchy(rng, 20, trial % 2 ? HierarchyShape::dag : HierarchyShape::tree);
        const int m = h.user_count();
        BlockFamily family = build_block_family(m, random_block_sizes(rng, m));
        SSetTable ssets = build_ssets(h, family);
        ScreenedKeys keys = derive_keys_screened(ssets, 8, {static_cast<std::uint8_t>(trial + 3)});
        auto bundles = make_bundles(h, family, ssets, keys.material, keys.matrix);

        int stored_material = 0, sset_total = 0;
        for (UserId i = 1; i <= m; ++i) {
            stored_material += static_cast<int>(bundles[static_cast<std::size_t>(i) - 1].material.size());
            sset_total += static_cast<int>(ssets.sset(i).size());
            for (UserId j = 1; j <= m; ++j) {
                Bytes derived = derive_receive_key(bundles[static_cast<std::size_t>(i) - 1], ssets, j);
                CHECK(derived == Bytes(keys.matrix.key(i, j).begin(), keys.matrix.key(i, j).end()));
                if (i != j && h.dominates(i, j))
                    CHECK(bundles[static_cast<std::size_t>(j) - 1].send_keys.at(i) == derived);
            }
        }
        // material minimality: bundles hold exactly the S-sets, and the pool
        // never grows beyond the sum of the block sizes
        CHECK(stored_material == sset_total);
        int block_total = 0;
        for (UserId u = 1; u <= m; ++u) block_total += static_cast<int>(family.block(u).size());
        CHECK(ssets.ground_size == block_total);
    }
}
