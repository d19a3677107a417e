#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "kdpmac/family.hpp"
#include "kdpmac/hierarchy.hpp"
#include "kdpmac/keyderive.hpp"

namespace kdpmac::paper_example {

/// The bundled reference example: a seven-user tree, block sizes
/// (2,2,1,3,2,3,2), and fifteen one-byte key elements. Its published key
/// table carries three misprints: k36 and k37 disagree with the fold of
/// their own delta lists, and the (1,4) delta list drops index 5, taking the
/// printed k14 with it. Recomputation is authoritative; the example report
/// flags all three as errata.

inline constexpr std::string_view kFig1HierarchyText =
    "# seven-user tree: 1 over {2,3}, 2 over {4,5}, 3 over {6,7}\n"
    "users 7\n"
    "edge 1 2\n"
    "edge 1 3\n"
    "edge 2 4\n"
    "edge 2 5\n"
    "edge 3 6\n"
    "edge 3 7\n";

Hierarchy hierarchy();
std::vector<int> block_sizes();  // (2,2,1,3,2,3,2)
KeyMaterial material();          // the fifteen one-byte elements

struct PrintedKey {
    UserId i = 0;
    UserId j = 0;
    std::uint8_t value = 0;  // as published; zero entries omitted
};

/// The ten nonzero entries of the published key table, verbatim, including
/// the misprinted values.
const std::vector<PrintedKey>& printed_nonzero_keys();

struct Erratum {
    UserId i = 0;
    UserId j = 0;
    std::uint8_t recomputed = 0;
    std::uint8_t printed = 0;
};

/// Entries of the derived matrix that disagree with the published table.
std::vector<Erratum> compute_errata(const KeyMatrix& derived);

/// Full example dump: blocks, S-sets, all 42 directed delta sets, the key
/// table in binary, and the errata section.
void print_example(std::ostream& out);

}  // namespace kdpmac::paper_example
