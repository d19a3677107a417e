#include "kdpmac/paper_example.hpp"

#include <ostream>

#include "kdpmac/util.hpp"

namespace kdpmac::paper_example {

Hierarchy hierarchy() { return parse_hierarchy(kFig1HierarchyText); }

std::vector<int> block_sizes() { return {2, 2, 1, 3, 2, 3, 2}; }

KeyMaterial material() {
    static const char* kBits[] = {
        "00100100", "10101010", "01010101", "11011011", "11101110",
        "00010001", "10010010", "10110110", "00011000", "11101110",
        "10111001", "11100111", "00101101", "11010010", "01111111",
    };
    KeyMaterial m;
    m.element_len = 1;
    for (const char* bits : kBits) m.elements.push_back(from_bits(bits));
    return m;
}

const std::vector<PrintedKey>& printed_nonzero_keys() {
    static const std::vector<PrintedKey> keys = {
        {1, 2, 0b10111110}, {1, 3, 0b11000011},
        // The published (1,4) delta list drops index 5, so this printed key
        // folds one element short; the true difference gives 11000110.
        {1, 4, 0b00101000},
        {1, 5, 0b00000101}, {1, 6, 0b10000000}, {1, 7, 0b01011110}, {2, 4, 0b01111000},
        {2, 5, 0b10111011},
        {3, 6, 0b01100011},  // misprint; recomputation gives 01000011
        {3, 7, 0b10011111},  // misprint; recomputation gives 10011101
    };
    return keys;
}

std::vector<Erratum> compute_errata(const KeyMatrix& derived) {
    if (derived.user_count() != 7 || derived.element_len() != 1)
        throw ValidationError("errata comparison expects the 7-user, one-byte example matrix");
    std::vector<Erratum> errata;
    for (UserId i = 1; i <= 7; ++i) {
        for (UserId j = 1; j <= 7; ++j) {
            if (i == j) continue;
            std::uint8_t printed = 0;
            for (const PrintedKey& k : printed_nonzero_keys())
                if (k.i == i && k.j == j) printed = k.value;
            std::uint8_t recomputed = derived.key(i, j)[0];
            if (recomputed != printed) errata.push_back({i, j, recomputed, printed});
        }
    }
    return errata;
}

namespace {

std::string set_braces(const IndexSet& s) {
    std::string out = "{";
    for (std::size_t t = 0; t < s.size(); ++t) {
        if (t) out.push_back(',');
        out += std::to_string(s[t]);
    }
    out.push_back('}');
    return out;
}

std::string byte_bits(std::uint8_t b) { return to_bits(std::span<const std::uint8_t>(&b, 1)); }

}  // namespace

void print_example(std::ostream& out) {
    Hierarchy h = hierarchy();
    BlockFamily family = build_block_family(h.user_count(), block_sizes());
    SSetTable ssets = build_ssets(h, family);
    KeyMaterial m = material();
    KeyMatrix matrix = build_key_matrix(m, ssets);

    for (UserId u = 1; u <= h.user_count(); ++u)
        out << "D" << u << " = " << set_braces(family.block(u)) << "\n";
    for (UserId u = 1; u <= h.user_count(); ++u)
        out << "S" << u << " = " << set_braces(ssets.sset(u)) << "\n";
    for (UserId i = 1; i <= h.user_count(); ++i)
        for (UserId j = 1; j <= h.user_count(); ++j) {
            if (i == j) continue;
            out << "dS" << i << j << " = " << set_braces(delta_set(ssets, i, j)) << "\n";
        }
    for (UserId i = 1; i <= h.user_count(); ++i)
        for (UserId j = 1; j <= h.user_count(); ++j) {
            if (i == j) continue;
            out << "k" << i << j << " = " << byte_bits(matrix.key(i, j)[0]) << "\n";
        }

    out << "errata:\n";
    for (const Erratum& e : compute_errata(matrix))
        out << "k" << e.i << e.j << " recomputed " << byte_bits(e.recomputed) << " printed "
            << byte_bits(e.printed) << "\n";
}

}  // namespace kdpmac::paper_example
