#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "kdpmac/types.hpp"

namespace kdpmac {

std::string to_hex(std::span<const std::uint8_t> bytes);
Bytes from_hex(std::string_view hex);  // throws ParseError on odd length / bad digit

// 8 characters per byte, most significant bit first.
std::string to_bits(std::span<const std::uint8_t> bytes);
Bytes from_bits(std::string_view bits);

bool all_zero(std::span<const std::uint8_t> bytes);

// "3,4,9,10" (no spaces); "-" for the empty set.
std::string index_set_to_string(const IndexSet& s);
IndexSet index_set_from_string(std::string_view text);

inline IndexSet sorted_union(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline IndexSet sorted_difference(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    out.reserve(a.size());
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline IndexSet sorted_intersection(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool is_subset(const IndexSet& inner, const IndexSet& outer) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

inline bool is_proper_subset(const IndexSet& inner, const IndexSet& outer) {
    return inner.size() < outer.size() && is_subset(inner, outer);
}

inline bool sets_intersect(const IndexSet& a, const IndexSet& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else
            return true;
    }
    return false;
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> data, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace kdpmac
