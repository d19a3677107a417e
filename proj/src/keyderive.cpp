#include "kdpmac/keyderive.hpp"

#include <algorithm>
#include <cstring>

#include "kdpmac/util.hpp"

namespace kdpmac {

KeyMaterial generate_key_material(int n, int element_len, const Bytes& seed) {
    if (n < 1) throw ValidationError("material size must be positive");
    if (element_len < 1) throw ValidationError("element length must be positive");
    if (seed.empty()) throw ValidationError("seed must be nonempty");

    Bytes keyed = seed;
    for (std::uint64_t v : {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(element_len)})
        for (int byte = 0; byte < 8; ++byte) keyed.push_back(static_cast<std::uint8_t>(v >> (8 * byte)));
    std::uint64_t state = fnv1a64(keyed);

    KeyMaterial material;
    material.element_len = element_len;
    material.elements.reserve(static_cast<std::size_t>(n));
    while (material.size() < n) {
        Bytes element(static_cast<std::size_t>(element_len));
        std::uint64_t word = 0;
        for (int t = 0; t < element_len; ++t) {
            if (t % 8 == 0) word = splitmix64(state);
            element[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(word >> (8 * (t % 8)));
        }
        if (all_zero(element)) continue;  // redraw; keeps the zero sentinel unambiguous
        material.elements.push_back(std::move(element));
    }
    return material;
}

std::string_view to_string(DeltaRule rule) {
    return rule == DeltaRule::containment ? "containment" : "intersection";
}

DeltaRule parse_delta_rule(std::string_view text) {
    if (text == "containment") return DeltaRule::containment;
    if (text == "intersection") return DeltaRule::intersection;
    throw ParseError("unknown delta rule '" + std::string(text) + "' (expected containment or intersection)");
}

IndexSet delta_set(const SSetTable& table, UserId i, UserId j, DeltaRule rule) {
    const IndexSet& si = table.sset(i);
    const IndexSet& sj = table.sset(j);
    bool take_difference = rule == DeltaRule::containment ? is_proper_subset(sj, si) : sets_intersect(si, sj);
    if (!take_difference) return {};
    return sorted_difference(si, sj);
}

Bytes pair_key(const KeyMaterial& material, const IndexSet& delta) {
    Bytes key(static_cast<std::size_t>(material.element_len), 0);
    for (int index : delta) {
        if (index < 1 || index > material.size())
            throw ValidationError("delta index " + std::to_string(index) + " outside material 1.." +
                                  std::to_string(material.size()));
        const Bytes& element = material.element(index);
        for (std::size_t t = 0; t < key.size(); ++t) key[t] ^= element[t];
    }
    return key;
}

std::size_t KeyMatrix::offset(UserId i, UserId j) const {
    if (i < 1 || i > user_count_ || j < 1 || j > user_count_)
        throw ValidationError("key matrix index (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
    return (static_cast<std::size_t>(i - 1) * user_count_ + (j - 1)) * element_len_;
}

bool KeyMatrix::is_zero(UserId i, UserId j) const { return all_zero(key(i, j)); }

int KeyMatrix::nonzero_count() const {
    int count = 0;
    for (UserId i = 1; i <= user_count_; ++i)
        for (UserId j = 1; j <= user_count_; ++j)
            if (!is_zero(i, j)) ++count;
    return count;
}

namespace {

void check_consistent(const KeyMaterial& material, const SSetTable& table) {
    if (material.size() != table.ground_size)
        throw ValidationError("material has " + std::to_string(material.size()) + " elements but ground set is " +
                              std::to_string(table.ground_size));
}

void fill_row(KeyMatrix& matrix, const KeyMaterial& material, const SSetTable& table, DeltaRule rule, UserId i) {
    for (UserId j = 1; j <= table.user_count(); ++j) {
        if (i == j) continue;
        Bytes key = pair_key(material, delta_set(table, i, j, rule));
        std::memcpy(matrix.key(i, j).data(), key.data(), key.size());
    }
}

}  // namespace

KeyMatrix build_key_matrix(const KeyMaterial& material, const SSetTable& table, DeltaRule rule) {
    check_consistent(material, table);
    const int m = table.user_count();
    KeyMatrix matrix(m, material.element_len);
#pragma omp parallel for schedule(dynamic)
    for (int i = 1; i <= m; ++i) fill_row(matrix, material, table, rule, i);
    return matrix;
}

KeyMatrix build_key_matrix_serial(const KeyMaterial& material, const SSetTable& table, DeltaRule rule) {
    check_consistent(material, table);
    KeyMatrix matrix(table.user_count(), material.element_len);
    for (UserId i = 1; i <= table.user_count(); ++i) fill_row(matrix, material, table, rule, i);
    return matrix;
}

std::vector<std::pair<UserId, UserId>> zero_key_collisions(const KeyMatrix& matrix, const SSetTable& table,
                                                           DeltaRule rule) {
    std::vector<std::pair<UserId, UserId>> collisions;
    for (UserId i = 1; i <= matrix.user_count(); ++i)
        for (UserId j = 1; j <= matrix.user_count(); ++j)
            if (matrix.is_zero(i, j) && !delta_set(table, i, j, rule).empty()) collisions.emplace_back(i, j);
    return collisions;
}

ScreenedKeys derive_keys_screened(const SSetTable& table, int element_len, const Bytes& seed, DeltaRule rule,
                                  int max_retries) {
    if (max_retries < 0) throw ValidationError("max_retries must be nonnegative");
    for (int retry = 0; retry <= max_retries; ++retry) {
        Bytes attempt_seed = seed;
        if (retry > 0) attempt_seed.push_back(static_cast<std::uint8_t>(retry));
        KeyMaterial material = generate_key_material(table.ground_size, element_len, attempt_seed);
        KeyMatrix matrix = build_key_matrix(material, table, rule);
        if (zero_key_collisions(matrix, table, rule).empty())
            return {std::move(material), std::move(matrix), retry + 1};
    }
    throw KeyGenError("zero-key collisions persisted through " + std::to_string(max_retries + 1) +
                      " material derivations");
}

}  // namespace kdpmac
