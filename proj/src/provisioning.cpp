#include "kdpmac/provisioning.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

#include "kdpmac/util.hpp"

namespace kdpmac {

std::vector<UserBundle> make_bundles(const Hierarchy& h, const BlockFamily& family, const SSetTable& ssets,
                                     const KeyMaterial& material, const KeyMatrix& matrix) {
    const int m = h.user_count();
    if (family.block_count() != m || ssets.user_count() != m || matrix.user_count() != m)
        throw ValidationError("bundle inputs disagree on user count");
    if (family.ground_size != ssets.ground_size || material.size() != ssets.ground_size)
        throw ValidationError("bundle inputs disagree on ground size");
    if (matrix.element_len() != material.element_len)
        throw ValidationError("bundle inputs disagree on element length");

    std::vector<UserBundle> bundles;
    bundles.reserve(static_cast<std::size_t>(m));
    for (UserId u = 1; u <= m; ++u) {
        UserBundle b;
        b.user = u;
        b.element_len = material.element_len;
        b.sset = ssets.sset(u);
        for (int index : b.sset) b.material[index] = material.element(index);
        for (UserId sup = 1; sup <= m; ++sup) {
            if (!h.dominates(sup, u)) continue;
            auto key = matrix.key(sup, u);
            if (all_zero(key))
                throw ValidationError("allowed channel " + std::to_string(u) + " -> " + std::to_string(sup) +
                                      " has a zero key; matrix was not screened");
            b.send_keys[sup] = Bytes(key.begin(), key.end());
        }
        bundles.push_back(std::move(b));
    }
    return bundles;
}

void write_bundle(const UserBundle& bundle, std::ostream& out) {
    out << "bundle " << bundle.user << "\n";
    out << "keylen " << bundle.element_len << "\n";
    out << "sset " << index_set_to_string(bundle.sset) << "\n";
    for (const auto& [index, element] : bundle.material)
        out << "material " << index << " " << to_hex(element) << "\n";
    for (const auto& [superior, key] : bundle.send_keys)
        out << "sendkey " << superior << " " << to_hex(key) << "\n";
}

std::string bundle_to_string(const UserBundle& bundle) {
    std::ostringstream out;
    write_bundle(bundle, out);
    return out.str();
}

namespace {

int parse_id(const std::string& tok, int line_no) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line_no, "expected a decimal integer, got '" + tok + "'");
    return value;
}

Bytes parse_key_hex(const std::string& tok, int element_len, int line_no) {
    if (tok.size() != static_cast<std::size_t>(2 * element_len))
        throw ParseError(line_no, "expected " + std::to_string(2 * element_len) + " hex digits, got " +
                                      std::to_string(tok.size()));
    for (char c : tok)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
            throw ParseError(line_no, "bad lowercase hex in '" + tok + "'");
    return from_hex(tok);
}

}  // namespace

UserBundle read_bundle(std::istream& in) {
    UserBundle b;
    std::string line;
    int line_no = 0;
    bool have_header = false, have_keylen = false, have_sset = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word == "bundle") {
            if (have_header) throw ParseError(line_no, "duplicate bundle header");
            std::string tok;
            if (!(ls >> tok)) throw ParseError(line_no, "missing user id");
            b.user = parse_id(tok, line_no);
            if (b.user < 1) throw ParseError(line_no, "user id must be positive");
            have_header = true;
        } else if (!have_header) {
            throw ParseError(line_no, "expected 'bundle <user-id>' first");
        } else if (word == "keylen") {
            std::string tok;
            if (!(ls >> tok)) throw ParseError(line_no, "missing key length");
            b.element_len = parse_id(tok, line_no);
            if (b.element_len < 1) throw ParseError(line_no, "key length must be positive");
            have_keylen = true;
        } else if (word == "sset") {
            std::string tok;
            if (!(ls >> tok)) throw ParseError(line_no, "missing index list");
            b.sset = index_set_from_string(tok);
            have_sset = true;
        } else if (word == "material") {
            if (!have_keylen) throw ParseError(line_no, "material before keylen");
            std::string idx_tok, hex_tok;
            if (!(ls >> idx_tok >> hex_tok)) throw ParseError(line_no, "expected 'material <index> <hex>'");
            int index = parse_id(idx_tok, line_no);
            if (b.material.count(index)) throw ParseError(line_no, "duplicate material index " + idx_tok);
            b.material[index] = parse_key_hex(hex_tok, b.element_len, line_no);
        } else if (word == "sendkey") {
            if (!have_keylen) throw ParseError(line_no, "sendkey before keylen");
            std::string id_tok, hex_tok;
            if (!(ls >> id_tok >> hex_tok)) throw ParseError(line_no, "expected 'sendkey <superior-id> <hex>'");
            int superior = parse_id(id_tok, line_no);
            if (b.send_keys.count(superior)) throw ParseError(line_no, "duplicate sendkey for " + id_tok);
            b.send_keys[superior] = parse_key_hex(hex_tok, b.element_len, line_no);
        } else {
            throw ParseError(line_no, "unknown directive '" + word + "'");
        }
        std::string extra;
        if (ls >> extra) throw ParseError(line_no, "trailing tokens after directive");
    }
    if (!have_header) throw ParseError("document contains no bundle header");
    if (!have_keylen) throw ParseError("bundle is missing its keylen line");
    if (!have_sset) throw ParseError("bundle is missing its sset line");

    IndexSet material_indices;
    for (const auto& [index, element] : b.material) material_indices.push_back(index);
    if (material_indices != b.sset)
        throw ValidationError("bundle material indices do not match the declared sset");
    for (const auto& [superior, key] : b.send_keys) {
        if (superior == b.user) throw ValidationError("bundle stores a send key for itself");
        if (all_zero(key)) throw ValidationError("bundle stores a zero send key");
    }
    return b;
}

UserBundle bundle_from_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_bundle(in);
}

Bytes derive_receive_key(const UserBundle& bundle, const SSetTable& ssets, UserId j, DeltaRule rule) {
    IndexSet delta = delta_set(ssets, bundle.user, j, rule);
    Bytes key(static_cast<std::size_t>(bundle.element_len), 0);
    for (int index : delta) {
        auto it = bundle.material.find(index);
        if (it == bundle.material.end())
            throw ValidationError("bundle for user " + std::to_string(bundle.user) + " lacks material index " +
                                  std::to_string(index));
        for (std::size_t t = 0; t < key.size(); ++t) key[t] ^= it->second[t];
    }
    return key;
}

}  // namespace kdpmac
