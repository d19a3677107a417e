#include "kdpmac/state_files.hpp"

#include <charconv>
#include <cstring>
#include <ostream>
#include <sstream>

#include "kdpmac/util.hpp"

namespace kdpmac {

namespace {

int parse_int_tok(const std::string& tok, int line_no) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(line_no, "expected a decimal integer, got '" + tok + "'");
    return value;
}

}  // namespace

void write_ssets(const SSetTable& table, std::ostream& out) {
    out << "users " << table.user_count() << "\n";
    out << "ground " << table.ground_size << "\n";
    for (UserId u = 1; u <= table.user_count(); ++u) {
        out << "sset " << u << " ";
        const IndexSet& s = table.sset(u);
        out << index_set_to_string(s) << "\n";
    }
}

SSetTable read_ssets(std::istream& in) {
    SSetTable table;
    std::string line;
    int line_no = 0;
    int users = 0;
    bool have_users = false, have_ground = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        std::string a, b;
        if (word == "users") {
            if (!(ls >> a)) throw ParseError(line_no, "missing user count");
            users = parse_int_tok(a, line_no);
            if (users < 1) throw ParseError(line_no, "user count must be positive");
            table.ssets.assign(static_cast<std::size_t>(users), {});
            have_users = true;
        } else if (word == "ground") {
            if (!(ls >> a)) throw ParseError(line_no, "missing ground size");
            table.ground_size = parse_int_tok(a, line_no);
            have_ground = true;
        } else if (word == "sset") {
            if (!have_users) throw ParseError(line_no, "sset before users");
            if (!(ls >> a >> b)) throw ParseError(line_no, "expected 'sset <id> <indices>'");
            int u = parse_int_tok(a, line_no);
            if (u < 1 || u > users) throw ParseError(line_no, "user id out of range");
            table.ssets[static_cast<std::size_t>(u) - 1] = index_set_from_string(b);
        } else {
            throw ParseError(line_no, "unknown directive '" + word + "'");
        }
    }
    if (!have_users || !have_ground) throw ParseError("S-set document is missing its header");
    for (const IndexSet& s : table.ssets)
        for (int index : s)
            if (index < 1 || index > table.ground_size)
                throw ParseError("S-set index outside the declared ground set");
    return table;
}

void write_key_matrix(const KeyMatrix& matrix, DeltaRule rule, std::ostream& out) {
    out << "users " << matrix.user_count() << "\n";
    out << "keylen " << matrix.element_len() << "\n";
    out << "rule " << to_string(rule) << "\n";
    for (UserId i = 1; i <= matrix.user_count(); ++i)
        for (UserId j = 1; j <= matrix.user_count(); ++j)
            if (!matrix.is_zero(i, j)) out << "key " << i << " " << j << " " << to_hex(matrix.key(i, j)) << "\n";
}

StoredKeyMatrix read_key_matrix(std::istream& in) {
    StoredKeyMatrix stored;
    std::string line;
    int line_no = 0;
    int users = 0, keylen = 0;
    bool have_users = false, have_keylen = false, have_rule = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word == "users") {
            std::string tok;
            if (!(ls >> tok)) throw ParseError(line_no, "missing user count");
            users = parse_int_tok(tok, line_no);
            if (users < 1) throw ParseError(line_no, "user count must be positive");
            have_users = true;
        } else if (word == "keylen") {
            std::string tok;
            if (!(ls >> tok)) throw ParseError(line_no, "missing key length");
            keylen = parse_int_tok(tok, line_no);
            if (keylen < 1) throw ParseError(line_no, "key length must be positive");
            have_keylen = true;
        } else if (word == "rule") {
            std::string tok;
            if (!(ls >> tok)) throw ParseError(line_no, "missing rule name");
            stored.rule = parse_delta_rule(tok);
            have_rule = true;
        } else if (word == "key") {
            if (!have_users || !have_keylen) throw ParseError(line_no, "key entry before header");
            if (stored.matrix.user_count() == 0) stored.matrix = KeyMatrix(users, keylen);
            std::string i_tok, j_tok, hex_tok;
            if (!(ls >> i_tok >> j_tok >> hex_tok)) throw ParseError(line_no, "expected 'key <i> <j> <hex>'");
            int i = parse_int_tok(i_tok, line_no);
            int j = parse_int_tok(j_tok, line_no);
            if (i < 1 || i > users || j < 1 || j > users) throw ParseError(line_no, "key entry id out of range");
            Bytes value = from_hex(hex_tok);
            if (value.size() != static_cast<std::size_t>(keylen))
                throw ParseError(line_no, "key entry is not keylen bytes");
            std::memcpy(stored.matrix.key(i, j).data(), value.data(), value.size());
        } else {
            throw ParseError(line_no, "unknown directive '" + word + "'");
        }
    }
    if (!have_users || !have_keylen || !have_rule) throw ParseError("key matrix document is missing its header");
    if (stored.matrix.user_count() == 0) stored.matrix = KeyMatrix(users, keylen);
    return stored;
}

}  // namespace kdpmac
