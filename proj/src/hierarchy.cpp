#include "kdpmac/hierarchy.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <sstream>

namespace kdpmac {

void Hierarchy::check_user(UserId u, const char* role) const {
    if (u < 1 || u > user_count_)
        throw ValidationError(std::string(role) + " id " + std::to_string(u) + " out of range 1.." +
                              std::to_string(user_count_));
}

Hierarchy Hierarchy::from_edges(int user_count, std::vector<std::pair<UserId, UserId>> edges) {
    if (user_count < 1) throw ValidationError("user count must be positive");

    Hierarchy h;
    h.user_count_ = user_count;
    h.subordinates_.assign(user_count + 1, {});
    h.superiors_.assign(user_count + 1, {});

    std::set<std::pair<UserId, UserId>> seen;
    for (auto [sup, sub] : edges) {
        h.check_user(sup, "superior");
        h.check_user(sub, "subordinate");
        if (sup == sub) throw ValidationError("self-edge on user " + std::to_string(sup));
        if (!seen.insert({sup, sub}).second)
            throw ValidationError("duplicate edge " + std::to_string(sup) + " -> " + std::to_string(sub));
        h.subordinates_[sup].push_back(sub);
        h.superiors_[sub].push_back(sup);
    }
    h.edges_ = std::move(edges);
    for (int u = 1; u <= user_count; ++u) {
        std::sort(h.subordinates_[u].begin(), h.subordinates_[u].end());
        std::sort(h.superiors_[u].begin(), h.superiors_[u].end());
    }

    // Generation = distance above the deepest subordinate; leaves are 0.
    // Computed by Kahn peeling from the leaves, which also detects cycles.
    std::vector<int> pending(user_count + 1, 0);
    for (int u = 1; u <= user_count; ++u) pending[u] = static_cast<int>(h.subordinates_[u].size());
    std::vector<int> generation(user_count + 1, 0);
    std::vector<UserId> frontier;
    for (int u = 1; u <= user_count; ++u)
        if (pending[u] == 0) frontier.push_back(u);
    int emitted = 0;
    while (!frontier.empty()) {
        emitted += static_cast<int>(frontier.size());
        std::vector<UserId> next;
        for (UserId u : frontier) {
            for (UserId sup : h.superiors_[u]) {
                generation[sup] = std::max(generation[sup], generation[u] + 1);
                if (--pending[sup] == 0) next.push_back(sup);
            }
        }
        frontier = std::move(next);
    }
    if (emitted != user_count) throw ValidationError("cycle detected in hierarchy edges");

    h.order_.resize(user_count);
    std::iota(h.order_.begin(), h.order_.end(), 1);
    std::stable_sort(h.order_.begin(), h.order_.end(),
                     [&](UserId a, UserId b) { return generation[a] < generation[b] || (generation[a] == generation[b] && a < b); });

    // Dominance closure: walk leaves-to-root OR-ing subordinate rows.
    h.dominance_.assign(static_cast<std::size_t>(user_count) * user_count, 0);
    for (UserId u : h.order_) {
        auto* row = &h.dominance_[static_cast<std::size_t>(u - 1) * user_count];
        for (UserId sub : h.subordinates_[u]) {
            row[sub - 1] = 1;
            const auto* sub_row = &h.dominance_[static_cast<std::size_t>(sub - 1) * user_count];
            for (int t = 0; t < user_count; ++t) row[t] |= sub_row[t];
        }
    }
    return h;
}

const std::vector<UserId>& Hierarchy::subordinates(UserId u) const {
    check_user(u, "user");
    return subordinates_[u];
}

const std::vector<UserId>& Hierarchy::superiors(UserId u) const {
    check_user(u, "user");
    return superiors_[u];
}

bool Hierarchy::dominates(UserId i, UserId j) const {
    check_user(i, "user");
    check_user(j, "user");
    return dominance_[static_cast<std::size_t>(i - 1) * user_count_ + (j - 1)] != 0;
}

bool Hierarchy::incomparable(UserId i, UserId j) const {
    if (i == j) throw ValidationError("incomparable() is undefined for i == j");
    return !dominates(i, j) && !dominates(j, i);
}

Hierarchy parse_hierarchy(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool have_users = false;
    int user_count = 0;
    std::vector<std::pair<UserId, UserId>> edges;

    auto parse_int = [&](const std::string& tok) {
        int value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || ptr != tok.data() + tok.size())
            throw ParseError(line_no, "expected a decimal integer, got '" + tok + "'");
        return value;
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (!have_users) {
            if (word != "users") throw ParseError(line_no, "expected 'users <m>' first, got '" + word + "'");
            std::string m_tok;
            if (!(ls >> m_tok)) throw ParseError(line_no, "missing user count");
            user_count = parse_int(m_tok);
            if (user_count < 1) throw ParseError(line_no, "user count must be positive");
            have_users = true;
        } else if (word == "edge") {
            std::string a_tok, b_tok;
            if (!(ls >> a_tok >> b_tok)) throw ParseError(line_no, "expected 'edge <superior> <subordinate>'");
            edges.emplace_back(parse_int(a_tok), parse_int(b_tok));
        } else {
            throw ParseError(line_no, "unknown directive '" + word + "'");
        }
        std::string extra;
        if (ls >> extra) throw ParseError(line_no, "trailing tokens after directive");
    }
    if (!have_users) throw ParseError("document contains no 'users' line");
    try {
        return Hierarchy::from_edges(user_count, std::move(edges));
    } catch (const ValidationError& e) {
        throw ParseError(std::string("invalid hierarchy: ") + e.what());
    }
}

}  // namespace kdpmac
