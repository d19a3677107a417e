#include "kdpmac/simulator.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

#include "kdpmac/util.hpp"

namespace kdpmac {

namespace {

Bytes xor_stream(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data) {
    if (key.empty() || all_zero(key)) throw ZeroKeyError("refusing to use a zero key on a forbidden channel");
    Bytes out(data.begin(), data.end());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] ^= key[t % key.size()];
    return out;
}

void put_be(Bytes& out, std::uint32_t value, int width) {
    for (int byte = width - 1; byte >= 0; --byte) out.push_back(static_cast<std::uint8_t>(value >> (8 * byte)));
}

std::uint32_t get_be(std::span<const std::uint8_t> in, std::size_t pos, int width) {
    std::uint32_t value = 0;
    for (int byte = 0; byte < width; ++byte) value = value << 8 | in[pos + static_cast<std::size_t>(byte)];
    return value;
}

}  // namespace

Bytes encrypt(std::span<const std::uint8_t> key, std::span<const std::uint8_t> plaintext) {
    return xor_stream(key, plaintext);
}

Bytes decrypt(std::span<const std::uint8_t> key, std::span<const std::uint8_t> ciphertext) {
    return xor_stream(key, ciphertext);
}

Bytes encode_message(const ChannelMessage& msg) {
    if (msg.from < 1 || msg.from > 0xffff || msg.to < 1 || msg.to > 0xffff)
        throw ValidationError("message ids must fit 16 bits");
    Bytes wire;
    wire.reserve(8 + msg.ciphertext.size());
    put_be(wire, static_cast<std::uint32_t>(msg.from), 2);
    put_be(wire, static_cast<std::uint32_t>(msg.to), 2);
    put_be(wire, static_cast<std::uint32_t>(msg.ciphertext.size()), 4);
    wire.insert(wire.end(), msg.ciphertext.begin(), msg.ciphertext.end());
    return wire;
}

ChannelMessage decode_message(std::span<const std::uint8_t> wire) {
    if (wire.size() < 8) throw ParseError("message shorter than its 8-byte header");
    ChannelMessage msg;
    msg.from = static_cast<UserId>(get_be(wire, 0, 2));
    msg.to = static_cast<UserId>(get_be(wire, 2, 2));
    std::uint32_t length = get_be(wire, 4, 4);
    if (wire.size() != 8 + static_cast<std::size_t>(length))
        throw ParseError("message length field disagrees with payload size");
    msg.ciphertext.assign(wire.begin() + 8, wire.end());
    return msg;
}

namespace {

Bytes parse_payload(const std::string& raw, int line_no) {
    if (raw.size() >= 2 && raw.front() == '"') {
        // quoted text with \" and \\ escapes
        Bytes out;
        bool closed = false;
        for (std::size_t t = 1; t < raw.size(); ++t) {
            char c = raw[t];
            if (c == '\\' && t + 1 < raw.size()) {
                out.push_back(static_cast<std::uint8_t>(raw[++t]));
            } else if (c == '"') {
                if (t + 1 != raw.size()) throw ParseError(line_no, "text after closing quote");
                closed = true;
            } else {
                out.push_back(static_cast<std::uint8_t>(c));
            }
        }
        if (!closed) throw ParseError(line_no, "unterminated quoted payload");
        return out;
    }
    if (raw.rfind("0x", 0) == 0 || raw.rfind("0X", 0) == 0) return from_hex(raw.substr(2));
    throw ParseError(line_no, "payload must be \"text\" or 0xHEX, got '" + raw + "'");
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    Scenario scenario;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word != "send") throw ParseError(line_no, "expected 'send', got '" + word + "'");
        ScenarioStep step;
        std::string from_tok, to_tok, payload_tok, expect_word, expect_tok;
        if (!(ls >> from_tok >> to_tok)) throw ParseError(line_no, "expected 'send <from> <to> ...'");
        auto parse_user = [&](const std::string& tok) {
            int value = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 1)
                throw ParseError(line_no, "bad user id '" + tok + "'");
            return value;
        };
        step.from = parse_user(from_tok);
        step.to = parse_user(to_tok);
        // the payload token may contain spaces when quoted
        std::string rest;
        std::getline(ls, rest);
        std::size_t pos = rest.find_first_not_of(" \t");
        if (pos == std::string::npos) throw ParseError(line_no, "missing payload");
        std::size_t expect_at = rest.rfind(" expect ");
        if (expect_at == std::string::npos || expect_at < pos)
            throw ParseError(line_no, "missing 'expect <ok|forbidden>'");
        payload_tok = rest.substr(pos, expect_at - pos);
        while (!payload_tok.empty() && (payload_tok.back() == ' ' || payload_tok.back() == '\t'))
            payload_tok.pop_back();
        std::istringstream es(rest.substr(expect_at + 8));
        if (!(es >> expect_tok)) throw ParseError(line_no, "missing expectation");
        std::string extra;
        if (es >> extra) throw ParseError(line_no, "trailing tokens after expectation");
        if (expect_tok == "ok")
            step.expect_ok = true;
        else if (expect_tok == "forbidden")
            step.expect_ok = false;
        else
            throw ParseError(line_no, "expectation must be ok or forbidden, got '" + expect_tok + "'");
        step.payload = parse_payload(payload_tok, line_no);
        scenario.steps.push_back(std::move(step));
    }
    return scenario;
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::ok: return "ok";
        case Outcome::forbidden: return "forbidden";
        case Outcome::corrupt: return "corrupt";
    }
    return "?";
}

Transcript run_scenario(const std::vector<UserBundle>& bundles, const SSetTable& ssets, const Scenario& scenario,
                        DeltaRule rule) {
    const int m = ssets.user_count();
    std::vector<const UserBundle*> by_user(static_cast<std::size_t>(m) + 1, nullptr);
    for (const UserBundle& b : bundles) {
        if (b.user < 1 || b.user > m) throw ValidationError("bundle user id out of range");
        by_user[b.user] = &b;
    }

    Transcript transcript;
    int index = 0;
    for (const ScenarioStep& step : scenario.steps) {
        ++index;
        if (step.from < 1 || step.from > m || !by_user[step.from] || step.to < 1 || step.to > m ||
            !by_user[step.to])
            throw ValidationError("scenario step " + std::to_string(index) + " references an unknown user");

        const UserBundle& sender = *by_user[step.from];
        const UserBundle& receiver = *by_user[step.to];
        Outcome outcome;
        // Send side: only the provisioned send keys, never the material.
        auto key_it = sender.send_keys.find(step.to);
        if (key_it == sender.send_keys.end() || all_zero(key_it->second)) {
            outcome = Outcome::forbidden;
        } else {
            Bytes wire = encode_message({step.from, step.to, encrypt(key_it->second, step.payload)});
            ChannelMessage delivered = decode_message(wire);
            // Receive side: fold the key from own material, ignore send keys.
            Bytes receive_key = derive_receive_key(receiver, ssets, delivered.from, rule);
            if (all_zero(receive_key)) {
                outcome = Outcome::forbidden;
            } else {
                Bytes plain = decrypt(receive_key, delivered.ciphertext);
                outcome = plain == step.payload ? Outcome::ok : Outcome::corrupt;
            }
        }
        bool pass = (outcome == Outcome::ok) == step.expect_ok && outcome != Outcome::corrupt;
        transcript.steps.push_back({index, step.from, step.to, outcome, pass});
        if (!pass) transcript.all_pass = false;
    }
    return transcript;
}

void write_transcript(const Transcript& transcript, std::ostream& out) {
    for (const TranscriptStep& step : transcript.steps)
        out << "step " << step.index << " " << step.from << "->" << step.to << " " << to_string(step.outcome)
            << " " << (step.pass ? "pass" : "fail") << "\n";
}

}  // namespace kdpmac
