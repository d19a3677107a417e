#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "kdpmac/family.hpp"
#include "kdpmac/provisioning.hpp"
#include "kdpmac/types.hpp"

namespace kdpmac {

/// Demo-grade cipher: repeating-key XOR of the payload with the key bytes.
/// Linearly malleable and trivially breakable; it exists to demonstrate key
/// establishment, not to protect anything. A zero key is refused before the
/// cipher runs (ZeroKeyError), since it encodes "no channel".
Bytes encrypt(std::span<const std::uint8_t> key, std::span<const std::uint8_t> plaintext);
Bytes decrypt(std::span<const std::uint8_t> key, std::span<const std::uint8_t> ciphertext);

/// Wire frame for the in-process bus: from and to as 2-byte big-endian ids,
/// payload length as 4-byte big-endian, then the ciphertext.
struct ChannelMessage {
    UserId from = 0;
    UserId to = 0;
    Bytes ciphertext;

    bool operator==(const ChannelMessage&) const = default;
};

Bytes encode_message(const ChannelMessage& msg);
ChannelMessage decode_message(std::span<const std::uint8_t> wire);

struct ScenarioStep {
    UserId from = 0;
    UserId to = 0;
    Bytes payload;
    bool expect_ok = false;
};

struct Scenario {
    std::vector<ScenarioStep> steps;
};

/// Scenario document: '#' comments and lines
///   send <from> <to> <"text"|0xHEX> expect <ok|forbidden>
/// Text payloads support \" and \\ escapes; 0x with no digits is an empty
/// payload.
Scenario parse_scenario(std::string_view text);

enum class Outcome {
    ok,         // delivered and decrypted to the original payload
    forbidden,  // refused for lack of a usable key on either side
    corrupt,    // delivered but decryption did not match (never happens with honest bundles)
};

std::string_view to_string(Outcome outcome);

struct TranscriptStep {
    int index = 0;  // 1-based step number
    UserId from = 0;
    UserId to = 0;
    Outcome outcome = Outcome::forbidden;
    bool pass = false;  // outcome matched the scenario's expectation
};

struct Transcript {
    std::vector<TranscriptStep> steps;
    bool all_pass = true;
};

/// Execute the scenario over the in-process bus. The sender consults only its
/// provisioned send keys; the receiver folds its receive key from its own
/// material. Expectation mismatches are recorded, never dropped.
Transcript run_scenario(const std::vector<UserBundle>& bundles, const SSetTable& ssets, const Scenario& scenario,
                        DeltaRule rule = DeltaRule::containment);

/// One line per step: "step <n> <from>-><to> <outcome> <pass|fail>".
void write_transcript(const Transcript& transcript, std::ostream& out);

}  // namespace kdpmac
