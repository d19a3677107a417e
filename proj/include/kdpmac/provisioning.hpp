#pragma once

#include <iosfwd>
#include <map>

#include "kdpmac/family.hpp"
#include "kdpmac/hierarchy.hpp"
#include "kdpmac/keyderive.hpp"
#include "kdpmac/types.hpp"

namespace kdpmac {

/// Everything one user receives from the distribution center. The S-set is
/// public; material and send keys are private. Receive keys are never stored:
/// the receiver folds them from its own material on demand. Send keys must be
/// provisioned explicitly because an upward delta set lies entirely outside
/// the sender's material.
struct UserBundle {
    UserId user = 0;
    int element_len = 0;
    IndexSet sset;
    std::map<int, Bytes> material;    // index -> element, exactly the indices of sset
    std::map<int, Bytes> send_keys;   // superior id -> key for the channel up to it

    bool operator==(const UserBundle&) const = default;
};

/// One bundle per user. Throws ValidationError on inconsistent inputs
/// (mismatched user counts, ground sizes, element lengths, or a zero key on
/// an allowed channel, which screening should have removed).
std::vector<UserBundle> make_bundles(const Hierarchy& h, const BlockFamily& family, const SSetTable& ssets,
                                     const KeyMaterial& material, const KeyMatrix& matrix);

/// Line-oriented bundle document:
///   bundle <user-id>
///   keylen <L>
///   sset <sorted comma-separated indices>
///   material <index> <hex>   (one per element, ascending index)
///   sendkey <superior-id> <hex>  (ascending id)
/// Hex is lowercase, exactly 2L digits per value.
void write_bundle(const UserBundle& bundle, std::ostream& out);
std::string bundle_to_string(const UserBundle& bundle);

/// Parses and validates a bundle document; throws ParseError on malformed
/// input and ValidationError when the document violates bundle invariants
/// (material indices != sset, wrong hex width, zero send key).
UserBundle read_bundle(std::istream& in);
UserBundle bundle_from_string(std::string_view text);

/// Fold the receive key for the channel from u_j using only the bundle's own
/// material. Equals the center's matrix entry (bundle.user, j); the all-zero
/// result marks a forbidden channel. Throws ValidationError if the delta set
/// needs an index the bundle does not hold (a corrupted bundle).
Bytes derive_receive_key(const UserBundle& bundle, const SSetTable& ssets, UserId j,
                         DeltaRule rule = DeltaRule::containment);

}  // namespace kdpmac
