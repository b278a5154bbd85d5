#pragma once

#include <cstdint>
#include <span>

#include "bpmac/mac.hpp"

namespace bpmac {

// Deliberately naive ground-truth implementation of the tag formula: no
// tables, no caches, one cipher call per padded-message bit. Used as the
// equivalence oracle for the optimized path; must stay slow and obvious.

// Unmasked hash of the padded message; N cipher calls under k1.
Tag hash_naive(const BlockCipher& k1_cipher, const MacParams& params,
               std::span<const uint8_t> msg);

// hash_naive XOR a directly computed masking tag; N + 1 cipher calls total.
Tag sign_naive(const BlockCipher& k1_cipher, const BlockCipher& k2_cipher,
               const MacParams& params, std::span<const uint8_t> msg, uint64_t nonce);

Tag sign_naive(const KeyMaterial& keys, const MacParams& params, std::span<const uint8_t> msg,
               uint64_t nonce);

}  // namespace bpmac
