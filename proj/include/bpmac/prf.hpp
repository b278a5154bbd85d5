#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bpmac/cipher.hpp"

namespace bpmac {

// Canonical encoding of (bit index, bit value) into a cipher block. This
// fixed layout is the interoperability contract for all precomputed
// material exchanged between parties:
//
//   bytes 0..7   bit index, 64-bit big-endian
//   bytes 8..14  zero
//   byte  15     bit value (0 or 1)
Block encode_bit_index(uint64_t index, bool bit);

// Nonce-side encoding for masking tags: same layout with byte 15 fixed to 0,
// i.e. the block counter occupies bytes 0..7.
Block encode_nonce_block(uint64_t block_index);

// Leading `tag_len` bytes of E_k1(encode_bit_index(index, bit)).
// `out.size()` selects the tag length and must be in [1,16].
void bit_tag(const BlockCipher& k1, uint64_t index, bool bit, std::span<uint8_t> out);

std::vector<uint8_t> bit_tag(const PrfKey& k1, uint64_t index, bool bit, unsigned tag_len);

}  // namespace bpmac
