#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bpmac/cipher.hpp"

namespace bpmac {

// The two independent 128-bit keys: k1 drives the bit tags (the universal
// hash), k2 drives the masking tags (the encrypted nonce).
struct KeyMaterial {
    PrfKey k1;
    PrfKey k2;

    // Throws std::invalid_argument if the keys are equal.
    KeyMaterial(const PrfKey& bit_tag_key, const PrfKey& masking_key);

    // Raw 32-byte form, k1 || k2. Throws FormatError on bad length or k1 == k2.
    static KeyMaterial from_bytes(std::span<const uint8_t> raw);
    std::array<uint8_t, 32> to_bytes() const;
};

// Fresh keys from the OS entropy source; k1 != k2 guaranteed.
KeyMaterial generate_keys();

// Scheme parameters. Messages are padded to a fixed bit length
// N = 8*M + 1: every message bit plus the single padding bit that marks the
// message end. Only whole-byte message lengths are accepted.
struct MacParams {
    uint8_t tag_len = 16;      // L, bytes, in [1,16]
    uint16_t max_msg_len = 1;  // M, bytes, >= 1

    uint32_t padded_bits() const { return 8u * max_msg_len + 1u; }  // N

    void validate() const;  // throws std::invalid_argument

    bool operator==(const MacParams&) const = default;
};

// An L-byte authentication tag, L in [1,16]. Unused trailing storage is kept
// zero so that equality is well defined. operator== is for tests and
// plumbing; verify() compares candidate tags in constant time.
class Tag {
public:
    Tag() = default;
    explicit Tag(std::span<const uint8_t> bytes);  // throws unless 1..16 bytes
    static Tag from_hex(std::string_view hex);

    std::span<const uint8_t> bytes() const { return {data_.data(), len_}; }
    uint8_t size() const { return len_; }
    std::string hex() const;

    bool operator==(const Tag&) const = default;

private:
    std::array<uint8_t, 16> data_{};
    uint8_t len_ = 0;
};

// Per-key precomputation product: the tag of the all-zeros padded message
// plus one bitflip entry per padded-message bit (N = 8M+1 entries; the entry
// at index 8M is only ever selected by the padding bit of a full-length
// message). Immutable after construction and safe to share across threads.
class PrecomputedTable {
public:
    PrecomputedTable(const MacParams& params, uint64_t key_id, std::vector<uint8_t> default_tag,
                     std::vector<uint8_t> bitflips);

    const MacParams& params() const { return params_; }
    uint64_t key_id() const { return key_id_; }
    uint32_t bit_count() const { return params_.padded_bits(); }

    std::span<const uint8_t> default_tag() const { return default_tag_; }

    // Entry i, L bytes: bit_tag(k1, i, 0) XOR bit_tag(k1, i, 1).
    std::span<const uint8_t> bitflip(uint32_t bit_index) const {
        return {bitflips_.data() + size_t(bit_index) * params_.tag_len, params_.tag_len};
    }

    bool operator==(const PrecomputedTable&) const = default;

private:
    MacParams params_;
    uint64_t key_id_ = 0;
    std::vector<uint8_t> default_tag_;  // L bytes
    std::vector<uint8_t> bitflips_;     // N * L bytes, entry i at offset i*L
};

// Memoizes the most recently encrypted nonce block so that consecutive
// short-tag nonces reuse one cipher output. Purely a cache: the tag bytes
// produced never depend on prior cache state. Single-writer; give each
// signing or verifying context its own instance.
struct MaskingCache {
    Block block{};
    std::optional<uint64_t> block_index;
};

// How many L-byte masking tags one 16-byte cipher output covers.
constexpr unsigned masking_tags_per_block(unsigned tag_len) { return 16u / tag_len; }

enum class SignMode : uint8_t {
    // Scan the message and XOR only the bitflip entries of set bits. Runtime
    // leaks the Hamming weight; fine for plaintext messages.
    branchy,
    // Touch every entry and select with a byte mask. Use when authenticating
    // ciphertext whose content must not leak through timing.
    constant_time,
};

// Fingerprint stored in tables so a table file can be matched against the
// key that produced it (does not reveal bit-tag material).
uint64_t table_key_id(const BlockCipher& k1_cipher);

// Offline phase: 2N cipher calls under k1. Deterministic; two builds from
// the same key and params are byte-identical.
PrecomputedTable build_table(const BlockCipher& k1_cipher, const MacParams& params);
PrecomputedTable build_table(const PrfKey& k1, const MacParams& params);

// L bytes of the encrypted-nonce stream for nonce n: slot (n mod
// tags_per_block) of E_k2(encode_nonce_block(n / tags_per_block)). Performs
// a cipher call only when the needed block is not the cached one.
Tag masking_tag(const BlockCipher& k2_cipher, uint64_t nonce, unsigned tag_len,
                MaskingCache& cache);

// Unmasked universal hash of the padded message: default tag, XOR the
// bitflip of every set message bit (MSB-first within each byte), XOR the
// padding-bit entry at index 8*|msg|. Throws if |msg| exceeds M.
Tag universal_hash(const PrecomputedTable& table, std::span<const uint8_t> msg,
                   SignMode mode = SignMode::branchy);

// universal_hash(msg) XOR masking_tag(nonce). With a warm cache this is one
// table scan and XORs, no cipher call.
Tag sign(const PrecomputedTable& table, const BlockCipher& k2_cipher, MaskingCache& cache,
         std::span<const uint8_t> msg, uint64_t nonce, SignMode mode = SignMode::branchy);

// Recomputes the tag and compares in constant time. Replay checking is the
// caller's separate step (ReplayWindow).
bool verify(const PrecomputedTable& table, const BlockCipher& k2_cipher, MaskingCache& cache,
            std::span<const uint8_t> msg, uint64_t nonce, const Tag& tag,
            SignMode mode = SignMode::branchy);

// Working-set size of one signing context: 8M+1 bitflip entries, the default
// tag, and one masking tag, each L bytes: (8M + 3) * L.
size_t memory_footprint(const MacParams& params);

// What storing both bit tags for every message bit would take: 2 * 8M tags
// of L bytes.
size_t naive_bit_tag_storage(const MacParams& params);

// Serialized table layout (bit-exact; lets the more powerful side of a link
// precompute tables for the constrained side):
//
//   magic "BPM1" | version u8 | tag_len u8 | max_msg_len u16 BE |
//   key_id 8 bytes BE | default_tag L bytes | (8M+1) bitflip entries, L each
std::vector<uint8_t> serialize_table(const PrecomputedTable& table);

// Throws FormatError on bad magic/version/params, truncation, or trailing
// bytes.
PrecomputedTable deserialize_table(std::span<const uint8_t> data);

inline size_t serialized_table_size(const MacParams& p) {
    return 16 + size_t(8 * p.max_msg_len + 2) * p.tag_len;
}

}  // namespace bpmac
