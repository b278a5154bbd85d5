#include "bpmac/mac.hpp"

#include <cstring>
#include <stdexcept>

#include "bpmac/bytes.hpp"
#include "bpmac/errors.hpp"
#include "bpmac/prf.hpp"

namespace bpmac {

namespace {

inline void xor_bytes(uint8_t* acc, const uint8_t* src, size_t len) {
    for (size_t i = 0; i < len; ++i) acc[i] ^= src[i];
}

void check_msg_len(const MacParams& p, size_t msg_len) {
    if (msg_len > p.max_msg_len) throw std::invalid_argument("message longer than table maximum");
}

// Fixed-width masked XOR in word-sized chunks: one 32-bit op for 4-byte
// tags, two 64-bit ops for 16-byte tags. memcpy keeps the unaligned
// word accesses well defined; an all-ones mask is the plain XOR case.
template <unsigned kTagLen>
inline void xor_entry(uint8_t* acc, const uint8_t* src, uint8_t byte_mask) {
    const uint64_t spread = 0x0101010101010101ull * byte_mask;
    unsigned i = 0;
    for (; i + 8 <= kTagLen; i += 8) {
        uint64_t a, s;
        std::memcpy(&a, acc + i, 8);
        std::memcpy(&s, src + i, 8);
        a ^= s & spread;
        std::memcpy(acc + i, &a, 8);
    }
    if constexpr (kTagLen % 8 >= 4) {
        uint32_t a, s;
        std::memcpy(&a, acc + i, 4);
        std::memcpy(&s, src + i, 4);
        a ^= s & uint32_t(spread);
        std::memcpy(acc + i, &a, 4);
        i += 4;
    }
    if constexpr (kTagLen % 4 != 0) {
        for (; i < kTagLen; ++i) acc[i] ^= uint8_t(src[i] & byte_mask);
    }
}

template <unsigned kTagLen>
void scan_message(const uint8_t* flips, std::span<const uint8_t> msg, SignMode mode,
                  uint8_t* acc) {
    if (mode == SignMode::branchy) {
        for (size_t i = 0; i < msg.size(); ++i) {
            const uint8_t byte = msg[i];
            const uint8_t* entry = flips + i * 8 * kTagLen;
            for (unsigned j = 0; j < 8; ++j, entry += kTagLen) {
                if (byte & (0x80u >> j)) xor_entry<kTagLen>(acc, entry, 0xff);
            }
        }
    } else {
        for (size_t i = 0; i < msg.size(); ++i) {
            const uint8_t byte = msg[i];
            const uint8_t* entry = flips + i * 8 * kTagLen;
            for (unsigned j = 0; j < 8; ++j, entry += kTagLen) {
                xor_entry<kTagLen>(acc, entry, uint8_t(-int8_t((byte >> (7 - j)) & 1u)));
            }
        }
    }
}

void scan_message_any(const uint8_t* flips, std::span<const uint8_t> msg, SignMode mode,
                      unsigned tag_len, uint8_t* acc) {
    if (mode == SignMode::branchy) {
        for (size_t i = 0; i < msg.size(); ++i) {
            const uint8_t byte = msg[i];
            const uint8_t* entry = flips + i * 8 * tag_len;
            for (unsigned j = 0; j < 8; ++j, entry += tag_len) {
                if (byte & (0x80u >> j)) xor_bytes(acc, entry, tag_len);
            }
        }
    } else {
        for (size_t i = 0; i < msg.size(); ++i) {
            const uint8_t byte = msg[i];
            const uint8_t* entry = flips + i * 8 * tag_len;
            for (unsigned j = 0; j < 8; ++j, entry += tag_len) {
                const uint8_t mask = uint8_t(-int8_t((byte >> (7 - j)) & 1u));
                for (unsigned b = 0; b < tag_len; ++b) acc[b] ^= uint8_t(entry[b] & mask);
            }
        }
    }
}

// XORs the padded-message hash into acc[0..L).
void hash_into(const PrecomputedTable& table, std::span<const uint8_t> msg, SignMode mode,
               uint8_t* acc) {
    const unsigned L = table.params().tag_len;
    const uint8_t* flips = table.bitflip(0).data();

    xor_bytes(acc, table.default_tag().data(), L);

    switch (L) {
        case 4: scan_message<4>(flips, msg, mode, acc); break;
        case 8: scan_message<8>(flips, msg, mode, acc); break;
        case 12: scan_message<12>(flips, msg, mode, acc); break;
        case 16: scan_message<16>(flips, msg, mode, acc); break;
        default: scan_message_any(flips, msg, mode, L, acc); break;
    }

    // Padding: the single 1-bit right after the message end.
    xor_bytes(acc, flips + msg.size() * 8 * L, L);
}

// XORs the masking tag for `nonce` into acc[0..L), refreshing the cached
// block only when a different one is needed.
void masking_into(const BlockCipher& k2, uint64_t nonce, unsigned tag_len, MaskingCache& cache,
                  uint8_t* acc) {
    const unsigned per_block = masking_tags_per_block(tag_len);
    const uint64_t block_index = nonce / per_block;
    if (!cache.block_index || *cache.block_index != block_index) {
        cache.block = k2.encrypt(encode_nonce_block(block_index));
        cache.block_index = block_index;
    }
    xor_bytes(acc, cache.block.data() + size_t(nonce % per_block) * tag_len, tag_len);
}

}  // namespace

KeyMaterial::KeyMaterial(const PrfKey& bit_tag_key, const PrfKey& masking_key)
    : k1(bit_tag_key), k2(masking_key) {
    if (k1 == k2) throw std::invalid_argument("k1 and k2 must be independent keys");
}

KeyMaterial KeyMaterial::from_bytes(std::span<const uint8_t> raw) {
    if (raw.size() != 32) throw FormatError("key material must be exactly 32 bytes (k1 || k2)");
    PrfKey k1 = PrfKey::from(raw.subspan(0, 16));
    PrfKey k2 = PrfKey::from(raw.subspan(16, 16));
    if (k1 == k2) throw FormatError("key material invalid: k1 equals k2");
    return {k1, k2};
}

std::array<uint8_t, 32> KeyMaterial::to_bytes() const {
    std::array<uint8_t, 32> out;
    std::memcpy(out.data(), k1.bytes.data(), 16);
    std::memcpy(out.data() + 16, k2.bytes.data(), 16);
    return out;
}

KeyMaterial generate_keys() {
    PrfKey k1, k2;
    fill_random(k1.bytes);
    do {
        fill_random(k2.bytes);
    } while (k2 == k1);
    return {k1, k2};
}

void MacParams::validate() const {
    if (tag_len < 1 || tag_len > 16) throw std::invalid_argument("tag_len must be in [1,16]");
    if (max_msg_len < 1) throw std::invalid_argument("max_msg_len must be >= 1");
}

Tag::Tag(std::span<const uint8_t> bytes) {
    if (bytes.empty() || bytes.size() > 16)
        throw std::invalid_argument("tag must be 1..16 bytes long");
    std::copy(bytes.begin(), bytes.end(), data_.begin());
    len_ = uint8_t(bytes.size());
}

Tag Tag::from_hex(std::string_view hex) {
    auto raw = bpmac::from_hex(hex);
    if (raw.empty() || raw.size() > 16) throw FormatError("tag must be 1..16 bytes long");
    return Tag(raw);
}

std::string Tag::hex() const { return to_hex(bytes()); }

PrecomputedTable::PrecomputedTable(const MacParams& params, uint64_t key_id,
                                   std::vector<uint8_t> default_tag, std::vector<uint8_t> bitflips)
    : params_(params),
      key_id_(key_id),
      default_tag_(std::move(default_tag)),
      bitflips_(std::move(bitflips)) {
    params_.validate();
    if (default_tag_.size() != params_.tag_len)
        throw std::invalid_argument("default tag length does not match params");
    if (bitflips_.size() != size_t(params_.padded_bits()) * params_.tag_len)
        throw std::invalid_argument("bitflip payload length does not match params");
}

uint64_t table_key_id(const BlockCipher& k1_cipher) {
    // A block that no bit-index encoding can produce (byte 15 is never 0xff).
    Block probe;
    probe.fill(0xff);
    Block out = k1_cipher.encrypt(probe);
    return load_be64(out.data());
}

PrecomputedTable build_table(const BlockCipher& k1_cipher, const MacParams& params) {
    params.validate();
    const unsigned L = params.tag_len;
    const uint32_t n_bits = params.padded_bits();

    std::vector<uint8_t> default_tag(L, 0);
    std::vector<uint8_t> bitflips(size_t(n_bits) * L);

    for (uint32_t i = 0; i < n_bits; ++i) {
        Block zero_tag = k1_cipher.encrypt(encode_bit_index(i, false));
        Block one_tag = k1_cipher.encrypt(encode_bit_index(i, true));
        uint8_t* entry = bitflips.data() + size_t(i) * L;
        for (unsigned b = 0; b < L; ++b) {
            default_tag[b] ^= zero_tag[b];
            entry[b] = uint8_t(zero_tag[b] ^ one_tag[b]);
        }
    }

    return {params, table_key_id(k1_cipher), std::move(default_tag), std::move(bitflips)};
}

PrecomputedTable build_table(const PrfKey& k1, const MacParams& params) {
    Aes128 cipher(k1);
    return build_table(cipher, params);
}

Tag masking_tag(const BlockCipher& k2_cipher, uint64_t nonce, unsigned tag_len,
                MaskingCache& cache) {
    if (tag_len < 1 || tag_len > 16) throw std::invalid_argument("tag_len must be in [1,16]");
    uint8_t acc[16] = {0};
    masking_into(k2_cipher, nonce, tag_len, cache, acc);
    return Tag({acc, tag_len});
}

Tag universal_hash(const PrecomputedTable& table, std::span<const uint8_t> msg, SignMode mode) {
    check_msg_len(table.params(), msg.size());
    uint8_t acc[16] = {0};
    hash_into(table, msg, mode, acc);
    return Tag({acc, table.params().tag_len});
}

Tag sign(const PrecomputedTable& table, const BlockCipher& k2_cipher, MaskingCache& cache,
         std::span<const uint8_t> msg, uint64_t nonce, SignMode mode) {
    check_msg_len(table.params(), msg.size());
    const unsigned L = table.params().tag_len;
    uint8_t acc[16] = {0};
    masking_into(k2_cipher, nonce, L, cache, acc);
    hash_into(table, msg, mode, acc);
    return Tag({acc, L});
}

bool verify(const PrecomputedTable& table, const BlockCipher& k2_cipher, MaskingCache& cache,
            std::span<const uint8_t> msg, uint64_t nonce, const Tag& tag, SignMode mode) {
    Tag expected = sign(table, k2_cipher, cache, msg, nonce, mode);
    return ct_equal(expected.bytes(), tag.bytes());
}

size_t memory_footprint(const MacParams& params) {
    return size_t(8 * params.max_msg_len + 3) * params.tag_len;
}

size_t naive_bit_tag_storage(const MacParams& params) {
    return 2 * size_t(8 * params.max_msg_len) * params.tag_len;
}

}  // namespace bpmac
