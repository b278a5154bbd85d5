#include "bpmac/oracle.hpp"

#include <stdexcept>
#include <vector>

#include "bpmac/prf.hpp"

namespace bpmac {

Tag hash_naive(const BlockCipher& k1_cipher, const MacParams& params,
               std::span<const uint8_t> msg) {
    params.validate();
    if (msg.size() > params.max_msg_len)
        throw std::invalid_argument("message longer than table maximum");

    const unsigned L = params.tag_len;
    const uint32_t n_bits = params.padded_bits();

    // Materialize the padded bit string: message bits MSB-first, a single
    // 1-bit, then zeros up to the fixed length (ISO/IEC 9797-1 method 2).
    std::vector<uint8_t> bits(n_bits, 0);
    for (size_t i = 0; i < msg.size(); ++i)
        for (unsigned j = 0; j < 8; ++j) bits[8 * i + j] = uint8_t((msg[i] >> (7 - j)) & 1u);
    bits[8 * msg.size()] = 1;

    uint8_t acc[16] = {0};
    uint8_t tag_bytes[16];
    for (uint32_t i = 0; i < n_bits; ++i) {
        bit_tag(k1_cipher, i, bits[i] != 0, {tag_bytes, L});
        for (unsigned b = 0; b < L; ++b) acc[b] ^= tag_bytes[b];
    }
    return Tag({acc, L});
}

Tag sign_naive(const BlockCipher& k1_cipher, const BlockCipher& k2_cipher,
               const MacParams& params, std::span<const uint8_t> msg, uint64_t nonce) {
    Tag hash = hash_naive(k1_cipher, params, msg);

    const unsigned L = params.tag_len;
    const unsigned per_block = masking_tags_per_block(L);
    Block block = k2_cipher.encrypt(encode_nonce_block(nonce / per_block));
    const uint8_t* slice = block.data() + size_t(nonce % per_block) * L;

    uint8_t acc[16] = {0};
    for (unsigned b = 0; b < L; ++b) acc[b] = uint8_t(hash.bytes()[b] ^ slice[b]);
    return Tag({acc, L});
}

Tag sign_naive(const KeyMaterial& keys, const MacParams& params, std::span<const uint8_t> msg,
               uint64_t nonce) {
    Aes128 c1(keys.k1);
    Aes128 c2(keys.k2);
    return sign_naive(c1, c2, params, msg, nonce);
}

}  // namespace bpmac
