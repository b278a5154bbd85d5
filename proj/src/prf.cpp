#include "bpmac/prf.hpp"

#include <stdexcept>

#include "bpmac/bytes.hpp"

namespace bpmac {

Block encode_bit_index(uint64_t index, bool bit) {
    Block b{};
    store_be64(index, b.data());
    b[15] = bit ? 1 : 0;
    return b;
}

Block encode_nonce_block(uint64_t block_index) { return encode_bit_index(block_index, false); }

void bit_tag(const BlockCipher& k1, uint64_t index, bool bit, std::span<uint8_t> out) {
    if (out.empty() || out.size() > 16) throw std::invalid_argument("tag length must be in [1,16]");
    Block full = k1.encrypt(encode_bit_index(index, bit));
    std::copy(full.begin(), full.begin() + ptrdiff_t(out.size()), out.begin());
}

std::vector<uint8_t> bit_tag(const PrfKey& k1, uint64_t index, bool bit, unsigned tag_len) {
    if (tag_len == 0 || tag_len > 16) throw std::invalid_argument("tag length must be in [1,16]");
    std::vector<uint8_t> out(tag_len);
    Aes128 cipher(k1);
    bit_tag(cipher, index, bit, out);
    return out;
}

}  // namespace bpmac
