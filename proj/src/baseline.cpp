#include "bpmac/baseline.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

#include "bpmac/bytes.hpp"

namespace bpmac {

bool BaselineMac::verify(std::span<const uint8_t> msg, uint64_t nonce, const Tag& tag) const {
    Tag expected = sign(msg, nonce);
    return ct_equal(expected.bytes(), tag.bytes());
}

// ---- HMAC-SHA-256 (system crypto library) ----------------------------------

struct HmacSha256Mac::OsslState {
    EVP_MAC* mac = nullptr;
    EVP_MAC_CTX* tmpl = nullptr;  // keyed once; dup'd per sign

    ~OsslState() {
        if (tmpl) EVP_MAC_CTX_free(tmpl);
        if (mac) EVP_MAC_free(mac);
    }
};

static OSSL_PARAM sha256_params[] = {
    OSSL_PARAM_utf8_string("digest", const_cast<char*>("SHA256"), 6),
    OSSL_PARAM_END,
};

std::array<uint8_t, 32> hmac_sha256(std::span<const uint8_t> key, std::span<const uint8_t> data) {
    EVP_MAC* mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
    if (!mac) throw std::runtime_error("openssl: HMAC fetch failed");
    EVP_MAC_CTX* ctx = EVP_MAC_CTX_new(mac);
    std::array<uint8_t, 32> out{};
    size_t out_len = 0;
    int ok = ctx && EVP_MAC_init(ctx, key.data(), key.size(), sha256_params) &&
             EVP_MAC_update(ctx, data.data(), data.size()) &&
             EVP_MAC_final(ctx, out.data(), &out_len, out.size());
    EVP_MAC_CTX_free(ctx);
    EVP_MAC_free(mac);
    if (!ok || out_len != 32) throw std::runtime_error("openssl: HMAC computation failed");
    return out;
}

HmacSha256Mac::HmacSha256Mac(std::span<const uint8_t> key, unsigned tag_len)
    : ossl_(std::make_unique<OsslState>()), tag_len_(tag_len) {
    if (tag_len < 1 || tag_len > 16) throw std::invalid_argument("tag_len must be in [1,16]");
    ossl_->mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
    if (!ossl_->mac) throw std::runtime_error("openssl: HMAC fetch failed");
    ossl_->tmpl = EVP_MAC_CTX_new(ossl_->mac);
    if (!ossl_->tmpl || !EVP_MAC_init(ossl_->tmpl, key.data(), key.size(), sha256_params))
        throw std::runtime_error("openssl: HMAC key setup failed");
}

HmacSha256Mac::~HmacSha256Mac() = default;

Tag HmacSha256Mac::sign(std::span<const uint8_t> msg, uint64_t nonce) const {
    uint8_t nonce_be[8];
    store_be64(nonce, nonce_be);

    EVP_MAC_CTX* ctx = EVP_MAC_CTX_dup(ossl_->tmpl);
    uint8_t digest[32];
    size_t digest_len = 0;
    int ok = ctx && EVP_MAC_update(ctx, nonce_be, sizeof(nonce_be)) &&
             EVP_MAC_update(ctx, msg.data(), msg.size()) &&
             EVP_MAC_final(ctx, digest, &digest_len, sizeof(digest));
    EVP_MAC_CTX_free(ctx);
    if (!ok || digest_len != 32) throw std::runtime_error("openssl: HMAC computation failed");
    return Tag({digest, tag_len_});
}

// ---- AES-CMAC (in-tree cipher) ----------------------------------------------

namespace {

// Doubling in GF(2^128) with the CMAC reduction polynomial.
Block gf_double(const Block& in) {
    Block out;
    uint8_t carry = 0;
    for (int i = 15; i >= 0; --i) {
        out[size_t(i)] = uint8_t((in[size_t(i)] << 1) | carry);
        carry = in[size_t(i)] >> 7;
    }
    if (carry) out[15] ^= 0x87;
    return out;
}

inline void xor_block(Block& acc, const uint8_t* src, size_t len) {
    for (size_t i = 0; i < len; ++i) acc[i] ^= src[i];
}

}  // namespace

Block aes_cmac(const BlockCipher& cipher, std::span<const uint8_t> data) {
    Block l0 = cipher.encrypt(Block{});
    Block k_full = gf_double(l0);
    Block k_partial = gf_double(k_full);

    const size_t len = data.size();
    const size_t full_blocks = len / 16;
    const bool complete = len > 0 && len % 16 == 0;
    const size_t chain_blocks = complete ? full_blocks - 1 : full_blocks;

    Block x{};
    for (size_t i = 0; i < chain_blocks; ++i) {
        xor_block(x, data.data() + 16 * i, 16);
        x = cipher.encrypt(x);
    }

    Block last{};
    if (complete) {
        std::memcpy(last.data(), data.data() + 16 * chain_blocks, 16);
        xor_block(last, k_full.data(), 16);
    } else {
        const size_t rem = len - 16 * chain_blocks;
        std::memcpy(last.data(), data.data() + 16 * chain_blocks, rem);
        last[rem] = 0x80;
        xor_block(last, k_partial.data(), 16);
    }
    xor_block(x, last.data(), 16);
    return cipher.encrypt(x);
}

AesCmacMac::AesCmacMac(const PrfKey& key, unsigned tag_len)
    : owned_cipher_(std::in_place, key), cipher_(&*owned_cipher_), tag_len_(tag_len) {
    if (tag_len < 1 || tag_len > 16) throw std::invalid_argument("tag_len must be in [1,16]");
    derive_subkeys();
}

AesCmacMac::AesCmacMac(const BlockCipher& cipher, unsigned tag_len)
    : cipher_(&cipher), tag_len_(tag_len) {
    if (tag_len < 1 || tag_len > 16) throw std::invalid_argument("tag_len must be in [1,16]");
    derive_subkeys();
}

void AesCmacMac::derive_subkeys() {
    Block l0 = cipher_->encrypt(Block{});
    subkey_full_ = gf_double(l0);
    subkey_partial_ = gf_double(subkey_full_);
}

Tag AesCmacMac::sign(std::span<const uint8_t> msg, uint64_t nonce) const {
    // CBC-chain over nonce BE64 || msg without materializing the concat:
    // the nonce occupies the first 8 bytes of the running block.
    Block x{};
    Block pending{};
    size_t pending_len = 8;
    store_be64(nonce, pending.data());

    size_t consumed = 0;
    while (msg.size() - consumed > 16 - pending_len) {
        const size_t take = 16 - pending_len;
        std::memcpy(pending.data() + pending_len, msg.data() + consumed, take);
        consumed += take;
        pending_len = 0;
        xor_block(x, pending.data(), 16);
        x = cipher_->encrypt(x);
    }

    std::memcpy(pending.data() + pending_len, msg.data() + consumed, msg.size() - consumed);
    pending_len += msg.size() - consumed;

    Block last{};
    std::memcpy(last.data(), pending.data(), pending_len);
    if (pending_len == 16) {
        xor_block(last, subkey_full_.data(), 16);
    } else {
        last[pending_len] = 0x80;
        xor_block(last, subkey_partial_.data(), 16);
    }
    xor_block(x, last.data(), 16);
    Block digest = cipher_->encrypt(x);
    return Tag({digest.data(), tag_len_});
}

}  // namespace bpmac
