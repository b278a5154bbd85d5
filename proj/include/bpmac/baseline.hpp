#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bpmac/cipher.hpp"
#include "bpmac/mac.hpp"

namespace bpmac {

// Conventional MAC baselines the benchmark harness compares against. They
// authenticate (nonce BE64 || msg) and truncate to the configured tag
// length, so the harness can treat every scheme uniformly. Stateless per
// call; reentrant.
class BaselineMac {
public:
    virtual ~BaselineMac() = default;
    virtual std::string_view name() const = 0;
    virtual unsigned tag_len() const = 0;
    virtual Tag sign(std::span<const uint8_t> msg, uint64_t nonce) const = 0;

    // Recompute-and-compare, constant-time on the tag bytes.
    bool verify(std::span<const uint8_t> msg, uint64_t nonce, const Tag& tag) const;
};

// One-shot HMAC-SHA-256 (RFC 2104 / FIPS 198-1), full 32-byte digest.
std::array<uint8_t, 32> hmac_sha256(std::span<const uint8_t> key, std::span<const uint8_t> data);

// Hash-based baseline backed by the system crypto library's HMAC-SHA-256.
class HmacSha256Mac final : public BaselineMac {
public:
    HmacSha256Mac(std::span<const uint8_t> key, unsigned tag_len);
    ~HmacSha256Mac() override;

    HmacSha256Mac(const HmacSha256Mac&) = delete;
    HmacSha256Mac& operator=(const HmacSha256Mac&) = delete;

    std::string_view name() const override { return "hmac-sha256"; }
    unsigned tag_len() const override { return tag_len_; }
    Tag sign(std::span<const uint8_t> msg, uint64_t nonce) const override;

private:
    struct OsslState;
    std::unique_ptr<OsslState> ossl_;
    unsigned tag_len_;
};

// AES-CMAC over a full message (RFC 4493 / NIST SP 800-38B).
Block aes_cmac(const BlockCipher& cipher, std::span<const uint8_t> data);

// Block-cipher baseline built on the in-tree AES so its cipher calls can be
// counted with CountingCipher.
class AesCmacMac final : public BaselineMac {
public:
    AesCmacMac(const PrfKey& key, unsigned tag_len);

    // Non-owning: caller keeps `cipher` alive. Subkey derivation in this
    // constructor costs one cipher call.
    AesCmacMac(const BlockCipher& cipher, unsigned tag_len);

    std::string_view name() const override { return "aes-cmac"; }
    unsigned tag_len() const override { return tag_len_; }
    Tag sign(std::span<const uint8_t> msg, uint64_t nonce) const override;

private:
    void derive_subkeys();

    std::optional<Aes128> owned_cipher_;
    const BlockCipher* cipher_;
    Block subkey_full_{};     // for complete final blocks
    Block subkey_partial_{};  // for padded final blocks
    unsigned tag_len_;
};

}  // namespace bpmac
