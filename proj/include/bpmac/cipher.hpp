#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace bpmac {

// 128-bit cipher input/output block.
using Block = std::array<uint8_t, 16>;

// 128-bit secret key for the keyed permutation.
struct PrfKey {
    std::array<uint8_t, 16> bytes{};

    // Throws std::invalid_argument unless `raw` is exactly 16 bytes.
    static PrfKey from(std::span<const uint8_t> raw);

    bool operator==(const PrfKey&) const = default;
};

// Keyed 128-bit pseudorandom permutation. Only the forward direction is
// needed by the MAC construction, and the primitive is a replaceable
// boundary: anything keyed that permutes 16-byte blocks fits behind this
// interface. Implementations must be stateless per call so one instance can
// be shared across threads.
class BlockCipher {
public:
    virtual ~BlockCipher() = default;
    virtual Block encrypt(const Block& in) const = 0;
};

// Canonical instantiation: AES-128, encryption direction only.
class Aes128 final : public BlockCipher {
public:
    explicit Aes128(const PrfKey& key);
    Block encrypt(const Block& in) const override;

private:
    std::array<uint32_t, 44> round_keys_;
};

// Pass-through wrapper that counts invocations of the inner cipher. Used by
// tests and the benchmark harness to assert how many block encryptions a
// code path performs. Not thread-safe; wrap per measuring context.
class CountingCipher final : public BlockCipher {
public:
    explicit CountingCipher(const BlockCipher& inner) : inner_(&inner) {}

    Block encrypt(const Block& in) const override {
        ++calls_;
        return inner_->encrypt(in);
    }

    uint64_t calls() const { return calls_; }
    void reset() { calls_ = 0; }

private:
    const BlockCipher* inner_;
    mutable uint64_t calls_ = 0;
};

// One-shot convenience. Expands the key schedule on every call; hold an
// Aes128 instead when encrypting repeatedly under one key.
Block block_encrypt(const PrfKey& key, const Block& input);

}  // namespace bpmac
