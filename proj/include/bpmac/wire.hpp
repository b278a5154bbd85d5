#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bpmac/mac.hpp"
#include "bpmac/replay.hpp"

namespace bpmac {

// Authenticated datagram wire format:
//   nonce u64 BE | msg_len u16 BE | msg bytes | tag (table's L bytes)

struct Datagram {
    uint64_t nonce = 0;
    std::vector<uint8_t> msg;
    Tag tag;
};

std::vector<uint8_t> pack_datagram(uint64_t nonce, std::span<const uint8_t> msg, const Tag& tag);

// Throws FormatError when the buffer is shorter than the header, the length
// field disagrees with the payload, or the trailing tag is incomplete.
Datagram parse_datagram(std::span<const uint8_t> data, unsigned tag_len);

enum class RxStatus : uint8_t {
    accepted,
    bad_tag,    // authentication failed
    replayed,   // authentic but nonce already accepted / too old
    malformed,  // could not be parsed
};

const char* rx_status_name(RxStatus status);

// The receive path of the datagram demo: parse, verify, then replay-check,
// in that order. Owns the verifying context (masking cache + replay window);
// single-writer, one instance per session.
class DatagramVerifier {
public:
    DatagramVerifier(const PrecomputedTable& table, const PrfKey& k2, size_t replay_window = 64);

    RxStatus process(std::span<const uint8_t> datagram);

    // Same pipeline for an already parsed datagram.
    RxStatus process(uint64_t nonce, std::span<const uint8_t> msg, const Tag& tag);

    const ReplayWindow& replay_window() const { return window_; }

private:
    const PrecomputedTable* table_;
    Aes128 k2_cipher_;
    MaskingCache cache_;
    ReplayWindow window_;
};

}  // namespace bpmac
