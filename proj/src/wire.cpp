#include "bpmac/wire.hpp"

#include <cstring>
#include <stdexcept>

#include "bpmac/bytes.hpp"
#include "bpmac/errors.hpp"

namespace bpmac {

std::vector<uint8_t> pack_datagram(uint64_t nonce, std::span<const uint8_t> msg, const Tag& tag) {
    if (msg.size() > 0xffff) throw std::invalid_argument("message too long for wire format");
    std::vector<uint8_t> out(10 + msg.size() + tag.size());
    store_be64(nonce, out.data());
    store_be16(uint16_t(msg.size()), out.data() + 8);
    std::memcpy(out.data() + 10, msg.data(), msg.size());
    std::memcpy(out.data() + 10 + msg.size(), tag.bytes().data(), tag.size());
    return out;
}

Datagram parse_datagram(std::span<const uint8_t> data, unsigned tag_len) {
    if (tag_len < 1 || tag_len > 16) throw std::invalid_argument("tag_len must be in [1,16]");
    if (data.size() < 10) throw FormatError("datagram shorter than header");
    Datagram d;
    d.nonce = load_be64(data.data());
    const size_t msg_len = load_be16(data.data() + 8);
    if (data.size() != 10 + msg_len + tag_len)
        throw FormatError("datagram length does not match its length field");
    d.msg.assign(data.begin() + 10, data.begin() + 10 + ptrdiff_t(msg_len));
    d.tag = Tag(data.subspan(10 + msg_len, tag_len));
    return d;
}

const char* rx_status_name(RxStatus status) {
    switch (status) {
        case RxStatus::accepted: return "accept";
        case RxStatus::bad_tag: return "reject-auth";
        case RxStatus::replayed: return "reject-replay";
        case RxStatus::malformed: return "reject-format";
    }
    return "unknown";
}

DatagramVerifier::DatagramVerifier(const PrecomputedTable& table, const PrfKey& k2,
                                   size_t replay_window)
    : table_(&table), k2_cipher_(k2), window_(replay_window) {}

RxStatus DatagramVerifier::process(std::span<const uint8_t> datagram) {
    Datagram d;
    try {
        d = parse_datagram(datagram, table_->params().tag_len);
    } catch (const FormatError&) {
        return RxStatus::malformed;
    }
    return process(d.nonce, d.msg, d.tag);
}

RxStatus DatagramVerifier::process(uint64_t nonce, std::span<const uint8_t> msg, const Tag& tag) {
    if (msg.size() > table_->params().max_msg_len) return RxStatus::malformed;
    if (!verify(*table_, k2_cipher_, cache_, msg, nonce, tag)) return RxStatus::bad_tag;
    if (!window_.accept(nonce)) return RxStatus::replayed;
    return RxStatus::accepted;
}

}  // namespace bpmac
