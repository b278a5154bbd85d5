// Precomputed-table (de)serialization. See mac.hpp for the byte layout.

#include <cstring>

#include "bpmac/bytes.hpp"
#include "bpmac/errors.hpp"
#include "bpmac/mac.hpp"

namespace bpmac {

namespace {
constexpr uint8_t kMagic[4] = {'B', 'P', 'M', '1'};
constexpr uint8_t kVersion = 1;
constexpr size_t kHeaderSize = 16;
}  // namespace

std::vector<uint8_t> serialize_table(const PrecomputedTable& table) {
    const MacParams& p = table.params();
    const uint32_t n_bits = table.bit_count();

    std::vector<uint8_t> out(serialized_table_size(p));
    uint8_t* w = out.data();
    std::memcpy(w, kMagic, 4);
    w[4] = kVersion;
    w[5] = p.tag_len;
    store_be16(p.max_msg_len, w + 6);
    store_be64(table.key_id(), w + 8);
    w += kHeaderSize;

    std::memcpy(w, table.default_tag().data(), p.tag_len);
    w += p.tag_len;
    std::memcpy(w, table.bitflip(0).data(), size_t(n_bits) * p.tag_len);
    return out;
}

PrecomputedTable deserialize_table(std::span<const uint8_t> data) {
    if (data.size() < kHeaderSize) throw FormatError("table data truncated: header incomplete");
    if (std::memcmp(data.data(), kMagic, 4) != 0) throw FormatError("not a table file (bad magic)");
    if (data[4] != kVersion)
        throw FormatError("unsupported table version " + std::to_string(int(data[4])));

    MacParams p;
    p.tag_len = data[5];
    p.max_msg_len = load_be16(data.data() + 6);
    if (p.tag_len < 1 || p.tag_len > 16) throw FormatError("table header: invalid tag length");
    if (p.max_msg_len < 1) throw FormatError("table header: invalid max message length");

    const uint64_t key_id = load_be64(data.data() + 8);
    const size_t expected = serialized_table_size(p);
    if (data.size() < expected) throw FormatError("table data truncated: payload incomplete");
    if (data.size() > expected) throw FormatError("table data has trailing bytes");

    const uint8_t* r = data.data() + kHeaderSize;
    std::vector<uint8_t> default_tag(r, r + p.tag_len);
    r += p.tag_len;
    std::vector<uint8_t> bitflips(r, r + size_t(p.padded_bits()) * p.tag_len);

    return {p, key_id, std::move(default_tag), std::move(bitflips)};
}

}  // namespace bpmac
