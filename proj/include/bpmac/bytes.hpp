#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bpmac {

inline void store_be16(uint16_t v, uint8_t* p) {
    p[0] = uint8_t(v >> 8);
    p[1] = uint8_t(v);
}

inline void store_be64(uint64_t v, uint8_t* p) {
    for (int i = 0; i < 8; ++i) p[i] = uint8_t(v >> (56 - 8 * i));
}

inline uint16_t load_be16(const uint8_t* p) {
    return uint16_t(uint16_t(p[0]) << 8 | p[1]);
}

inline uint64_t load_be64(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | p[i];
    return v;
}

std::string to_hex(std::span<const uint8_t> data);

// Throws FormatError on odd length or a non-hex digit.
std::vector<uint8_t> from_hex(std::string_view hex);

// Constant-time byte comparison. A length mismatch returns false immediately;
// lengths are public here.
bool ct_equal(std::span<const uint8_t> a, std::span<const uint8_t> b);

// Fills `out` from the OS entropy source. Throws IoError on failure.
void fill_random(std::span<uint8_t> out);

}  // namespace bpmac
