// Table-based AES-128, encryption direction only (FIPS-197). The round
// tables are generated from the S-box at compile time.

#include <bit>
#include <stdexcept>

#include "bpmac/cipher.hpp"

namespace bpmac {

namespace {

constexpr std::array<uint8_t, 256> kSbox = {
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab, 0x76,
    0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0,
    0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
    0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2, 0xeb, 0x27, 0xb2, 0x75,
    0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84,
    0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
    0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8,
    0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5, 0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2,
    0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
    0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb,
    0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79,
    0xe7, 0xc8, 0x37, 0x6d, 0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
    0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a,
    0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e,
    0xe1, 0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb, 0x16};

constexpr uint8_t xtime(uint8_t a) { return uint8_t((a << 1) ^ ((a & 0x80) ? 0x1b : 0x00)); }

// Te0[x] packs {02*S(x), S(x), S(x), 03*S(x)}; the other tables are byte
// rotations of it.
constexpr std::array<uint32_t, 256> make_te0() {
    std::array<uint32_t, 256> t{};
    for (int i = 0; i < 256; ++i) {
        uint32_t s = kSbox[size_t(i)];
        uint32_t s2 = xtime(uint8_t(s));
        uint32_t s3 = s2 ^ s;
        t[size_t(i)] = s2 << 24 | s << 16 | s << 8 | s3;
    }
    return t;
}

constexpr std::array<uint32_t, 256> rotated(const std::array<uint32_t, 256>& src, int bits) {
    std::array<uint32_t, 256> t{};
    for (int i = 0; i < 256; ++i) t[size_t(i)] = std::rotr(src[size_t(i)], bits);
    return t;
}

constexpr auto kTe0 = make_te0();
constexpr auto kTe1 = rotated(kTe0, 8);
constexpr auto kTe2 = rotated(kTe0, 16);
constexpr auto kTe3 = rotated(kTe0, 24);

constexpr std::array<uint32_t, 11> kRcon = {0,    0x01, 0x02, 0x04, 0x08, 0x10,
                                            0x20, 0x40, 0x80, 0x1b, 0x36};

inline uint32_t load32(const uint8_t* p) {
    return uint32_t(p[0]) << 24 | uint32_t(p[1]) << 16 | uint32_t(p[2]) << 8 | uint32_t(p[3]);
}

inline void store32(uint32_t v, uint8_t* p) {
    p[0] = uint8_t(v >> 24);
    p[1] = uint8_t(v >> 16);
    p[2] = uint8_t(v >> 8);
    p[3] = uint8_t(v);
}

inline uint32_t sub_word(uint32_t w) {
    return uint32_t(kSbox[w >> 24]) << 24 | uint32_t(kSbox[(w >> 16) & 0xff]) << 16 |
           uint32_t(kSbox[(w >> 8) & 0xff]) << 8 | uint32_t(kSbox[w & 0xff]);
}

}  // namespace

PrfKey PrfKey::from(std::span<const uint8_t> raw) {
    if (raw.size() != 16) throw std::invalid_argument("key must be exactly 16 bytes");
    PrfKey k;
    std::copy(raw.begin(), raw.end(), k.bytes.begin());
    return k;
}

Aes128::Aes128(const PrfKey& key) {
    for (int i = 0; i < 4; ++i) round_keys_[size_t(i)] = load32(key.bytes.data() + 4 * i);
    for (int i = 4; i < 44; ++i) {
        uint32_t t = round_keys_[size_t(i - 1)];
        if (i % 4 == 0) t = sub_word(std::rotl(t, 8)) ^ (kRcon[size_t(i / 4)] << 24);
        round_keys_[size_t(i)] = round_keys_[size_t(i - 4)] ^ t;
    }
}

Block Aes128::encrypt(const Block& in) const {
    const uint32_t* rk = round_keys_.data();
    uint32_t s0 = load32(in.data() + 0) ^ rk[0];
    uint32_t s1 = load32(in.data() + 4) ^ rk[1];
    uint32_t s2 = load32(in.data() + 8) ^ rk[2];
    uint32_t s3 = load32(in.data() + 12) ^ rk[3];

    for (int round = 1; round < 10; ++round) {
        rk += 4;
        uint32_t t0 = kTe0[s0 >> 24] ^ kTe1[(s1 >> 16) & 0xff] ^ kTe2[(s2 >> 8) & 0xff] ^
                      kTe3[s3 & 0xff] ^ rk[0];
        uint32_t t1 = kTe0[s1 >> 24] ^ kTe1[(s2 >> 16) & 0xff] ^ kTe2[(s3 >> 8) & 0xff] ^
                      kTe3[s0 & 0xff] ^ rk[1];
        uint32_t t2 = kTe0[s2 >> 24] ^ kTe1[(s3 >> 16) & 0xff] ^ kTe2[(s0 >> 8) & 0xff] ^
                      kTe3[s1 & 0xff] ^ rk[2];
        uint32_t t3 = kTe0[s3 >> 24] ^ kTe1[(s0 >> 16) & 0xff] ^ kTe2[(s1 >> 8) & 0xff] ^
                      kTe3[s2 & 0xff] ^ rk[3];
        s0 = t0;
        s1 = t1;
        s2 = t2;
        s3 = t3;
    }

    rk += 4;
    uint32_t o0 = uint32_t(kSbox[s0 >> 24]) << 24 | uint32_t(kSbox[(s1 >> 16) & 0xff]) << 16 |
                  uint32_t(kSbox[(s2 >> 8) & 0xff]) << 8 | uint32_t(kSbox[s3 & 0xff]);
    uint32_t o1 = uint32_t(kSbox[s1 >> 24]) << 24 | uint32_t(kSbox[(s2 >> 16) & 0xff]) << 16 |
                  uint32_t(kSbox[(s3 >> 8) & 0xff]) << 8 | uint32_t(kSbox[s0 & 0xff]);
    uint32_t o2 = uint32_t(kSbox[s2 >> 24]) << 24 | uint32_t(kSbox[(s3 >> 16) & 0xff]) << 16 |
                  uint32_t(kSbox[(s0 >> 8) & 0xff]) << 8 | uint32_t(kSbox[s1 & 0xff]);
    uint32_t o3 = uint32_t(kSbox[s3 >> 24]) << 24 | uint32_t(kSbox[(s0 >> 16) & 0xff]) << 16 |
                  uint32_t(kSbox[(s1 >> 8) & 0xff]) << 8 | uint32_t(kSbox[s2 & 0xff]);

    Block out;
    store32(o0 ^ rk[0], out.data() + 0);
    store32(o1 ^ rk[1], out.data() + 4);
    store32(o2 ^ rk[2], out.data() + 8);
    store32(o3 ^ rk[3], out.data() + 12);
    return out;
}

Block block_encrypt(const PrfKey& key, const Block& input) { return Aes128(key).encrypt(input); }

}  // namespace bpmac
