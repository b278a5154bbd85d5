#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>
#include <utility>

#include "bpmac/bytes.hpp"
#include "bpmac/errors.hpp"
#include "bpmac/mac.hpp"
#include "bpmac/prf.hpp"

using namespace bpmac;

namespace {

const PrfKey kK1 = PrfKey::from(from_hex("000102030405060708090a0b0c0d0e0f"));
const PrfKey kK2 = PrfKey::from(from_hex("101112131415161718191a1b1c1d1e1f"));

std::vector<uint8_t> random_msg(std::mt19937_64& rng, size_t max_len) {
    std::vector<uint8_t> msg(rng() % (max_len + 1));
    for (auto& b : msg) b = uint8_t(rng());
    return msg;
}

std::vector<uint8_t> xor_vec(std::span<const uint8_t> a, std::span<const uint8_t> b) {
    REQUIRE(a.size() == b.size());
    std::vector<uint8_t> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = uint8_t(a[i] ^ b[i]);
    return out;
}

}  // namespace

TEST_CASE("build_table satisfies its invariants") {
    const MacParams params{16, 2};
    const PrecomputedTable table = build_table(kK1, params);

    CHECK(table.bit_count() == 17);  // 8*2 + 1
    CHECK(table.params() == params);

    // default tag = XOR of all zero-bit tags
    std::vector<uint8_t> expected_default(16, 0);
    for (uint32_t i = 0; i < 17; ++i) {
        const auto t0 = bit_tag(kK1, i, false, 16);
        for (unsigned b = 0; b < 16; ++b) expected_default[b] ^= t0[b];
    }
    CHECK(std::equal(expected_default.begin(), expected_default.end(),
                     table.default_tag().begin()));

    // bitflip[i] = tag(i,0) XOR tag(i,1)
    for (uint32_t i : {0u, 1u, 8u, 16u}) {
        const auto flip = xor_vec(bit_tag(kK1, i, false, 16), bit_tag(kK1, i, true, 16));
        CHECK(std::equal(flip.begin(), flip.end(), table.bitflip(i).begin()));
    }

    // deterministic rebuild
    CHECK(build_table(kK1, params) == table);

    Aes128 c1(kK1);
    CHECK(table.key_id() == table_key_id(c1));
}

TEST_CASE("storage accounting") {
    // Storing both raw bit tags for every bit of a 2-byte message at L=16.
    CHECK(naive_bit_tag_storage({16, 2}) == 512);
    CHECK(naive_bit_tag_storage({16, 2}) == 2 * 16 * 16);

    CHECK(memory_footprint({16, 12}) == 1584);
    CHECK(memory_footprint({12, 15}) == 1476);
    CHECK(memory_footprint({8, 21}) == 1368);
    CHECK(memory_footprint({4, 43}) == 1388);
    CHECK(memory_footprint({1, 1}) == 11);

    // One more message byte costs eight more entries.
    std::mt19937_64 rng(0x5eed1001);
    for (int i = 0; i < 200; ++i) {
        const uint8_t L = uint8_t(1 + rng() % 16);
        const uint16_t M = uint16_t(1 + rng() % 1000);
        CHECK(memory_footprint({L, uint16_t(M + 1)}) - memory_footprint({L, M}) == 8u * L);
    }
}

TEST_CASE("masking_tag slicing per tag length") {
    const Aes128 c2(kK2);

    SUBCASE("L=16: one tag per block, full output") {
        MaskingCache cache;
        for (uint64_t n : {0ull, 1ull, 9999ull}) {
            const Tag t = masking_tag(c2, n, 16, cache);
            const Block direct = c2.encrypt(encode_nonce_block(n));
            CHECK(std::equal(t.bytes().begin(), t.bytes().end(), direct.begin()));
        }
    }

    SUBCASE("L=4: four tags per block, fifth nonce moves on") {
        MaskingCache cache;
        const Block block0 = c2.encrypt(encode_nonce_block(0));
        for (uint64_t n = 0; n < 4; ++n) {
            const Tag t = masking_tag(c2, n, 4, cache);
            CHECK(std::equal(t.bytes().begin(), t.bytes().end(), block0.begin() + ptrdiff_t(4 * n)));
        }
        const Tag t4 = masking_tag(c2, 4, 4, cache);
        const Block block1 = c2.encrypt(encode_nonce_block(1));
        CHECK(std::equal(t4.bytes().begin(), t4.bytes().end(), block1.begin()));
    }

    SUBCASE("L=12: no sub-block reuse, leading bytes") {
        MaskingCache cache;
        CHECK(masking_tags_per_block(12) == 1);
        const Tag t = masking_tag(c2, 7, 12, cache);
        const Block direct = c2.encrypt(encode_nonce_block(7));
        CHECK(std::equal(t.bytes().begin(), t.bytes().end(), direct.begin()));
    }

    SUBCASE("cipher calls amortize across a block") {
        const Aes128 inner(kK2);
        CountingCipher counted(inner);
        MaskingCache cache;
        for (uint64_t n = 0; n < 400; ++n) masking_tag(counted, n, 4, cache);
        CHECK(counted.calls() == 100);  // one encryption per 4 consecutive nonces
    }
}

TEST_CASE("masking nonce-to-bytes map never reuses output bytes") {
    for (unsigned L = 1; L <= 16; ++L) {
        const unsigned per_block = masking_tags_per_block(L);
        CHECK(per_block >= 1);
        std::set<std::pair<uint64_t, unsigned>> seen;
        for (uint64_t n = 0; n < 10000; ++n) {
            const uint64_t block_index = n / per_block;
            const unsigned offset = unsigned(n % per_block) * L;
            CHECK(offset + L <= 16);  // slice stays inside the block
            CHECK(seen.insert({block_index, offset}).second);
        }
    }
}

TEST_CASE("masking cache is pure memoization") {
    const Aes128 c2(kK2);
    MaskingCache fresh;
    const Tag expected = masking_tag(c2, 1234, 4, fresh);

    // Same answer through a cache with unrelated prior state.
    MaskingCache stale;
    masking_tag(c2, 999999, 4, stale);
    CHECK(masking_tag(c2, 1234, 4, stale) == expected);

    // And through one that already holds the right block.
    CHECK(masking_tag(c2, 1234, 4, stale) == expected);
}

TEST_CASE("universal_hash corner cases") {
    const PrecomputedTable table = build_table(kK1, {16, 2});

    // Empty message: only the padding bit at index 0.
    const Tag empty_hash = universal_hash(table, {});
    const auto expected_empty = xor_vec(table.default_tag(), table.bitflip(0));
    CHECK(std::equal(expected_empty.begin(), expected_empty.end(), empty_hash.bytes().begin()));
    CHECK(empty_hash.hex() == "8e3309f7fadbd60275f1787a4e22bde8");

    // 0x80: MSB-first bit 0 set, padding at index 8.
    const std::vector<uint8_t> m{0x80};
    const Tag h80 = universal_hash(table, m);
    auto expected80 = xor_vec(table.default_tag(), table.bitflip(0));
    expected80 = xor_vec(expected80, table.bitflip(8));
    CHECK(std::equal(expected80.begin(), expected80.end(), h80.bytes().begin()));
    CHECK(h80.hex() == "7eb647c329ca712932c0891d770a658f");

    const std::vector<uint8_t> too_long(3, 0);
    CHECK_THROWS_AS(universal_hash(table, too_long), std::invalid_argument);
}

TEST_CASE("sign end-to-end frozen vectors") {
    // Computed with an out-of-tree implementation of the same construction.
    const Aes128 c2(kK2);
    MaskingCache cache;

    const PrecomputedTable t16 = build_table(kK1, {16, 2});
    CHECK(sign(t16, c2, cache, from_hex("6162"), 5).hex() == "16539309de247f46270b4942d8db2b70");
    CHECK(sign(t16, c2, cache, {}, 0).hex() == "6390390ef437076e75cf27cad5ed4eb0");

    const PrecomputedTable t4 = build_table(kK1, {4, 4});
    CHECK(sign(t4, c2, cache, from_hex("00112233"), 7).hex() == "03542296");

    const PrecomputedTable t12 = build_table(kK1, {12, 16});
    CHECK(sign(t12, c2, cache, from_hex("deadbeef"), 12345).hex() == "ea9e91aae001d400c2b75bb2");

    const PrecomputedTable t1 = build_table(kK1, {1, 1});
    CHECK(sign(t1, c2, cache, from_hex("ff"), 2).hex() == "4d");
}

TEST_CASE("sign determinism and nonce separation") {
    const PrecomputedTable table = build_table(kK1, {8, 16});
    const Aes128 c2(kK2);
    MaskingCache cache;
    std::mt19937_64 rng(0x5eed1002);

    for (int i = 0; i < 50; ++i) {
        const auto msg = random_msg(rng, 16);
        const uint64_t n1 = rng(), n2 = rng();
        const Tag a = sign(table, c2, cache, msg, n1);
        CHECK(sign(table, c2, cache, msg, n1) == a);

        // The hash term cancels: difference of two tags for the same message
        // is the difference of the masking tags.
        const Tag b = sign(table, c2, cache, msg, n2);
        MaskingCache mc;
        const Tag m1 = masking_tag(c2, n1, 8, mc);
        const Tag m2 = masking_tag(c2, n2, 8, mc);
        CHECK(xor_vec(a.bytes(), b.bytes()) == xor_vec(m1.bytes(), m2.bytes()));
    }
}

TEST_CASE("xor-difference law") {
    const PrecomputedTable table = build_table(kK1, {16, 8});
    const Aes128 c2(kK2);
    MaskingCache cache;
    std::mt19937_64 rng(0x5eed1003);

    for (int trial = 0; trial < 100; ++trial) {
        const size_t len = rng() % 9;
        std::vector<uint8_t> m1(len), m2(len);
        for (auto& b : m1) b = uint8_t(rng());
        for (auto& b : m2) b = uint8_t(rng());
        const uint64_t nonce = rng();

        const Tag t1 = sign(table, c2, cache, m1, nonce);
        const Tag t2 = sign(table, c2, cache, m2, nonce);

        std::vector<uint8_t> expected(16, 0);
        for (size_t i = 0; i < len; ++i) {
            const uint8_t diff = uint8_t(m1[i] ^ m2[i]);
            for (unsigned j = 0; j < 8; ++j) {
                if (diff & (0x80u >> j)) {
                    const auto flip = table.bitflip(uint32_t(8 * i + j));
                    for (unsigned b = 0; b < 16; ++b) expected[b] ^= flip[b];
                }
            }
        }
        CHECK(xor_vec(t1.bytes(), t2.bytes()) == expected);
    }
}

TEST_CASE("padding separates a message from itself plus a zero byte") {
    const PrecomputedTable table = build_table(kK1, {16, 8});
    std::mt19937_64 rng(0x5eed1004);

    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_msg(rng, 7);
        auto extended = m;
        extended.push_back(0x00);

        const Tag h1 = universal_hash(table, m);
        const Tag h2 = universal_hash(table, extended);
        const auto expected = xor_vec(table.bitflip(uint32_t(8 * m.size())),
                                      table.bitflip(uint32_t(8 * m.size() + 8)));
        CHECK(xor_vec(h1.bytes(), h2.bytes()) == expected);

        bool flips_differ = false;
        for (uint8_t b : expected) flips_differ |= b != 0;
        if (flips_differ) CHECK(h1 != h2);
    }
}

TEST_CASE("truncation commutes with XOR accumulation") {
    std::mt19937_64 rng(0x5eed1005);
    const PrecomputedTable full_table = build_table(kK1, {16, 8});
    const Aes128 c2(kK2);

    for (unsigned L : {1u, 3u, 4u, 7u, 8u, 12u, 15u}) {
        const PrecomputedTable trunc_table = build_table(kK1, {uint8_t(L), 8});
        for (int trial = 0; trial < 20; ++trial) {
            const auto msg = random_msg(rng, 8);
            const uint64_t nonce = rng();

            // XOR full blocks first, truncate at the end (same masking slice).
            const Tag hash16 = universal_hash(full_table, msg);
            const unsigned per_block = masking_tags_per_block(L);
            const Block mask_block = c2.encrypt(encode_nonce_block(nonce / per_block));
            std::vector<uint8_t> expected(L);
            for (unsigned b = 0; b < L; ++b)
                expected[b] =
                    uint8_t(hash16.bytes()[b] ^ mask_block[size_t(nonce % per_block) * L + b]);

            MaskingCache cache;
            const Tag actual = sign(trunc_table, c2, cache, msg, nonce);
            CHECK(std::equal(expected.begin(), expected.end(), actual.bytes().begin()));
        }
    }
}

TEST_CASE("constant-time mode produces identical tags") {
    const PrecomputedTable table = build_table(kK1, {16, 16});
    const Aes128 c2(kK2);
    MaskingCache cache;
    std::mt19937_64 rng(0x5eed1006);

    for (int trial = 0; trial < 1000; ++trial) {
        const auto msg = random_msg(rng, 16);
        const uint64_t nonce = rng();
        CHECK(sign(table, c2, cache, msg, nonce, SignMode::branchy) ==
              sign(table, c2, cache, msg, nonce, SignMode::constant_time));
    }
}

TEST_CASE("verify round trip and rejection") {
    const PrecomputedTable table = build_table(kK1, {8, 16});
    const Aes128 c2(kK2);
    MaskingCache cache;
    std::mt19937_64 rng(0x5eed1007);

    for (int trial = 0; trial < 50; ++trial) {
        const auto msg = random_msg(rng, 16);
        const uint64_t nonce = rng();
        const Tag tag = sign(table, c2, cache, msg, nonce);

        CHECK(verify(table, c2, cache, msg, nonce, tag));
        CHECK_FALSE(verify(table, c2, cache, msg, nonce + 1, tag));

        // single-bit corruptions of message and tag
        if (!msg.empty()) {
            auto bad_msg = msg;
            bad_msg[rng() % bad_msg.size()] ^= uint8_t(1u << (rng() % 8));
            CHECK_FALSE(verify(table, c2, cache, bad_msg, nonce, tag));
        }
        auto tag_bytes = std::vector<uint8_t>(tag.bytes().begin(), tag.bytes().end());
        tag_bytes[rng() % tag_bytes.size()] ^= uint8_t(1u << (rng() % 8));
        CHECK_FALSE(verify(table, c2, cache, msg, nonce, Tag(tag_bytes)));
    }
}

TEST_CASE("latency-critical sign performs no cipher calls when warm") {
    const PrecomputedTable table = build_table(kK1, {16, 16});
    const Aes128 inner(kK2);
    CountingCipher counted(inner);
    MaskingCache cache;

    const uint64_t nonce = 7;
    masking_tag(counted, nonce, 16, cache);  // preprocessing
    counted.reset();

    std::vector<uint8_t> msg(16, 0xa5);
    for (int i = 0; i < 100; ++i) sign(table, counted, cache, msg, nonce);
    CHECK(counted.calls() == 0);
}

TEST_CASE("key material") {
    CHECK_THROWS_AS(KeyMaterial(kK1, kK1), std::invalid_argument);

    const KeyMaterial keys(kK1, kK2);
    const auto raw = keys.to_bytes();
    const KeyMaterial back = KeyMaterial::from_bytes(raw);
    CHECK(back.k1 == kK1);
    CHECK(back.k2 == kK2);

    std::vector<uint8_t> bad(31, 1);
    CHECK_THROWS_AS(KeyMaterial::from_bytes(bad), FormatError);
    std::vector<uint8_t> same(32, 7);
    CHECK_THROWS_AS(KeyMaterial::from_bytes(same), FormatError);

    const KeyMaterial a = generate_keys();
    const KeyMaterial b = generate_keys();
    CHECK(a.k1 != a.k2);
    CHECK_FALSE(a.k1 == b.k1);  // 2^-128 false-positive chance
}

TEST_CASE("params and tag validation") {
    CHECK_THROWS_AS((MacParams{0, 4}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((MacParams{17, 4}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((MacParams{8, 0}).validate(), std::invalid_argument);
    CHECK((MacParams{1, 1}).padded_bits() == 9);

    CHECK_THROWS_AS(Tag(std::vector<uint8_t>{}), std::invalid_argument);
    CHECK_THROWS_AS(Tag(std::vector<uint8_t>(17, 0)), std::invalid_argument);
    const Tag t = Tag::from_hex("0011aaff");
    CHECK(t.size() == 4);
    CHECK(t.hex() == "0011aaff");
}
