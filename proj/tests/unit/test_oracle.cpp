#include <doctest.h>

#include <random>
#include <stdexcept>

#include "bpmac/bytes.hpp"
#include "bpmac/mac.hpp"
#include "bpmac/oracle.hpp"

using namespace bpmac;

namespace {

const PrfKey kK1 = PrfKey::from(from_hex("000102030405060708090a0b0c0d0e0f"));
const PrfKey kK2 = PrfKey::from(from_hex("101112131415161718191a1b1c1d1e1f"));

}  // namespace

TEST_CASE("sign_naive frozen vectors") {
    // Same out-of-tree vectors the optimized path is pinned to.
    const KeyMaterial keys(kK1, kK2);
    CHECK(sign_naive(keys, {16, 2}, from_hex("6162"), 5).hex() ==
          "16539309de247f46270b4942d8db2b70");
    CHECK(sign_naive(keys, {16, 2}, {}, 0).hex() == "6390390ef437076e75cf27cad5ed4eb0");
    CHECK(sign_naive(keys, {4, 4}, from_hex("00112233"), 7).hex() == "03542296");
    CHECK(sign_naive(keys, {12, 16}, from_hex("deadbeef"), 12345).hex() ==
          "ea9e91aae001d400c2b75bb2");
    CHECK(sign_naive(keys, {1, 1}, from_hex("ff"), 2).hex() == "4d");
}

TEST_CASE("hash_naive matches the table-driven hash") {
    const Aes128 c1(kK1);
    std::mt19937_64 rng(0x5eed2001);

    for (const MacParams params : {MacParams{16, 2}, MacParams{4, 8}, MacParams{8, 16}}) {
        const PrecomputedTable table = build_table(kK1, params);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<uint8_t> msg(rng() % (params.max_msg_len + 1u));
            for (auto& b : msg) b = uint8_t(rng());
            CHECK(hash_naive(c1, params, msg) == universal_hash(table, msg));
        }
    }
}

TEST_CASE("all-zero message of maximum length hashes to default XOR final bitflip") {
    const MacParams params{16, 4};
    const PrecomputedTable table = build_table(kK1, params);
    const Aes128 c1(kK1);

    const std::vector<uint8_t> zeros(params.max_msg_len, 0);
    const Tag hash = hash_naive(c1, params, zeros);

    std::vector<uint8_t> expected(table.default_tag().begin(), table.default_tag().end());
    const auto last_flip = table.bitflip(uint32_t(8 * params.max_msg_len));
    for (unsigned b = 0; b < 16; ++b) expected[b] ^= last_flip[b];
    CHECK(std::equal(expected.begin(), expected.end(), hash.bytes().begin()));
}

TEST_CASE("oracle equivalence on random instances") {
    std::mt19937_64 rng(0x5eed2002);
    const Aes128 c2(kK2);

    for (const uint16_t max_len : {1, 2, 16}) {
        for (const uint8_t tag_len : {4, 16}) {
            const MacParams params{tag_len, max_len};
            const PrecomputedTable table = build_table(kK1, params);
            MaskingCache cache;
            const KeyMaterial keys(kK1, kK2);

            for (int trial = 0; trial < 300; ++trial) {
                std::vector<uint8_t> msg(rng() % (max_len + 1u));
                for (auto& b : msg) b = uint8_t(rng());
                const uint64_t nonce = rng();
                CHECK(sign(table, c2, cache, msg, nonce) == sign_naive(keys, params, msg, nonce));
            }
        }
    }
}

TEST_CASE("sign_naive is deterministic") {
    const KeyMaterial keys(kK1, kK2);
    const auto msg = from_hex("0badf00d");
    CHECK(sign_naive(keys, {8, 8}, msg, 77) == sign_naive(keys, {8, 8}, msg, 77));
}

TEST_CASE("sign_naive costs one cipher call per padded bit plus one") {
    const Aes128 inner1(kK1), inner2(kK2);
    const MacParams params{16, 2};  // N = 17

    CountingCipher c1(inner1), c2(inner2);
    const std::vector<uint8_t> msg{0x61, 0x62};
    sign_naive(c1, c2, params, msg, 9);
    CHECK(c1.calls() == 17);  // one per bit, regardless of bit value
    CHECK(c2.calls() == 1);   // the masking tag

    // The message content does not change the count.
    c1.reset();
    c2.reset();
    sign_naive(c1, c2, params, {}, 9);
    CHECK(c1.calls() == 17);
    CHECK(c2.calls() == 1);
}

TEST_CASE("oracle rejects over-long messages") {
    const Aes128 c1(kK1);
    const std::vector<uint8_t> msg(3, 0);
    CHECK_THROWS_AS(hash_naive(c1, {16, 2}, msg), std::invalid_argument);
}
