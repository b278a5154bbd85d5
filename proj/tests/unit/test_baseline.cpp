#include <doctest.h>

#include <random>
#include <string_view>

#include "bpmac/baseline.hpp"
#include "bpmac/bytes.hpp"

using namespace bpmac;

namespace {

std::vector<uint8_t> bytes_of(std::string_view s) {
    return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("hmac-sha256 RFC 4231 vectors") {
    // Test case 1
    CHECK(to_hex(hmac_sha256(std::vector<uint8_t>(20, 0x0b), bytes_of("Hi There"))) ==
          "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
    // Test case 2
    CHECK(to_hex(hmac_sha256(bytes_of("Jefe"), bytes_of("what do ya want for nothing?"))) ==
          "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
    // Test case 3
    CHECK(to_hex(hmac_sha256(std::vector<uint8_t>(20, 0xaa), std::vector<uint8_t>(50, 0xdd))) ==
          "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe");
    // Test case 5: truncated output
    const auto tc5 = hmac_sha256(std::vector<uint8_t>(20, 0x0c), bytes_of("Test With Truncation"));
    CHECK(to_hex(std::span<const uint8_t>(tc5.data(), 16)) == "a3b6167473100ee06e0c796c2955552b");
    // Test case 6: key larger than one block
    CHECK(to_hex(hmac_sha256(std::vector<uint8_t>(131, 0xaa),
                             bytes_of("Test Using Larger Than Block-Size Key - Hash Key First"))) ==
          "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54");
}

TEST_CASE("aes-cmac RFC 4493 vectors") {
    const PrfKey key = PrfKey::from(from_hex("2b7e151628aed2a6abf7158809cf4f3c"));
    const Aes128 cipher(key);

    CHECK(to_hex(aes_cmac(cipher, {})) == "bb1d6929e95937287fa37d129b756746");
    CHECK(to_hex(aes_cmac(cipher, from_hex("6bc1bee22e409f96e93d7e117393172a"))) ==
          "070a16b46b4d4144f79bdd9dd04a287c");
    CHECK(to_hex(aes_cmac(cipher,
                          from_hex("6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c"
                                   "9eb76fac45af8e5130c81c46a35ce411"))) ==
          "dfa66747de9ae63030ca32611497c827");
    CHECK(to_hex(aes_cmac(cipher,
                          from_hex("6bc1bee22e409f96e93d7e117393172aae2d8a571e03ac9c"
                                   "9eb76fac45af8e5130c81c46a35ce411e5fbc1191a0a52ef"
                                   "f69f2445df4f9b17ad2b417be66c3710"))) ==
          "51f0bebf7e3b9d92fc49741779363cfe");
}

TEST_CASE("cmac baseline streams nonce||msg identically to one-shot cmac") {
    const PrfKey key = PrfKey::from(from_hex("2b7e151628aed2a6abf7158809cf4f3c"));
    const Aes128 cipher(key);
    const AesCmacMac mac(key, 16);
    std::mt19937_64 rng(0x5eed5001);

    for (size_t len : {size_t(0), size_t(1), size_t(7), size_t(8), size_t(16), size_t(24),
                       size_t(40), size_t(100)}) {
        std::vector<uint8_t> msg(len);
        for (auto& b : msg) b = uint8_t(rng());
        const uint64_t nonce = rng();

        std::vector<uint8_t> concat(8 + len);
        store_be64(nonce, concat.data());
        std::copy(msg.begin(), msg.end(), concat.begin() + 8);

        const Block expected = aes_cmac(cipher, concat);
        const Tag tag = mac.sign(msg, nonce);
        CHECK(std::equal(tag.bytes().begin(), tag.bytes().end(), expected.begin()));
    }
}

TEST_CASE("baseline schemes behave like MACs") {
    std::mt19937_64 rng(0x5eed5002);
    std::vector<uint8_t> key_bytes(16);
    for (auto& b : key_bytes) b = uint8_t(rng());

    const HmacSha256Mac hmac(key_bytes, 16);
    const AesCmacMac cmac(PrfKey::from(key_bytes), 16);
    const BaselineMac* schemes[] = {&hmac, &cmac};

    for (const BaselineMac* mac : schemes) {
        CAPTURE(mac->name());
        const auto msg = from_hex("00112233445566778899");

        // deterministic
        CHECK(mac->sign(msg, 3) == mac->sign(msg, 3));
        // nonce-sensitive
        CHECK(mac->sign(msg, 3) != mac->sign(msg, 4));
        // round trip + corruption sweep
        const Tag tag = mac->sign(msg, 3);
        CHECK(mac->verify(msg, 3, tag));
        for (int trial = 0; trial < 20; ++trial) {
            auto bad = msg;
            bad[rng() % bad.size()] ^= uint8_t(1u << (rng() % 8));
            CHECK_FALSE(mac->verify(bad, 3, tag));
        }
    }
}

TEST_CASE("wrong key rejects") {
    std::mt19937_64 rng(0x5eed5003);
    const auto msg = from_hex("deadbeef");
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint8_t> ka(16), kb(16);
        for (auto& b : ka) b = uint8_t(rng());
        do {
            for (auto& b : kb) b = uint8_t(rng());
        } while (kb == ka);

        const HmacSha256Mac mac_a(ka, 16);
        const HmacSha256Mac mac_b(kb, 16);
        CHECK_FALSE(mac_b.verify(msg, 1, mac_a.sign(msg, 1)));
    }
}

TEST_CASE("baseline tags truncate from the leading bytes") {
    const auto key = from_hex("2b7e151628aed2a6abf7158809cf4f3c");
    const HmacSha256Mac full(key, 16);
    const HmacSha256Mac quarter(key, 4);
    const auto msg = from_hex("cafe");

    const Tag long_tag = full.sign(msg, 9);
    const Tag short_tag = quarter.sign(msg, 9);
    CHECK(short_tag.size() == 4);
    CHECK(std::equal(short_tag.bytes().begin(), short_tag.bytes().end(),
                     long_tag.bytes().begin()));
}

TEST_CASE("cmac baseline performs cipher work for every tag") {
    const PrfKey key = PrfKey::from(from_hex("2b7e151628aed2a6abf7158809cf4f3c"));
    const Aes128 inner(key);
    CountingCipher counted(inner);
    const AesCmacMac mac(counted, 16);
    counted.reset();  // subkey derivation cost

    const auto msg = from_hex("01");
    mac.sign(msg, 0);
    CHECK(counted.calls() >= 1);

    counted.reset();
    for (int i = 0; i < 10; ++i) mac.sign(msg, uint64_t(i));
    CHECK(counted.calls() >= 10);  // no way to amortize across tags
}
