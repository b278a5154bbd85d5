#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace bpmac {

// Sender-side nonce source: a zero-initialized counter, strictly increasing.
// The final 64-bit value is never issued; reaching it raises
// NonceExhaustedError and leaves the counter unchanged. Single-writer.
class NonceCounter {
public:
    NonceCounter() = default;
    explicit NonceCounter(uint64_t start) : next_(start) {}

    // Returns the current value, then advances.
    uint64_t next();

    uint64_t peek() const { return next_; }

private:
    uint64_t next_ = 0;
};

// Receiver-side anti-replay tracking: a sliding bitmap over the most recent
// `window` nonces ending at the highest accepted one. Each nonce is accepted
// at most once; nonces `window` or more behind the highest seen are rejected
// outright. Single-writer; one verifying context owns the window.
class ReplayWindow {
public:
    explicit ReplayWindow(size_t window = 64);

    // True exactly once per fresh, in-window nonce; updates state on accept.
    bool accept(uint64_t nonce);

    std::optional<uint64_t> highest_seen() const;
    size_t window() const { return window_; }

private:
    bool test(size_t offset) const;
    void set(size_t offset);
    void shift_older(uint64_t by);

    size_t window_;
    std::vector<uint64_t> bitmap_;  // bit i == nonce (highest_ - i) seen
    uint64_t highest_ = 0;
    bool seen_any_ = false;
};

}  // namespace bpmac
