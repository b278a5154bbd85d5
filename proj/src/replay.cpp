#include "bpmac/replay.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "bpmac/errors.hpp"

namespace bpmac {

uint64_t NonceCounter::next() {
    if (next_ == std::numeric_limits<uint64_t>::max())
        throw NonceExhaustedError("nonce counter exhausted; rotate keys");
    return next_++;
}

ReplayWindow::ReplayWindow(size_t window) : window_(window), bitmap_((window + 63) / 64, 0) {
    if (window == 0) throw std::invalid_argument("replay window must be >= 1");
}

bool ReplayWindow::test(size_t offset) const {
    return (bitmap_[offset / 64] >> (offset % 64)) & 1u;
}

void ReplayWindow::set(size_t offset) { bitmap_[offset / 64] |= uint64_t(1) << (offset % 64); }

void ReplayWindow::shift_older(uint64_t by) {
    if (by >= window_) {
        std::fill(bitmap_.begin(), bitmap_.end(), 0);
        return;
    }
    const size_t word_shift = size_t(by / 64);
    const size_t bit_shift = size_t(by % 64);
    for (size_t i = bitmap_.size(); i-- > 0;) {
        uint64_t v = 0;
        if (i >= word_shift) {
            v = bitmap_[i - word_shift] << bit_shift;
            if (bit_shift != 0 && i > word_shift) v |= bitmap_[i - word_shift - 1] >> (64 - bit_shift);
        }
        bitmap_[i] = v;
    }
}

bool ReplayWindow::accept(uint64_t nonce) {
    if (!seen_any_) {
        seen_any_ = true;
        highest_ = nonce;
        set(0);
        return true;
    }
    if (nonce > highest_) {
        shift_older(nonce - highest_);
        highest_ = nonce;
        set(0);
        return true;
    }
    const uint64_t age = highest_ - nonce;
    if (age >= window_) return false;  // older than the window tracks
    if (test(size_t(age))) return false;
    set(size_t(age));
    return true;
}

std::optional<uint64_t> ReplayWindow::highest_seen() const {
    if (!seen_any_) return std::nullopt;
    return highest_;
}

}  // namespace bpmac
