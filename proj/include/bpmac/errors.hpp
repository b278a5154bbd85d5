#pragma once

#include <stdexcept>

namespace bpmac {

// Malformed serialized input: key files, precomputed tables, datagrams, hex.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem or socket failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The nonce counter reached its final value; the key must be rotated.
class NonceExhaustedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bpmac
