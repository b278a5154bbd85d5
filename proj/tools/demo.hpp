#pragma once

#include <cstdint>
#include <string>

#include "bpmac/mac.hpp"

namespace bpmac::cli {

struct Endpoint {
    std::string host;
    uint16_t port = 0;
};

// "host:port"; throws std::invalid_argument on anything else.
Endpoint parse_endpoint(const std::string& spec);

// Receives `count` datagrams on the endpoint (port 0 picks one; the actual
// address is printed first), verifying and replay-checking each, one
// transcript line per packet.
int run_demo_recv(const PrecomputedTable& table, const PrfKey& k2, const Endpoint& endpoint,
                  uint64_t count);

// Sends `count` authenticated datagrams with seeded pseudorandom payloads
// and counter nonces.
int run_demo_send(const PrecomputedTable& table, const PrfKey& k2, const Endpoint& endpoint,
                  uint64_t count, uint64_t seed);

}  // namespace bpmac::cli
