#include "demo.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <random>
#include <vector>

#include "bpmac/errors.hpp"
#include "bpmac/replay.hpp"
#include "bpmac/wire.hpp"

namespace bpmac::cli {

namespace {

struct SocketGuard {
    int fd = -1;
    ~SocketGuard() {
        if (fd >= 0) ::close(fd);
    }
};

sockaddr_in resolve(const Endpoint& endpoint) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_DGRAM;
    addrinfo* res = nullptr;
    const std::string port = std::to_string(endpoint.port);
    int rc = ::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &res);
    if (rc != 0) throw IoError("cannot resolve " + endpoint.host + ": " + gai_strerror(rc));
    sockaddr_in addr{};
    std::memcpy(&addr, res->ai_addr, sizeof(addr));
    ::freeaddrinfo(res);
    return addr;
}

[[noreturn]] void throw_errno(const char* what) {
    throw IoError(std::string(what) + ": " + std::strerror(errno));
}

}  // namespace

Endpoint parse_endpoint(const std::string& spec) {
    const size_t colon = spec.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
        throw std::invalid_argument("endpoint must be host:port");
    Endpoint ep;
    ep.host = spec.substr(0, colon);
    int port = 0;
    try {
        port = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("endpoint port is not a number");
    }
    if (port < 0 || port > 0xffff) throw std::invalid_argument("endpoint port out of range");
    ep.port = uint16_t(port);
    return ep;
}

int run_demo_recv(const PrecomputedTable& table, const PrfKey& k2, const Endpoint& endpoint,
                  uint64_t count) {
    SocketGuard sock{::socket(AF_INET, SOCK_DGRAM, 0)};
    if (sock.fd < 0) throw_errno("socket");

    sockaddr_in addr = resolve(endpoint);
    if (::bind(sock.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0)
        throw_errno("bind");
    socklen_t addr_len = sizeof(addr);
    if (::getsockname(sock.fd, reinterpret_cast<sockaddr*>(&addr), &addr_len) < 0)
        throw_errno("getsockname");

    std::printf("listening on %s:%u\n", ::inet_ntoa(addr.sin_addr), ntohs(addr.sin_port));
    std::fflush(stdout);

    timeval timeout{5, 0};
    ::setsockopt(sock.fd, SOL_SOCKET, SO_RCVTIMEO, &timeout, sizeof(timeout));

    DatagramVerifier verifier(table, k2);
    uint64_t received = 0, accepted = 0, rejected = 0;
    std::vector<uint8_t> buf(65536);

    while (received < count) {
        ssize_t n = ::recvfrom(sock.fd, buf.data(), buf.size(), 0, nullptr, nullptr);
        if (n < 0) {
            if (errno == EINTR) continue;
            if (errno == EAGAIN || errno == EWOULDBLOCK)
                throw IoError("timed out waiting for datagrams");
            throw_errno("recvfrom");
        }
        ++received;

        RxStatus status = RxStatus::malformed;
        try {
            Datagram d = parse_datagram({buf.data(), size_t(n)}, table.params().tag_len);
            status = verifier.process(d.nonce, d.msg, d.tag);
            std::printf("recv n=%llu len=%zu status=%s\n", (unsigned long long)d.nonce,
                        d.msg.size(), rx_status_name(status));
        } catch (const FormatError&) {
            std::printf("recv len=%zu status=%s\n", size_t(n), rx_status_name(status));
        }
        std::fflush(stdout);
        status == RxStatus::accepted ? ++accepted : ++rejected;
    }

    std::printf("summary received=%llu accepted=%llu rejected=%llu\n",
                (unsigned long long)received, (unsigned long long)accepted,
                (unsigned long long)rejected);
    std::fflush(stdout);
    return 0;
}

int run_demo_send(const PrecomputedTable& table, const PrfKey& k2, const Endpoint& endpoint,
                  uint64_t count, uint64_t seed) {
    SocketGuard sock{::socket(AF_INET, SOCK_DGRAM, 0)};
    if (sock.fd < 0) throw_errno("socket");
    sockaddr_in addr = resolve(endpoint);

    Aes128 k2_cipher(k2);
    MaskingCache cache;
    NonceCounter nonces;
    std::mt19937_64 rng(seed);
    const size_t max_len = std::min<size_t>(table.params().max_msg_len, 32);

    for (uint64_t i = 0; i < count; ++i) {
        std::vector<uint8_t> msg(rng() % (max_len + 1));
        for (auto& b : msg) b = uint8_t(rng());

        const uint64_t nonce = nonces.next();
        const Tag tag = sign(table, k2_cipher, cache, msg, nonce);
        const auto pkt = pack_datagram(nonce, msg, tag);

        if (::sendto(sock.fd, pkt.data(), pkt.size(), 0, reinterpret_cast<sockaddr*>(&addr),
                     sizeof(addr)) < 0)
            throw_errno("sendto");
        std::printf("sent n=%llu len=%zu\n", (unsigned long long)nonce, msg.size());
        ::usleep(300);  // pace sends so loopback buffers never overflow
    }

    std::printf("summary sent=%llu\n", (unsigned long long)count);
    return 0;
}

}  // namespace bpmac::cli
