#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace emi::runtime {

/// Where a port listens or connects: a TCP endpoint ("socket://host:port") or
/// an in-process channel ("local:name"). Port 0 asks for an ephemeral port;
/// bound locations always carry the real one.
struct Location {
    enum class Kind { Network, Local };

    Kind kind = Kind::Local;
    std::string host;      // Network
    std::uint16_t port = 0; // Network
    std::string channelId; // Local

    static Location network(std::string host, std::uint16_t port) {
        return {Kind::Network, std::move(host), port, {}};
    }
    static Location local(std::string channelId) {
        return {Kind::Local, {}, 0, std::move(channelId)};
    }

    bool isNetwork() const { return kind == Kind::Network; }
    bool isLocal() const { return kind == Kind::Local; }

    /// "socket://host:port" or "local:channel". Throws ValidationError on
    /// malformed text.
    static Location parse(std::string_view text);
    std::string toString() const;

    bool operator==(const Location&) const = default;
};

} // namespace emi::runtime
