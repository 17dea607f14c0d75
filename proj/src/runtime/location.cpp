#include "emi/runtime/location.hpp"

#include "emi/runtime/errors.hpp"

#include <charconv>

namespace emi::runtime {

Location Location::parse(std::string_view text) {
    constexpr std::string_view socketScheme = "socket://";
    constexpr std::string_view localScheme = "local";

    if (text.substr(0, socketScheme.size()) == socketScheme) {
        std::string_view rest = text.substr(socketScheme.size());
        auto colon = rest.rfind(':');
        if (colon == std::string_view::npos || colon == 0 || colon + 1 == rest.size())
            throw ValidationError("malformed location '" + std::string(text) +
                                  "': expected socket://host:port");
        std::string_view portText = rest.substr(colon + 1);
        unsigned port = 0;
        auto [end, ec] = std::from_chars(portText.data(), portText.data() + portText.size(), port);
        if (ec != std::errc{} || end != portText.data() + portText.size() || port > 65535)
            throw ValidationError("malformed port in location '" + std::string(text) + "'");
        return network(std::string(rest.substr(0, colon)), static_cast<std::uint16_t>(port));
    }

    if (text == localScheme)
        return local("");
    if (text.substr(0, localScheme.size() + 1) == "local:") {
        std::string id(text.substr(localScheme.size() + 1));
        if (id.empty())
            throw ValidationError("empty channel name in '" + std::string(text) + "'");
        return local(std::move(id));
    }

    throw ValidationError("malformed location '" + std::string(text) +
                          "': expected socket://host:port or local[:name]");
}

std::string Location::toString() const {
    if (isNetwork())
        return "socket://" + host + ":" + std::to_string(port);
    return channelId.empty() ? "local" : "local:" + channelId;
}

} // namespace emi::runtime
