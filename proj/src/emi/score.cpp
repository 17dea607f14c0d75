#include "emi/score.hpp"

#include <algorithm>
#include <cctype>

namespace emi {

EmiScore score(StrategyCell cell) {
    const bool parametric = cell.generality == Generality::Parametric;
    switch (cell.distribution) {
    case Distribution::Internal:
        return parametric ? EmiScore{2, 2, 1} : EmiScore{3, 1, 1};
    case Distribution::Adjacent:
        return parametric ? EmiScore{2, 3, 2} : EmiScore{2, 2, 2};
    case Distribution::External:
        return parametric ? EmiScore{1, 3, 3} : EmiScore{1, 2, 3};
    }
    return {1, 1, 1}; // unreachable
}

std::string_view generalityName(Generality g) {
    return g == Generality::AdHoc ? "AdHoc" : "Parametric";
}

std::string_view distributionName(Distribution d) {
    switch (d) {
    case Distribution::Internal: return "Internal";
    case Distribution::Adjacent: return "Adjacent";
    case Distribution::External: return "External";
    }
    return "?";
}

std::string cellName(StrategyCell cell) {
    return std::string(generalityName(cell.generality)) + "/" +
           std::string(distributionName(cell.distribution));
}

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::optional<Generality> parseGenerality(std::string_view text) {
    std::string t = lower(text);
    if (t == "adhoc" || t == "ad-hoc")
        return Generality::AdHoc;
    if (t == "parametric")
        return Generality::Parametric;
    return std::nullopt;
}

std::optional<Distribution> parseDistribution(std::string_view text) {
    std::string t = lower(text);
    if (t == "internal")
        return Distribution::Internal;
    if (t == "adjacent")
        return Distribution::Adjacent;
    if (t == "external")
        return Distribution::External;
    return std::nullopt;
}

std::optional<StrategyCell> parseCell(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return std::nullopt;
    auto g = parseGenerality(text.substr(0, slash));
    auto d = parseDistribution(text.substr(slash + 1));
    if (!g || !d)
        return std::nullopt;
    return StrategyCell{*g, *d};
}

} // namespace emi
