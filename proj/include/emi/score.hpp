#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace emi {

/// How a refactoring is written: hardcoded against one API, or reusable
/// across APIs.
enum class Generality { AdHoc, Parametric };

/// Where the refactored functionality runs relative to the original provider:
/// in its codebase, on shared local resources, or across the network.
enum class Distribution { Internal, Adjacent, External };

struct StrategyCell {
    Generality generality;
    Distribution distribution;
    bool operator==(const StrategyCell&) const = default;
};

/// One level per dimension, 1 (worst) to 3 (best).
struct EmiScore {
    int efficiency;
    int maintainability;
    int isolation;

    int sum() const { return efficiency + maintainability + isolation; }
    bool operator==(const EmiScore&) const = default;
};

/// The fixed score for a development strategy. Total over all six cells.
EmiScore score(StrategyCell cell);

constexpr std::array<StrategyCell, 6> allCells() {
    return {{
        {Generality::AdHoc, Distribution::Internal},
        {Generality::AdHoc, Distribution::Adjacent},
        {Generality::AdHoc, Distribution::External},
        {Generality::Parametric, Distribution::Internal},
        {Generality::Parametric, Distribution::Adjacent},
        {Generality::Parametric, Distribution::External},
    }};
}

std::string_view generalityName(Generality g);   // "AdHoc" | "Parametric"
std::string_view distributionName(Distribution d);

/// "Parametric/Adjacent" and the like.
std::string cellName(StrategyCell cell);

/// Case-insensitive; accepts "adhoc" and "ad-hoc". Nullopt when unrecognized.
std::optional<Generality> parseGenerality(std::string_view text);
std::optional<Distribution> parseDistribution(std::string_view text);
/// Parses "generality/distribution", e.g. "parametric/adjacent".
std::optional<StrategyCell> parseCell(std::string_view text);

class UnknownStrategyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace emi
