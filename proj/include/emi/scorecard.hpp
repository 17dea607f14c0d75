#pragma once

#include "emi/score.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace emi {

/// Per-refactoring strategy report over a deployment config. Rows are listed,
/// not aggregated: the framework defines no composition of cell scores.
struct Scorecard {
    struct Row {
        std::string pattern;
        StrategyCell cell;
        EmiScore score;
        bool operator==(const Row&) const = default;
    };

    std::vector<Row> rows;

    /// Aligned rows like "apikey: Parametric/Adjacent E2 M3 I2".
    std::string renderText() const;

    /// {"refactorings":[{"pattern","generality","distribution","e","m","i"}]}
    nlohmann::json renderJson() const;
};

/// Reads the config's "refactorings" entries ({pattern, generality,
/// distribution, ...}). Throws UnknownStrategyError for unrecognized
/// generality or distribution names.
Scorecard scorecardFromConfig(const nlohmann::json& config);

} // namespace emi
