#include "emi/scorecard.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace emi {

std::string Scorecard::renderText() const {
    std::size_t width = 0;
    for (const auto& row : rows)
        width = std::max(width, row.pattern.size());

    std::ostringstream os;
    for (const auto& row : rows) {
        os << row.pattern << ":" << std::string(width - row.pattern.size() + 1, ' ')
           << cellName(row.cell) << " E" << row.score.efficiency << " M"
           << row.score.maintainability << " I" << row.score.isolation << "\n";
    }
    return os.str();
}

nlohmann::json Scorecard::renderJson() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& row : rows) {
        list.push_back({
            {"pattern", row.pattern},
            {"generality", std::string(generalityName(row.cell.generality))},
            {"distribution", std::string(distributionName(row.cell.distribution))},
            {"e", row.score.efficiency},
            {"m", row.score.maintainability},
            {"i", row.score.isolation},
        });
    }
    return nlohmann::json{{"refactorings", std::move(list)}};
}

Scorecard scorecardFromConfig(const nlohmann::json& config) {
    Scorecard card;
    if (!config.contains("refactorings"))
        return card;
    for (const auto& entry : config.at("refactorings")) {
        std::string pattern = entry.value("pattern", "?");
        std::string g = entry.value("generality", "");
        std::string d = entry.value("distribution", "");
        auto generality = parseGenerality(g);
        if (!generality)
            throw UnknownStrategyError("unknown generality '" + g + "' for pattern '" +
                                       pattern + "'");
        auto distribution = parseDistribution(d);
        if (!distribution)
            throw UnknownStrategyError("unknown distribution '" + d + "' for pattern '" +
                                       pattern + "'");
        StrategyCell cell{*generality, *distribution};
        card.rows.push_back({std::move(pattern), cell, score(cell)});
    }
    return card;
}

} // namespace emi
