#pragma once

#include "emi/idl/parser.hpp"
#include "emi/runtime/service.hpp"
#include "emi/score.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace emi::patterns {

/// Recipe preconditions and cell restrictions surface here: IllegalCell,
/// MergeConflict, NotACollection, DuplicateTag, plus config lookup failures.
class RecipeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ApiKeyConfig {
    std::set<std::string> validKeys;
    std::string keyField = "apiKey";
};

struct PaginateConfig {
    std::string operation;
    std::string collectionField;
    /// sort criterion -> item field kind, "int" or "string". The criterion
    /// names the item field it sorts by.
    std::map<std::string, std::string> sorts;
};

/// What a recipe hands back: the new contract, a complete deployment config
/// (base config transformed), and the postcondition checks the harness runs.
struct RecipeResult {
    std::string pattern;
    StrategyCell cell;
    EmiScore score;
    idl::InterfaceDef refactoredInterface;
    std::string refactoredIdl; // parses to everything the config references
    nlohmann::json config;
    std::vector<std::string> checkNames;
};

// Runtime building blocks. The standard registry exposes them as courier
// "apikey", wrappers "apikeyCheck" and "paginate", behavior "forward".

/// Interface-agnostic key check: knows the key field and the key set,
/// nothing about the operations it guards.
runtime::CourierHandler apiKeyCourier(ApiKeyConfig cfg);

/// Per-operation key check wrapping existing handlers: validates, strips the
/// key field, delegates. Only the named operations are wrapped.
runtime::Behavior apiKeyCheckWrapper(runtime::Behavior inner,
                                     const std::vector<std::string>& operations,
                                     ApiKeyConfig cfg);

/// Handlers that forward each listed operation to a named output port.
runtime::Behavior forwardBehavior(const std::map<std::string, std::string>& routes);

/// Replaces the handler of one operation with validate -> sort -> slice over
/// the inner handler's collection response.
runtime::Behavior paginateWrapper(runtime::Behavior inner, PaginateConfig cfg);

// The recipes. `baseConfig` is a deployment config whose services the recipe
// rewrites; `doc` declares the interfaces those services mention.

RecipeResult applyApiKey(const nlohmann::json& baseConfig, const std::string& targetService,
                         const ApiKeyConfig& cfg, StrategyCell cell,
                         const idl::IdlDocument& doc);

/// Cell is fixed AdHoc/Internal: the provider's own handler changes.
RecipeResult applyPagination(const nlohmann::json& baseConfig, const std::string& targetService,
                             const std::string& operation, const idl::IdlDocument& doc);

RecipeResult applyMergeEndpoints(const nlohmann::json& baseConfig, const std::string& serviceA,
                                 const std::string& serviceB, StrategyCell cell,
                                 const idl::IdlDocument& doc);

/// Versions are (path tag, service name) pairs; generality is Parametric by
/// construction (redirection never names operations).
RecipeResult applyVersionIdentifier(const nlohmann::json& baseConfig,
                                    const std::vector<std::pair<std::string, std::string>>& versions,
                                    StrategyCell cell, const idl::IdlDocument& doc);

} // namespace emi::patterns
