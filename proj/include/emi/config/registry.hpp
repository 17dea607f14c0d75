#pragma once

#include "emi/demo/dataset.hpp"
#include "emi/runtime/courier.hpp"
#include "emi/runtime/service.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace emi::config {

/// Raised for malformed config documents and unknown registry references.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds a service's base handlers. Factories that need no data ignore the
/// dataset; config carries factory-specific settings.
using BehaviorFactory = std::function<runtime::Behavior(
    const std::shared_ptr<const demo::Dataset>&, const nlohmann::json&)>;

/// Rewrites an existing behavior (wrap handlers, replace one operation).
using WrapperFactory =
    std::function<runtime::Behavior(runtime::Behavior, const nlohmann::json&)>;

using CourierFactory = std::function<runtime::CourierHandler(const nlohmann::json&)>;

/// Name-indexed building blocks a config file can reference.
struct Registry {
    std::map<std::string, BehaviorFactory> behaviors;
    std::map<std::string, WrapperFactory> wrappers;
    std::map<std::string, CourierFactory> couriers;
};

/// Behaviors: "pubcat", "pubcatV2", "citind" (dataset-backed), "forward"
/// (config {routes: {operation: outputPort}}). Wrappers: "apikeyCheck"
/// (config {operations, validKeys, keyField}), "paginate" (config
/// {operation, collectionField, sorts}). Couriers: "apikey" (config
/// {validKeys, keyField}).
Registry standardRegistry();

} // namespace emi::config
