#pragma once

#include "emi/config/registry.hpp"
#include "emi/idl/parser.hpp"
#include "emi/runtime/deployment.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <string>

namespace emi::config {

/// A config document plus its resolved contract and data:
///   {
///     "idl": "pubcat" | path,          (default "pubcat")
///     "idlText": "...",                (inline IDL source; beats "idl")
///     "dataset": "builtin" | path,     (default "builtin")
///     "services": [ ServiceObj... ],
///     "refactorings": [ ... ]          (descriptors for verify/score)
///   }
/// ServiceObj: {name, behavior?, behaviorConfig?, wrappers?: [{name, config}],
/// inputPorts: [{name, location, interfaces?: [{interface, extender?}],
/// aggregates?: [{outputPort, extender?}], redirects?: [{path, outputPort}],
/// couriers?: [{operation? | interface?, courier, config?}]}],
/// outputPorts?: [{name, target, interface}], embeds?: [{as, service}]}.
///
/// Locations: "auto" (network, deployment-assigned port), "local",
/// "local:<channel>", or "socket://host:port". Output-port targets
/// additionally accept "svc:Service.port" for in-deployment references.
struct LoadedConfig {
    nlohmann::json raw;
    idl::IdlDocument doc;
    std::shared_ptr<const demo::Dataset> dataset;
};

/// Parse a config file and resolve its idl/dataset references. Relative
/// paths resolve against the config file's directory.
LoadedConfig loadConfigFile(const std::string& path);

/// Same, for an already-parsed document; `baseDir` anchors relative paths.
LoadedConfig resolveConfig(nlohmann::json config, const std::string& baseDir = ".");

/// Translate one service object into a deployable spec.
runtime::ServiceSpec serviceFromConfig(const nlohmann::json& svc, const LoadedConfig& cfg,
                                       const Registry& registry);

/// Add every service in cfg.raw["services"] to `dep` (construct the
/// deployment with whatever options suit the caller, then start it).
void configureDeployment(runtime::Deployment& dep, const LoadedConfig& cfg,
                         const Registry& registry);

} // namespace emi::config
