#pragma once

#include "emi/config/loader.hpp"
#include "emi/patterns/patterns.hpp"
#include "emi/runtime/deployment.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace emi::harness {

struct CorpusOptions {
    std::uint64_t seed = 1729;
    std::size_t requestsPerOp = 120;
};

/// Conforming random value: records fill declared fields (optional fields
/// sometimes, collections 0..4 items), unions pick an alternative, strings
/// draw from `vocabulary` most of the time so dataset lookups actually hit.
idl::Value randomValue(const idl::ValueType& type, std::mt19937_64& rng,
                       const std::vector<std::string>& vocabulary);

/// Seeded request corpus for an interface. Each operation gets its own
/// deterministic stream (seed mixed with the operation name), so adding an
/// operation never shifts the others' requests.
class Corpus {
public:
    Corpus(const idl::InterfaceDef& iface, const demo::Dataset& data, CorpusOptions opts = {});

    const std::vector<std::string>& operations() const { return ops_; }
    /// Throws std::out_of_range for operations the interface lacks.
    const std::vector<idl::Value>& requests(const std::string& operation) const {
        return byOp_.at(operation);
    }

private:
    std::vector<std::string> ops_;
    std::map<std::string, std::vector<idl::Value>> byOp_;
};

/// Identifier vocabulary of a dataset: author, conference, and publication ids.
std::vector<std::string> datasetVocabulary(const demo::Dataset& data);

struct CheckReport {
    std::string check;
    bool passed = false;
    std::string detail; // counterexample on failure, tally on success
};

bool allPassed(const std::vector<CheckReport>& reports);

struct VerifyOptions {
    std::uint64_t seed = 1729;
    std::size_t requestsPerOp = 120;
};

/// Run one refactoring descriptor's postcondition checks against the running
/// refactored deployment. A fresh oracle deployment is started from the
/// descriptor's pristine service copies and compared outcome-for-outcome.
std::vector<CheckReport> verifyRefactoring(const nlohmann::json& refactoring,
                                           const config::LoadedConfig& cfg,
                                           const config::Registry& registry,
                                           runtime::Deployment& refactored,
                                           VerifyOptions opts = {});

/// Every descriptor in cfg.raw["refactorings"], in order.
std::vector<CheckReport> verifyAll(const config::LoadedConfig& cfg,
                                   const config::Registry& registry,
                                   runtime::Deployment& refactored, VerifyOptions opts = {});

struct BenchOptions {
    int requests = 2000;
    int warmup = 100;
    int hopDelayMs = 1;
    std::uint64_t seed = 1729;
};

struct BenchResult {
    StrategyCell cell;
    double medianMs = 0.0;
    double p95Ms = 0.0;
    int requests = 0;
};

/// Deploy the api-key refactoring at every cell and time authenticated calls
/// at the entry port. Every cell pays the same in-process client leg; the
/// configured hop delay is charged on network hops only, so placement is the
/// only variable.
std::vector<BenchResult> benchApiKeyCells(const nlohmann::json& baseConfig,
                                          const std::string& targetService,
                                          const patterns::ApiKeyConfig& keys,
                                          const idl::IdlDocument& doc,
                                          const config::Registry& registry,
                                          BenchOptions opts = {});

} // namespace emi::harness
