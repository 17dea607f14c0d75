// emi: deploy, refactor, verify, and time composed services from a config.
//
// Exit codes: 0 success, 1 bad input (config, cell, recipe preconditions,
// failed verification), 2 runtime trouble (ports, transport).

#include "emi/config/loader.hpp"
#include "emi/config/registry.hpp"
#include "emi/harness/harness.hpp"
#include "emi/idl/errors.hpp"
#include "emi/patterns/patterns.hpp"
#include "emi/runtime/deployment.hpp"
#include "emi/runtime/errors.hpp"
#include "emi/scorecard.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <thread>

namespace {

using emi::StrategyCell;
using emi::config::ConfigError;
using emi::config::LoadedConfig;
using emi::runtime::Deployment;
using nlohmann::json;

struct ExitWith {
    int code;
};

std::atomic<bool> gStop{false};

void requestStop(int) { gStop = true; }

const emi::config::Registry& registry() {
    static emi::config::Registry reg = emi::config::standardRegistry();
    return reg;
}

StrategyCell cellArg(const std::string& text) {
    if (auto cell = emi::parseCell(text))
        return *cell;
    throw emi::UnknownStrategyError("unknown cell '" + text +
                                    "', expected generality/distribution, e.g. "
                                    "Parametric/Adjacent");
}

LoadedConfig loadConfig(const std::string& path, const std::string& datasetOverride) {
    LoadedConfig lc = emi::config::loadConfigFile(path);
    if (!datasetOverride.empty()) {
        json raw = lc.raw;
        raw["dataset"] = std::filesystem::absolute(datasetOverride).string();
        lc = emi::config::resolveConfig(raw, std::filesystem::path(path).parent_path().string());
    }
    return lc;
}

Deployment::Options ephemeralOptions() {
    Deployment::Options o;
    o.ephemeralNetworkPorts = true;
    return o;
}

/// Common per-command inputs; every subcommand reads a config file.
struct CommonArgs {
    std::string config;
    std::string dataset;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config, "Deployment config file")->required();
        cmd->add_option("--dataset", dataset, "Override the config's dataset file");
    }
    LoadedConfig load() const { return loadConfig(config, dataset); }
};

void printPorts(Deployment& dep, const json& raw) {
    for (const json& svc : raw.at("services")) {
        const std::string name = svc.at("name").get<std::string>();
        auto handle = dep.service(name);
        for (const json& port : svc.value("inputPorts", json::array())) {
            const std::string portName = port.at("name").get<std::string>();
            const auto& eff = handle.effective(portName);
            std::cout << "  " << name << "." << portName << " at "
                      << handle.boundLocation(portName).toString();
            if (eff.redirecting) {
                std::cout << " redirects";
                for (const auto& [path, iface] : eff.byPath) {
                    (void)iface;
                    std::cout << " /" << path;
                }
            } else {
                std::string names;
                for (const json& exp : port.value("interfaces", json::array()))
                    names += (names.empty() ? "" : "+") + exp.value("interface", "");
                std::string aggregated;
                for (const json& agg : port.value("aggregates", json::array()))
                    aggregated += (aggregated.empty() ? "" : "+") + agg.value("outputPort", "");
                if (!names.empty())
                    std::cout << " serving " << names;
                if (!aggregated.empty())
                    std::cout << " aggregating " << aggregated;
                std::cout << " (" << eff.direct.operations().size() << " operations)";
            }
            std::cout << "\n";
        }
    }
}

int runCheck(const CommonArgs& common) {
    LoadedConfig lc = common.load();
    Deployment dep(ephemeralOptions());
    emi::config::configureDeployment(dep, lc, registry());
    dep.start(); // binds throwaway ports; all wiring validation happens here
    std::cout << "OK: " << dep.serviceNames().size() << " services\n";
    printPorts(dep, lc.raw);
    emi::Scorecard card = emi::scorecardFromConfig(lc.raw);
    if (!card.rows.empty())
        std::cout << "refactorings:\n" << card.renderText();
    dep.stop();
    return 0;
}

int runUp(const CommonArgs& common, int hopDelayMs, std::uint16_t basePort, bool ephemeral) {
    LoadedConfig lc = common.load();
    Deployment::Options o;
    o.hopDelayMs = hopDelayMs;
    o.basePort = basePort;
    o.ephemeralNetworkPorts = ephemeral;
    Deployment dep(o);
    emi::config::configureDeployment(dep, lc, registry());
    dep.start();
    printPorts(dep, lc.raw);
    std::signal(SIGINT, requestStop);
    std::signal(SIGTERM, requestStop);
    std::cout << "serving, Ctrl-C stops\n";
    while (!gStop && dep.running())
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    dep.stop();
    std::cout << "stopped\n";
    return 0;
}

void emitRecipe(const emi::patterns::RecipeResult& res, const std::string& outPath) {
    const std::string text = res.config.dump(2) + "\n";
    if (outPath.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(outPath);
        if (!out)
            throw ConfigError("cannot write '" + outPath + "'");
        out << text;
    }
    const json& entry = res.config.at("refactorings").back().at("entry");
    std::cerr << res.pattern << " at " << emi::cellName(res.cell) << ": E"
              << res.score.efficiency << " M" << res.score.maintainability << " I"
              << res.score.isolation << ", entry " << entry.at("service").get<std::string>()
              << "." << entry.at("port").get<std::string>();
    if (!res.refactoredInterface.name().empty())
        std::cerr << ", serves " << res.refactoredInterface.name();
    std::cerr << "\n";
}

int runVerify(const CommonArgs& common, std::uint64_t seed, std::size_t requests) {
    LoadedConfig lc = common.load();
    if (lc.raw.value("refactorings", json::array()).empty()) {
        std::cout << "nothing to verify: the config lists no refactorings\n";
        return 0;
    }
    Deployment dep(ephemeralOptions());
    emi::config::configureDeployment(dep, lc, registry());
    dep.start();
    std::vector<emi::harness::CheckReport> reports =
        emi::harness::verifyAll(lc, registry(), dep, {seed, requests});
    std::size_t failed = 0;
    for (const auto& rep : reports) {
        if (!rep.passed)
            ++failed;
        std::cout << (rep.passed ? "PASS  " : "FAIL  ") << rep.check;
        if (!rep.detail.empty())
            std::cout << "\n      " << rep.detail;
        std::cout << "\n";
    }
    std::cout << reports.size() << " checks, " << failed << " failed\n";
    if (failed > 0)
        throw ExitWith{1};
    return 0;
}

int runBench(const CommonArgs& common, const std::string& target,
             const std::vector<std::string>& keys, const std::string& keyField,
             emi::harness::BenchOptions opts) {
    LoadedConfig lc = common.load();
    emi::patterns::ApiKeyConfig kc{{keys.begin(), keys.end()}, keyField};
    std::vector<emi::harness::BenchResult> results =
        emi::harness::benchApiKeyCells(lc.raw, target, kc, lc.doc, registry(), opts);
    std::cout << std::left << std::setw(22) << "cell" << std::right << std::setw(12)
              << "median_ms" << std::setw(12) << "p95_ms" << std::setw(10) << "requests"
              << "\n";
    std::cout << std::fixed << std::setprecision(3);
    for (const auto& r : results) {
        std::cout << std::left << std::setw(22) << emi::cellName(r.cell) << std::right
                  << std::setw(12) << r.medianMs << std::setw(12) << r.p95Ms << std::setw(10)
                  << r.requests << "\n";
    }
    return 0;
}

int runScore(const std::string& configPath, const std::string& cellText, bool asJson) {
    if (!configPath.empty()) {
        emi::Scorecard card = emi::scorecardFromConfig(emi::config::loadConfigFile(configPath).raw);
        if (asJson)
            std::cout << card.renderJson().dump(2) << "\n";
        else
            std::cout << card.renderText();
        return 0;
    }
    std::vector<StrategyCell> cells;
    if (!cellText.empty())
        cells.push_back(cellArg(cellText));
    else
        for (StrategyCell cell : emi::allCells())
            cells.push_back(cell);
    if (asJson) {
        json list = json::array();
        for (StrategyCell cell : cells) {
            const emi::EmiScore s = emi::score(cell);
            list.push_back({{"generality", std::string(emi::generalityName(cell.generality))},
                            {"distribution", std::string(emi::distributionName(cell.distribution))},
                            {"e", s.efficiency},
                            {"m", s.maintainability},
                            {"i", s.isolation}});
        }
        std::cout << json{{"cells", std::move(list)}}.dump(2) << "\n";
        return 0;
    }
    for (StrategyCell cell : cells) {
        const emi::EmiScore s = emi::score(cell);
        std::cout << std::left << std::setw(22) << emi::cellName(cell) << "E" << s.efficiency
                  << " M" << s.maintainability << " I" << s.isolation << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"emi: compose services, apply refactoring recipes, verify and time them"};
    app.require_subcommand(1);

    CommonArgs checkArgs;
    CLI::App* check = app.add_subcommand("check", "Validate a config end to end");
    checkArgs.attach(check);
    check->callback([&] { runCheck(checkArgs); });

    CommonArgs upArgs;
    int upHopDelay = 0;
    std::uint16_t upBasePort = 0;
    bool upEphemeral = false;
    CLI::App* up = app.add_subcommand("up", "Start the services and serve until interrupted");
    upArgs.attach(up);
    up->add_option("--hop-delay-ms", upHopDelay, "Artificial delay per network hop");
    up->add_option("--base-port", upBasePort, "First port for 'auto' locations");
    up->add_flag("--ephemeral", upEphemeral, "Bind 'auto' locations to ephemeral ports");
    up->callback([&] { runUp(upArgs, upHopDelay, upBasePort, upEphemeral); });

    CLI::App* apply = app.add_subcommand("apply", "Rewrite a config with a refactoring recipe");
    apply->require_subcommand(1);

    struct {
        CommonArgs common;
        std::string out;
        std::string cell = "Parametric/Adjacent";
        std::string target;
        std::vector<std::string> keys;
        std::string keyField = "apiKey";
        std::string operation;
        std::string left, right;
        std::vector<std::string> versions;
    } a;

    CLI::App* apikey = apply->add_subcommand("apikey", "Gate a service behind API keys");
    a.common.attach(apikey);
    apikey->add_option("--out", a.out, "Write the refactored config here (default stdout)");
    apikey->add_option("--cell", a.cell, "Strategy cell, generality/distribution");
    apikey->add_option("--target", a.target, "Service to gate")->required();
    apikey->add_option("--keys", a.keys, "Accepted keys")->required()->delimiter(',');
    apikey->add_option("--key-field", a.keyField, "Request field holding the key");
    apikey->callback([&] {
        LoadedConfig lc = a.common.load();
        emitRecipe(emi::patterns::applyApiKey(lc.raw, a.target,
                                              {{a.keys.begin(), a.keys.end()}, a.keyField},
                                              cellArg(a.cell), lc.doc),
                   a.out);
    });

    CLI::App* paginate = apply->add_subcommand("paginate", "Page a collection operation");
    a.common.attach(paginate);
    paginate->add_option("--out", a.out, "Write the refactored config here (default stdout)");
    paginate->add_option("--target", a.target, "Service owning the operation")->required();
    paginate->add_option("--operation", a.operation, "Operation to page")->required();
    paginate->callback([&] {
        LoadedConfig lc = a.common.load();
        emitRecipe(emi::patterns::applyPagination(lc.raw, a.target, a.operation, lc.doc), a.out);
    });

    CLI::App* merge = apply->add_subcommand("merge", "Merge two services behind one endpoint");
    a.common.attach(merge);
    merge->add_option("--out", a.out, "Write the refactored config here (default stdout)");
    merge->add_option("--cell", a.cell, "Strategy cell, generality/distribution");
    merge->add_option("--left", a.left, "First service")->required();
    merge->add_option("--right", a.right, "Second service")->required();
    merge->callback([&] {
        LoadedConfig lc = a.common.load();
        emitRecipe(
            emi::patterns::applyMergeEndpoints(lc.raw, a.left, a.right, cellArg(a.cell), lc.doc),
            a.out);
    });

    CLI::App* version = apply->add_subcommand("version", "Route versions by path prefix");
    a.common.attach(version);
    version->add_option("--out", a.out, "Write the refactored config here (default stdout)");
    version->add_option("--cell", a.cell, "Strategy cell, generality/distribution");
    version->add_option("--version", a.versions, "tag=Service, repeat per version")
        ->required()
        ->expected(-2);
    version->callback([&] {
        LoadedConfig lc = a.common.load();
        std::vector<std::pair<std::string, std::string>> versions;
        for (const std::string& v : a.versions) {
            const std::size_t eq = v.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == v.size())
                throw ConfigError("--version wants tag=Service, got '" + v + "'");
            versions.emplace_back(v.substr(0, eq), v.substr(eq + 1));
        }
        emitRecipe(
            emi::patterns::applyVersionIdentifier(lc.raw, versions, cellArg(a.cell), lc.doc),
            a.out);
    });

    CommonArgs verifyArgs;
    std::uint64_t verifySeed = 1729;
    std::size_t verifyRequests = 120;
    CLI::App* verify =
        app.add_subcommand("verify", "Run a config's refactoring checks against an oracle");
    verifyArgs.attach(verify);
    verify->add_option("--seed", verifySeed, "Corpus seed");
    verify->add_option("--requests", verifyRequests, "Requests per operation");
    verify->callback([&] { runVerify(verifyArgs, verifySeed, verifyRequests); });

    CommonArgs benchArgs;
    std::string benchTarget = "PubCat";
    std::vector<std::string> benchKeys = {"bench-key"};
    std::string benchKeyField = "apiKey";
    emi::harness::BenchOptions benchOpts;
    CLI::App* bench =
        app.add_subcommand("bench", "Time the api key refactoring at every strategy cell");
    benchArgs.attach(bench);
    bench->add_option("--target", benchTarget, "Service to gate");
    bench->add_option("--keys", benchKeys, "Accepted keys")->delimiter(',');
    bench->add_option("--key-field", benchKeyField, "Request field holding the key");
    bench->add_option("--requests", benchOpts.requests, "Timed requests per cell");
    bench->add_option("--warmup", benchOpts.warmup, "Untimed requests per cell");
    bench->add_option("--hop-delay-ms", benchOpts.hopDelayMs, "Delay per network hop");
    bench->add_option("--seed", benchOpts.seed, "Corpus seed");
    bench->callback(
        [&] { runBench(benchArgs, benchTarget, benchKeys, benchKeyField, benchOpts); });

    std::string scoreConfig;
    std::string scoreCell;
    bool scoreJson = false;
    CLI::App* score = app.add_subcommand("score", "Show strategy scores");
    score->add_option("--config", scoreConfig, "Score a config's refactorings");
    score->add_option("--cell", scoreCell, "One cell, generality/distribution");
    score->add_flag("--json", scoreJson, "Emit JSON");
    score->callback([&] { runScore(scoreConfig, scoreCell, scoreJson); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ExitWith& e) {
        return e.code;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const emi::patterns::RecipeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const emi::idl::IdlError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const emi::UnknownStrategyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const emi::demo::DemoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const emi::runtime::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
