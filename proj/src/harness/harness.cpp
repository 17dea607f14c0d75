#include "emi/harness/harness.hpp"

#include "emi/idl/json.hpp"
#include "emi/runtime/errors.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <set>

namespace emi::harness {

using config::ConfigError;
using config::LoadedConfig;
using config::Registry;
using idl::InterfaceDef;
using idl::Value;
using idl::ValueType;
using nlohmann::json;
using runtime::Deployment;
using runtime::Outcome;

namespace {

std::uint64_t mixSeed(std::uint64_t seed, const std::string& s) {
    return seed ^ (std::hash<std::string>{}(s) + 0x9e3779b97f4a7c15ULL);
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

} // namespace

Value randomValue(const ValueType& type, std::mt19937_64& rng,
                  const std::vector<std::string>& vocabulary) {
    switch (type.kind()) {
    case ValueType::Kind::Primitive:
        switch (type.prim()) {
        case idl::Prim::Void:
            return Value::unit();
        case idl::Prim::Bool:
            return Value::boolean((rng() & 1) != 0);
        case idl::Prim::Int:
            return Value::integer(std::uniform_int_distribution<int>(0, 2400)(rng));
        case idl::Prim::Double:
            return Value::number(std::uniform_real_distribution<double>(0.0, 100.0)(rng));
        case idl::Prim::String:
            if (!vocabulary.empty() && std::uniform_int_distribution<int>(0, 9)(rng) < 7)
                return Value::string(vocabulary[pick(rng, vocabulary.size())]);
            return Value::string("x" + std::to_string(rng() % 100000));
        }
        return Value::unit();
    case ValueType::Kind::Record: {
        Value rec = Value::record();
        for (const auto& f : type.fields()) {
            const auto& card = f.spec.cardinality;
            std::size_t count;
            if (card.unbounded())
                count = std::uniform_int_distribution<std::size_t>(
                    card.min, std::max<std::size_t>(card.min, 4))(rng);
            else
                count = std::uniform_int_distribution<std::uint32_t>(card.min, *card.max)(rng);
            if (count == 0)
                continue;
            std::vector<Value> items;
            items.reserve(count);
            for (std::size_t i = 0; i < count; ++i)
                items.push_back(randomValue(f.spec.type, rng, vocabulary));
            rec.fields().push_back({f.name, std::move(items)});
        }
        return rec;
    }
    case ValueType::Kind::Union: {
        const auto& alts = type.alternatives();
        return randomValue(alts[pick(rng, alts.size())], rng, vocabulary);
    }
    }
    return Value::unit();
}

std::vector<std::string> datasetVocabulary(const demo::Dataset& data) {
    std::vector<std::string> vocab;
    for (const auto& [id, name] : data.authors) {
        (void)name;
        vocab.push_back(id);
    }
    for (const auto& [id, name] : data.conferences) {
        (void)name;
        vocab.push_back(id);
    }
    for (const auto& pub : data.publications)
        vocab.push_back(pub.id);
    return vocab;
}

Corpus::Corpus(const InterfaceDef& iface, const demo::Dataset& data, CorpusOptions opts) {
    const std::vector<std::string> vocab = datasetVocabulary(data);
    for (const auto& op : iface.operations()) {
        ops_.push_back(op.name);
        std::mt19937_64 rng(mixSeed(opts.seed, op.name));
        std::vector<Value> reqs;
        reqs.reserve(opts.requestsPerOp);
        for (std::size_t i = 0; i < opts.requestsPerOp; ++i)
            reqs.push_back(randomValue(op.request, rng, vocab));
        byOp_.emplace(op.name, std::move(reqs));
    }
}

bool allPassed(const std::vector<CheckReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const CheckReport& r) { return r.passed; });
}

// --- check implementations ---------------------------------------------------

namespace {

std::string describe(const Outcome& o) {
    if (o.isFault())
        return "fault " + o.faultName();
    return "response " + idl::canonicalJson(idl::toJson(o.value()));
}

std::string show(const Value& v) { return idl::canonicalJson(idl::toJson(v)); }

runtime::ServiceHandle entryHandle(const json& r, Deployment& dep) {
    return dep.service(r.at("entry").at("service").get<std::string>());
}

std::string entryPort(const json& r) { return r.at("entry").at("port").get<std::string>(); }

std::string oraclePortOf(const json& r, const std::string& service) {
    for (const json& s : r.at("oracle").at("services")) {
        if (s.value("name", "") == service)
            return s.at("inputPorts").at(0).at("name").get<std::string>();
    }
    throw ConfigError("refactoring oracle has no service '" + service + "'");
}

const InterfaceDef& docInterface(const LoadedConfig& cfg, const std::string& name) {
    const InterfaceDef* iface = cfg.doc.findInterface(name);
    if (iface == nullptr)
        throw ConfigError("refactoring references unknown interface '" + name + "'");
    return *iface;
}

Value withKey(Value req, const std::string& field, const std::string& key) {
    if (!req.isRecord())
        req = Value::record();
    req.set(field, Value::string(key));
    return req;
}

std::vector<Value> collectionItems(const Outcome& o, const std::string& field) {
    if (o.isFault() || !o.value().isRecord())
        return {};
    const Value::Field* f = o.value().find(field);
    return f != nullptr ? f->items : std::vector<Value>{};
}

void sortByCriterion(std::vector<Value>& items, const std::string& criterion,
                     const std::map<std::string, std::string>& kinds) {
    if (criterion.empty())
        return;
    const bool numeric = kinds.at(criterion) == "int";
    std::stable_sort(items.begin(), items.end(), [&](const Value& a, const Value& b) {
        const Value* ka = a.isRecord() ? a.single(criterion) : nullptr;
        const Value* kb = b.isRecord() ? b.single(criterion) : nullptr;
        if (numeric) {
            const auto lo = std::numeric_limits<std::int64_t>::min();
            return (ka != nullptr && ka->isInt() ? ka->asInt() : lo) <
                   (kb != nullptr && kb->isInt() ? kb->asInt() : lo);
        }
        return (ka != nullptr && ka->isString() ? ka->asString() : std::string()) <
               (kb != nullptr && kb->isString() ? kb->asString() : std::string());
    });
}

std::int64_t metaOf(const Outcome& o, const char* name) {
    const Value* v = o.value().isRecord() ? o.value().single(name) : nullptr;
    return v != nullptr && v->isInt() ? v->asInt() : std::numeric_limits<std::int64_t>::min();
}

/// Raw HTTP probe; returns 0 when the entry is not a network port.
int wireStatus(runtime::ServiceHandle& gw, const std::string& port, const std::string& path,
               const std::string& op, const Value& req) {
    runtime::Location at = gw.boundLocation(port);
    if (!at.isNetwork())
        return 0;
    httplib::Client cli(at.host, at.port);
    cli.set_read_timeout(5, 0);
    std::string target = "/";
    if (!path.empty())
        target += path + "/";
    target += op;
    auto res = cli.Post(target, idl::toJson(req).dump(), "application/json");
    return res ? res->status : -1;
}

struct CheckContext {
    const json& r;
    const LoadedConfig& cfg;
    Deployment& dep;
    Deployment& oracle;
    VerifyOptions opts;
};

CheckReport checkValidKeyEquivalence(CheckContext& c) {
    CheckReport rep{"valid-key-equivalence", true, ""};
    const std::string origService = c.r.at("original").at("service").get<std::string>();
    const InterfaceDef& iface =
        docInterface(c.cfg, c.r.at("original").at("interface").get<std::string>());
    const json& kc = c.r.at("config");
    const std::string field = kc.value("keyField", "apiKey");
    std::vector<std::string> keys;
    for (const json& k : kc.at("validKeys"))
        keys.push_back(k.get<std::string>());

    Corpus corpus(iface, *c.cfg.dataset, {c.opts.seed, c.opts.requestsPerOp});
    runtime::ServiceHandle gw = entryHandle(c.r, c.dep);
    const std::string port = entryPort(c.r);
    runtime::ServiceHandle osvc = c.oracle.service(origService);
    const std::string oport = oraclePortOf(c.r, origService);

    std::size_t count = 0;
    for (const std::string& op : corpus.operations()) {
        const auto& reqs = corpus.requests(op);
        for (std::size_t i = 0; i < reqs.size(); ++i) {
            Outcome got = gw.dispatch(port, op, withKey(reqs[i], field, keys[i % keys.size()]));
            Outcome want = osvc.dispatch(oport, op, reqs[i]);
            ++count;
            if (!(got == want)) {
                rep.passed = false;
                rep.detail = op + " diverged on " + show(reqs[i]) + ": got " + describe(got) +
                             ", oracle said " + describe(want);
                return rep;
            }
        }
    }
    rep.detail = std::to_string(count) + " keyed requests over " +
                 std::to_string(corpus.operations().size()) + " operations matched the oracle";
    return rep;
}

CheckReport checkInvalidKeyRejected(CheckContext& c) {
    CheckReport rep{"invalid-key-rejected", true, ""};
    const InterfaceDef& iface =
        docInterface(c.cfg, c.r.at("original").at("interface").get<std::string>());
    const json& kc = c.r.at("config");
    const std::string field = kc.value("keyField", "apiKey");
    std::set<std::string> valid;
    for (const json& k : kc.at("validKeys"))
        valid.insert(k.get<std::string>());

    Corpus corpus(iface, *c.cfg.dataset, {c.opts.seed + 1, c.opts.requestsPerOp});
    runtime::ServiceHandle gw = entryHandle(c.r, c.dep);
    const std::string port = entryPort(c.r);

    std::size_t count = 0;
    for (const std::string& op : corpus.operations()) {
        const auto& reqs = corpus.requests(op);
        for (std::size_t i = 0; i < reqs.size(); ++i) {
            std::string bogus = "wrong-key-" + std::to_string(i);
            while (valid.count(bogus) > 0)
                bogus += "!";
            Outcome got = gw.dispatch(port, op, withKey(reqs[i], field, bogus));
            ++count;
            if (!got.isFault() || got.faultName() != "NotAuthorised") {
                rep.passed = false;
                rep.detail = op + " accepted key '" + bogus + "' on " + show(reqs[i]) + ": " +
                             describe(got);
                return rep;
            }
        }
        const int status =
            wireStatus(gw, port, "", op, withKey(corpus.requests(op).front(), field, "no-such-key"));
        if (status != 0 && status != 403) {
            rep.passed = false;
            rep.detail = op + " rejected over the wire with HTTP " + std::to_string(status) +
                         ", want 403";
            return rep;
        }
    }
    rep.detail = std::to_string(count) + " foreign keys were all turned away";
    return rep;
}

CheckReport checkOriginalIsolated(CheckContext& c) {
    CheckReport rep{"original-isolated", true, ""};
    const std::string origService = c.r.at("original").at("service").get<std::string>();
    const std::string distribution = c.r.value("distribution", "");

    if (distribution == "Adjacent") {
        runtime::ServiceHandle orig = c.dep.service(origService);
        if (!orig.embedded()) {
            rep.passed = false;
            rep.detail = origService + " should be embedded in the gateway but is not";
            return rep;
        }
        rep.detail = origService + " runs embedded, reachable only through the gateway";
        return rep;
    }

    // External: the original keeps its deployment, and exactly one service
    // (the gateway) declares a client port against it.
    int clients = 0;
    for (const json& svc : c.cfg.raw.at("services")) {
        for (const json& op : svc.value("outputPorts", json::array())) {
            const std::string target = op.value("target", "");
            if (target.rfind("svc:" + origService + ".", 0) == 0)
                ++clients;
        }
    }
    if (clients != 1) {
        rep.passed = false;
        rep.detail = "expected exactly one configured client of " + origService + ", found " +
                     std::to_string(clients);
        return rep;
    }
    const InterfaceDef& iface =
        docInterface(c.cfg, c.r.at("original").at("interface").get<std::string>());
    const std::string op = iface.operations().front().name;
    Corpus corpus(iface, *c.cfg.dataset, {c.opts.seed + 2, 8});
    runtime::ServiceHandle direct = c.dep.service(origService);
    runtime::ServiceHandle osvc = c.oracle.service(origService);
    const std::string oport = oraclePortOf(c.r, origService);
    for (const Value& req : corpus.requests(op)) {
        Outcome got = direct.dispatch(oport, op, req); // same port name as pristine copy
        Outcome want = osvc.dispatch(oport, op, req);
        if (!(got == want)) {
            rep.passed = false;
            rep.detail = origService + " no longer answers unkeyed " + op + " on " + show(req);
            return rep;
        }
    }
    rep.detail = origService + " still serves unkeyed traffic; one client port references it";
    return rep;
}

struct PageFixture {
    std::string operation;
    std::string collection;
    std::map<std::string, std::string> sorts;
    std::string origService;
    std::string oport;
    InterfaceDef iface;
};

PageFixture pageFixture(CheckContext& c) {
    PageFixture f;
    const json& pc = c.r.at("config");
    f.operation = pc.at("operation").get<std::string>();
    f.collection = pc.at("collectionField").get<std::string>();
    for (const auto& [k, v] : pc.at("sorts").items())
        f.sorts[k] = v.get<std::string>();
    f.origService = c.r.at("original").at("service").get<std::string>();
    f.oport = oraclePortOf(c.r, f.origService);
    f.iface = docInterface(c.cfg, c.r.at("original").at("interface").get<std::string>());
    return f;
}

Value pagedRequest(const Value& base, std::int64_t offset, std::int64_t limit,
                   const std::string& criterion) {
    Value req = base;
    req.set("offset", Value::integer(offset));
    req.set("limit", Value::integer(limit));
    if (!criterion.empty())
        req.set("sortCriterion", Value::string(criterion));
    return req;
}

CheckReport checkPageSlices(CheckContext& c) {
    CheckReport rep{"page-slices-match-oracle", true, ""};
    PageFixture f = pageFixture(c);
    Corpus corpus(f.iface, *c.cfg.dataset, {c.opts.seed, c.opts.requestsPerOp});
    runtime::ServiceHandle gw = entryHandle(c.r, c.dep);
    const std::string port = entryPort(c.r);
    runtime::ServiceHandle osvc = c.oracle.service(f.origService);

    std::vector<std::string> criteria = {""};
    for (const auto& [k, kind] : f.sorts) {
        (void)kind;
        criteria.push_back(k);
    }

    std::size_t pages = 0;
    for (const Value& base : corpus.requests(f.operation)) {
        Outcome full = osvc.dispatch(f.oport, f.operation, base);
        if (full.isFault()) {
            rep.passed = false;
            rep.detail = "oracle faulted on " + show(base) + ": " + describe(full);
            return rep;
        }
        const std::vector<Value> items = collectionItems(full, f.collection);
        for (const std::string& criterion : criteria) {
            std::vector<Value> sorted = items;
            sortByCriterion(sorted, criterion, f.sorts);
            const std::int64_t n = static_cast<std::int64_t>(sorted.size());
            for (std::int64_t limit = 1; limit <= 5; ++limit) {
                const std::int64_t total = n == 0 ? 0 : (n + limit - 1) / limit;
                for (std::int64_t offset = 0; offset < std::max<std::int64_t>(total, 1); ++offset) {
                    Outcome got =
                        gw.dispatch(port, f.operation, pagedRequest(base, offset, limit, criterion));
                    ++pages;
                    std::vector<Value> expect;
                    for (std::int64_t i = offset * limit; i < n && i < offset * limit + limit; ++i)
                        expect.push_back(sorted[i]);
                    if (got.isFault() || collectionItems(got, f.collection) != expect ||
                        metaOf(got, "total") != total || metaOf(got, "offset") != offset ||
                        metaOf(got, "limit") != limit) {
                        rep.passed = false;
                        rep.detail = f.operation + " page (offset " + std::to_string(offset) +
                                     ", limit " + std::to_string(limit) + ", sort '" + criterion +
                                     "') of " + show(base) + " went wrong: " + describe(got);
                        return rep;
                    }
                }
            }
        }
    }

    // Operations the recipe did not touch keep answering as before.
    for (const std::string& op : corpus.operations()) {
        if (op == f.operation)
            continue;
        for (const Value& req : corpus.requests(op)) {
            Outcome got = gw.dispatch(port, op, req);
            Outcome want = osvc.dispatch(f.oport, op, req);
            if (!(got == want)) {
                rep.passed = false;
                rep.detail = "untouched operation " + op + " diverged on " + show(req);
                return rep;
            }
        }
    }
    rep.detail = std::to_string(pages) + " pages matched the brute-force slices";
    return rep;
}

CheckReport checkPagesConcatenate(CheckContext& c) {
    CheckReport rep{"pages-concatenate-to-collection", true, ""};
    PageFixture f = pageFixture(c);
    Corpus corpus(f.iface, *c.cfg.dataset, {c.opts.seed + 3, c.opts.requestsPerOp});
    runtime::ServiceHandle gw = entryHandle(c.r, c.dep);
    const std::string port = entryPort(c.r);
    runtime::ServiceHandle osvc = c.oracle.service(f.origService);
    const std::string criterion = f.sorts.empty() ? "" : f.sorts.begin()->first;

    std::size_t walks = 0;
    for (const Value& base : corpus.requests(f.operation)) {
        Outcome full = osvc.dispatch(f.oport, f.operation, base);
        std::vector<Value> sorted = collectionItems(full, f.collection);
        sortByCriterion(sorted, criterion, f.sorts);
        for (std::int64_t limit = 1; limit <= 5; ++limit) {
            std::vector<Value> glued;
            const std::int64_t total =
                sorted.empty() ? 0
                               : (static_cast<std::int64_t>(sorted.size()) + limit - 1) / limit;
            for (std::int64_t offset = 0; offset < total; ++offset) {
                Outcome page =
                    gw.dispatch(port, f.operation, pagedRequest(base, offset, limit, criterion));
                for (const Value& v : collectionItems(page, f.collection))
                    glued.push_back(v);
            }
            ++walks;
            if (glued != sorted) {
                rep.passed = false;
                rep.detail = "walking " + show(base) + " with limit " + std::to_string(limit) +
                             " lost or reordered items";
                return rep;
            }
        }
    }
    rep.detail = std::to_string(walks) + " page walks reassembled their collections";
    return rep;
}

CheckReport checkInvalidPages(CheckContext& c) {
    CheckReport rep{"invalid-page-requests-fault", true, ""};
    PageFixture f = pageFixture(c);
    Corpus corpus(f.iface, *c.cfg.dataset, {c.opts.seed + 4, 16});
    runtime::ServiceHandle gw = entryHandle(c.r, c.dep);
    const std::string port = entryPort(c.r);
    runtime::ServiceHandle osvc = c.oracle.service(f.origService);

    std::size_t count = 0;
    for (const Value& base : corpus.requests(f.operation)) {
        const std::int64_t n = static_cast<std::int64_t>(
            collectionItems(osvc.dispatch(f.oport, f.operation, base), f.collection).size());
        std::vector<Value> invalid = {
            pagedRequest(base, 0, 0, ""),
            pagedRequest(base, 0, -4, ""),
            pagedRequest(base, -1, 3, ""),
            pagedRequest(base, 0, 2, "noSuchCriterion"),
        };
        if (n > 0)
            invalid.push_back(pagedRequest(base, (n + 1) / 2 + 1, 2, "")); // past the last page
        for (const Value& req : invalid) {
            Outcome got = gw.dispatch(port, f.operation, req);
            ++count;
            if (!got.isFault() || got.faultName() != "InvalidPageRequest") {
                rep.passed = false;
                rep.detail = f.operation + " tolerated " + show(req) + ": " + describe(got);
                return rep;
            }
        }
    }
    const int status = wireStatus(gw, port, "", f.operation,
                                  pagedRequest(corpus.requests(f.operation).front(), 0, 0, ""));
    if (status != 0 && status != 400) {
        rep.passed = false;
        rep.detail = "invalid page travels as HTTP " + std::to_string(status) + ", want 400";
        return rep;
    }
    rep.detail = std::to_string(count) + " malformed page requests all faulted";
    return rep;
}

CheckReport checkMergedOwners(CheckContext& c) {
    CheckReport rep{"merged-responses-match-owners", true, ""};
    runtime::ServiceHandle gw = entryHandle(c.r, c.dep);
    const std::string port = entryPort(c.r);

    std::size_t count = 0;
    for (const json& original : c.r.at("originals")) {
        const std::string service = original.at("service").get<std::string>();
        const InterfaceDef& iface =
            docInterface(c.cfg, original.at("interface").get<std::string>());
        runtime::ServiceHandle osvc = c.oracle.service(service);
        const std::string oport = oraclePortOf(c.r, service);
        Corpus corpus(iface, *c.cfg.dataset, {c.opts.seed, c.opts.requestsPerOp});
        for (const std::string& op : corpus.operations()) {
            for (const Value& req : corpus.requests(op)) {
                Outcome got = gw.dispatch(port, op, req);
                Outcome want = osvc.dispatch(oport, op, req);
                ++count;
                if (!(got == want)) {
                    rep.passed = false;
                    rep.detail = op + " (owned by " + service + ") diverged on " + show(req) +
                                 ": got " + describe(got) + ", owner said " + describe(want);
                    return rep;
                }
            }
        }
    }
    rep.detail = std::to_string(count) + " requests matched their owning services";
    return rep;
}

CheckReport checkMergePreservesOperations(CheckContext& c) {
    CheckReport rep{"merge-preserves-operations", true, ""};
    runtime::ServiceHandle gw = entryHandle(c.r, c.dep);
    const std::string port = entryPort(c.r);

    std::set<std::string> want;
    for (const json& original : c.r.at("originals")) {
        for (const auto& op :
             docInterface(c.cfg, original.at("interface").get<std::string>()).operations())
            want.insert(op.name);
    }
    std::set<std::string> got;
    for (const auto& op : gw.effective(port).direct.operations())
        got.insert(op.name);
    if (got != want) {
        rep.passed = false;
        rep.detail = "gateway exposes " + std::to_string(got.size()) + " operations, want " +
                     std::to_string(want.size());
        return rep;
    }
    Outcome unknown = gw.dispatch(port, "noSuchOperation", Value::record());
    if (unknown.faultName() != "OperationNotFound") {
        rep.passed = false;
        rep.detail = "an unknown operation got " + describe(unknown);
        return rep;
    }
    rep.detail = "gateway exposes exactly the union of both contracts";
    return rep;
}

CheckReport checkVersionedResponses(CheckContext& c) {
    CheckReport rep{"versioned-responses-match-direct", true, ""};
    runtime::ServiceHandle gw = entryHandle(c.r, c.dep);
    const std::string port = entryPort(c.r);

    std::size_t count = 0;
    for (const json& v : c.r.at("versions")) {
        const std::string path = v.at("path").get<std::string>();
        const std::string service = v.at("service").get<std::string>();
        const InterfaceDef& iface = docInterface(c.cfg, v.at("interface").get<std::string>());
        runtime::ServiceHandle osvc = c.oracle.service(service);
        const std::string oport = oraclePortOf(c.r, service);
        Corpus corpus(iface, *c.cfg.dataset, {c.opts.seed, c.opts.requestsPerOp});
        for (const std::string& op : corpus.operations()) {
            for (const Value& req : corpus.requests(op)) {
                Outcome got = gw.dispatchPath(port, path, op, req);
                Outcome want = osvc.dispatch(oport, op, req);
                ++count;
                if (!(got == want)) {
                    rep.passed = false;
                    rep.detail = "/" + path + "/" + op + " diverged on " + show(req) + ": got " +
                                 describe(got) + ", direct " + service + " said " + describe(want);
                    return rep;
                }
            }
        }
    }
    rep.detail = std::to_string(count) + " requests matched their version's direct deployment";
    return rep;
}

CheckReport checkVersionsIsolated(CheckContext& c) {
    CheckReport rep{"versions-isolated", true, ""};
    runtime::ServiceHandle gw = entryHandle(c.r, c.dep);
    const std::string port = entryPort(c.r);
    const json& versions = c.r.at("versions");

    for (const json& v : versions) {
        const std::string path = v.at("path").get<std::string>();
        const std::string service = v.at("service").get<std::string>();
        const InterfaceDef& iface = docInterface(c.cfg, v.at("interface").get<std::string>());
        const std::string op = iface.operations().front().name;
        Corpus corpus(iface, *c.cfg.dataset, {c.opts.seed + 5, 25});

        std::map<std::string, std::uint64_t> before;
        for (const json& other : versions)
            before[other.at("service").get<std::string>()] =
                c.dep.service(other.at("service").get<std::string>()).invocations();

        for (const Value& req : corpus.requests(op))
            gw.dispatchPath(port, path, op, req);

        for (const json& other : versions) {
            const std::string otherService = other.at("service").get<std::string>();
            const std::uint64_t delta =
                c.dep.service(otherService).invocations() - before[otherService];
            if (otherService == service && delta != corpus.requests(op).size()) {
                rep.passed = false;
                rep.detail = otherService + " saw " + std::to_string(delta) + " of " +
                             std::to_string(corpus.requests(op).size()) + " requests sent to /" +
                             path;
                return rep;
            }
            if (otherService != service && delta != 0) {
                rep.passed = false;
                rep.detail = otherService + " received " + std::to_string(delta) +
                             " requests meant for /" + path;
                return rep;
            }
        }
    }
    const InterfaceDef& anyIface =
        docInterface(c.cfg, versions.at(0).at("interface").get<std::string>());
    Outcome unknown = gw.dispatchPath(port, "noSuchVersion",
                                      anyIface.operations().front().name, Value::record());
    if (unknown.faultName() != "UnknownPath") {
        rep.passed = false;
        rep.detail = "an unknown version tag got " + describe(unknown);
        return rep;
    }
    rep.detail = "every version's traffic stayed on its own branch";
    return rep;
}

CheckReport runCheck(const std::string& name, CheckContext& c) {
    if (name == "valid-key-equivalence")
        return checkValidKeyEquivalence(c);
    if (name == "invalid-key-rejected")
        return checkInvalidKeyRejected(c);
    if (name == "original-isolated")
        return checkOriginalIsolated(c);
    if (name == "page-slices-match-oracle")
        return checkPageSlices(c);
    if (name == "pages-concatenate-to-collection")
        return checkPagesConcatenate(c);
    if (name == "invalid-page-requests-fault")
        return checkInvalidPages(c);
    if (name == "merged-responses-match-owners")
        return checkMergedOwners(c);
    if (name == "merge-preserves-operations")
        return checkMergePreservesOperations(c);
    if (name == "versioned-responses-match-direct")
        return checkVersionedResponses(c);
    if (name == "versions-isolated")
        return checkVersionsIsolated(c);
    throw ConfigError("unknown check '" + name + "'");
}

} // namespace

std::vector<CheckReport> verifyRefactoring(const json& refactoring, const LoadedConfig& cfg,
                                           const Registry& registry, Deployment& refactored,
                                           VerifyOptions opts) {
    Deployment::Options oracleOpts;
    oracleOpts.ephemeralNetworkPorts = true;
    Deployment oracle(oracleOpts);
    LoadedConfig oracleCfg = cfg;
    oracleCfg.raw = json{{"services", refactoring.at("oracle").at("services")}};
    config::configureDeployment(oracle, oracleCfg, registry);
    oracle.start();

    CheckContext ctx{refactoring, cfg, refactored, oracle, opts};
    std::vector<CheckReport> out;
    for (const json& c : refactoring.at("checks"))
        out.push_back(runCheck(c.get<std::string>(), ctx));
    return out;
}

std::vector<CheckReport> verifyAll(const LoadedConfig& cfg, const Registry& registry,
                                   Deployment& refactored, VerifyOptions opts) {
    std::vector<CheckReport> out;
    for (const json& r : cfg.raw.value("refactorings", json::array())) {
        const std::string label = r.value("pattern", "?") + " " + r.value("generality", "?") +
                                  "/" + r.value("distribution", "?") + ": ";
        for (CheckReport rep : verifyRefactoring(r, cfg, registry, refactored, opts)) {
            rep.check = label + rep.check;
            out.push_back(std::move(rep));
        }
    }
    return out;
}

std::vector<BenchResult> benchApiKeyCells(const json& baseConfig, const std::string& targetService,
                                          const patterns::ApiKeyConfig& keys,
                                          const idl::IdlDocument& doc, const Registry& registry,
                                          BenchOptions opts) {
    std::vector<BenchResult> out;
    for (StrategyCell cell : allCells()) {
        patterns::RecipeResult res =
            patterns::applyApiKey(baseConfig, targetService, keys, cell, doc);

        Deployment::Options dopts;
        dopts.ephemeralNetworkPorts = true;
        dopts.hopDelayMs = opts.hopDelayMs;
        Deployment dep(dopts);
        LoadedConfig lc = config::resolveConfig(res.config);
        config::configureDeployment(dep, lc, registry);
        dep.start();

        const json& entry = res.config["refactorings"].back();
        runtime::ServiceHandle gw = dep.service(entry["entry"]["service"].get<std::string>());
        const std::string port = entry["entry"]["port"].get<std::string>();
        const InterfaceDef& iface =
            *lc.doc.findInterface(entry["original"]["interface"].get<std::string>());
        const std::string op = iface.operations().front().name;

        Corpus corpus(iface, *lc.dataset, {opts.seed, 64});
        std::vector<Value> reqs;
        for (const Value& base : corpus.requests(op))
            reqs.push_back(withKey(base, keys.keyField, *keys.validKeys.begin()));

        auto fire = [&](std::size_t i) {
            Outcome o = gw.dispatch(port, op, reqs[i % reqs.size()]);
            if (o.isFault())
                throw runtime::RuntimeError("bench request faulted at " + cellName(cell) + ": " +
                                            o.faultName());
        };
        for (int i = 0; i < opts.warmup; ++i)
            fire(static_cast<std::size_t>(i));

        std::vector<double> ms;
        ms.reserve(static_cast<std::size_t>(opts.requests));
        for (int i = 0; i < opts.requests; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            fire(static_cast<std::size_t>(i));
            const auto t1 = std::chrono::steady_clock::now();
            ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
        std::sort(ms.begin(), ms.end());
        BenchResult b;
        b.cell = cell;
        b.requests = opts.requests;
        b.medianMs = ms[ms.size() / 2];
        b.p95Ms = ms[std::min(ms.size() - 1, static_cast<std::size_t>(ms.size() * 0.95))];
        out.push_back(b);
    }
    return out;
}

} // namespace emi::harness
