#include "emi/demo/dataset.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace emi::demo {

namespace {

using nlohmann::json;

// Keep byte-identical to data/pubcat_dataset.json; a test diffs the two.
const char* const kBuiltinJson = R"json({
  "authors": {
    "a1": "Nadia Ferri",
    "a2": "Tomas Lindqvist",
    "a3": "Priya Raman",
    "a4": "Jon Eide",
    "a5": "Lucia Marchetti",
    "a6": "Karl Brandt",
    "a7": "Aoife Byrne",
    "a8": "Mateus Silva"
  },
  "conferences": {
    "c1": "International Conference on Service Composition",
    "c2": "Symposium on Service-Oriented Computing and Applications",
    "c3": "Formal Aspects of Component Software"
  },
  "publications": [
    {"id": "p01", "kind": "proceeding", "confId": "c1", "title": "ICSC 2019 Companion Volume", "year": 2019, "doi": "10.5555/p01"},
    {"id": "p02", "kind": "inproceeding", "confId": "c1", "title": "Modular Gateways for Legacy Protocols", "authors": ["a1", "a2"], "year": 2019, "doi": "10.5555/p02"},
    {"id": "p03", "kind": "inproceeding", "confId": "c1", "title": "Cost Models for Edge Caching", "authors": ["a3"], "year": 2019, "doi": "10.5555/p03"},
    {"id": "p04", "kind": "article", "journal": "Journal of Service Computing", "title": "A Calculus of Adapter Chains", "authors": ["a1"], "year": 2020, "doi": "10.5555/p04"},
    {"id": "p05", "kind": "inproceeding", "confId": "c2", "title": "Typed Routers in Practice", "authors": ["a4", "a5"], "year": 2020, "doi": "10.5555/p05"},
    {"id": "p06", "kind": "proceeding", "confId": "c2", "title": "SOCA 2020 Proceedings", "year": 2020, "doi": "10.5555/p06"},
    {"id": "p07", "kind": "article", "journal": "Software: Practice and Experience", "title": "Lessons from Migrating a Monolith", "authors": ["a2", "a6"], "year": 2020, "doi": "10.5555/p07"},
    {"id": "p08", "kind": "inproceeding", "confId": "c2", "title": "Latency Budgets for Composed Services", "authors": ["a1", "a7"], "year": 2020, "doi": "10.5555/p08"},
    {"id": "p09", "kind": "article", "journal": "Journal of Service Computing", "title": "Schema Evolution Without Tears", "authors": ["a8"], "year": 2021, "doi": "10.5555/p09"},
    {"id": "p10", "kind": "inproceeding", "confId": "c3", "title": "Deterministic Replay for Message Passing", "authors": ["a5"], "year": 2021, "doi": "10.5555/p10"},
    {"id": "p11", "kind": "proceeding", "confId": "c3", "title": "FACS 2021 Proceedings", "year": 2021, "doi": "10.5555/p11"},
    {"id": "p12", "kind": "inproceeding", "confId": "c3", "title": "Fault Surfaces of Layered APIs", "authors": ["a1", "a3"], "year": 2021, "doi": "10.5555/p12"},
    {"id": "p13", "kind": "article", "journal": "Transactions on Distributed Systems", "title": "Backpressure in Request Brokers", "authors": ["a4"], "year": 2021, "doi": "10.5555/p13"},
    {"id": "p14", "kind": "inproceeding", "confId": "c1", "title": "Contract Tests at the Boundary", "authors": ["a6", "a2"], "year": 2022, "doi": "10.5555/p14"},
    {"id": "p15", "kind": "article", "journal": "Journal of Service Computing", "title": "Observable Equivalence for Proxies", "authors": ["a1"], "year": 2022, "doi": "10.5555/p15"},
    {"id": "p16", "kind": "inproceeding", "confId": "c2", "title": "Sharded Catalogues on Commodity Hardware", "authors": ["a7", "a8"], "year": 2022, "doi": "10.5555/p16"},
    {"id": "p17", "kind": "inproceeding", "confId": "c3", "title": "Pagination Under Concurrent Writes", "authors": ["a1", "a5"], "year": 2022, "doi": "10.5555/p17"},
    {"id": "p18", "kind": "article", "journal": "Software: Practice and Experience", "title": "Twelve Ways to Version an Endpoint", "authors": ["a3"], "year": 2023, "doi": "10.5555/p18"},
    {"id": "p19", "kind": "inproceeding", "confId": "c1", "title": "Couriers, Filters, and Other Middleboxes", "authors": ["a2", "a4"], "year": 2023, "doi": "10.5555/p19"},
    {"id": "p20", "kind": "article", "journal": "Transactions on Distributed Systems", "title": "The Price of Indirection", "authors": ["a1", "a6"], "year": 2023, "doi": "10.5555/p20"},
    {"id": "p21", "kind": "inproceeding", "confId": "c2", "title": "Embedding Services for Test Isolation", "authors": ["a8"], "year": 2023, "doi": "10.5555/p21"},
    {"id": "p22", "kind": "article", "journal": "Journal of Service Computing", "title": "Measuring Maintainability Drift", "authors": ["a5", "a7"], "year": 2024, "doi": "10.5555/p22"}
  ],
  "citations": {
    "p04": ["p02", "p03"],
    "p07": ["p02"],
    "p08": ["p04", "p05"],
    "p09": ["p04"],
    "p12": ["p08", "p10"],
    "p13": ["p05", "p10"],
    "p14": ["p07", "p02"],
    "p15": ["p04", "p08", "p12"],
    "p16": ["p09"],
    "p17": ["p12", "p10"],
    "p18": ["p09", "p15"],
    "p19": ["p14", "p02"],
    "p20": ["p15", "p08"],
    "p21": ["p16"],
    "p22": ["p20", "p17", "p13"]
  }
}
)json";

Publication::Kind parseKind(const std::string& kind, const std::string& id) {
    if (kind == "proceeding")
        return Publication::Kind::Proceeding;
    if (kind == "inproceeding")
        return Publication::Kind::InProceeding;
    if (kind == "article")
        return Publication::Kind::Article;
    throw DemoError("publication '" + id + "' has unknown kind '" + kind + "'");
}

Dataset fromJson(const json& j) {
    if (!j.is_object())
        throw DemoError("dataset root must be an object");
    Dataset d;
    for (const auto& [id, name] : j.at("authors").items())
        d.authors.emplace(id, name.get<std::string>());
    for (const auto& [id, name] : j.at("conferences").items())
        d.conferences.emplace(id, name.get<std::string>());
    for (const auto& p : j.at("publications")) {
        Publication pub;
        pub.id = p.at("id").get<std::string>();
        pub.kind = parseKind(p.at("kind").get<std::string>(), pub.id);
        pub.title = p.at("title").get<std::string>();
        pub.year = p.at("year").get<int>();
        pub.doi = p.at("doi").get<std::string>();
        if (pub.kind == Publication::Kind::Article)
            pub.journal = p.at("journal").get<std::string>();
        else
            pub.confId = p.at("confId").get<std::string>();
        if (pub.kind != Publication::Kind::Proceeding)
            pub.authors = p.at("authors").get<std::vector<std::string>>();
        d.publications.push_back(std::move(pub));
    }
    for (const auto& [key, cited] : j.at("citations").items())
        d.citations.emplace(key, cited.get<std::vector<std::string>>());
    return d;
}

} // namespace

const std::string& Dataset::builtinJson() {
    static const std::string text = kBuiltinJson;
    return text;
}

Dataset Dataset::builtin() {
    Dataset d = fromJsonText(builtinJson());
    d.validate();
    return d;
}

Dataset Dataset::fromJsonText(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw DemoError("dataset is not valid JSON");
    try {
        return fromJson(j);
    } catch (const DemoError&) {
        throw;
    } catch (const std::exception& e) {
        throw DemoError(std::string("malformed dataset: ") + e.what());
    }
}

Dataset Dataset::loadFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DemoError("cannot open dataset file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    Dataset d = fromJsonText(buf.str());
    d.validate();
    return d;
}

const Publication* Dataset::find(std::string_view pubId) const {
    auto it = std::find_if(publications.begin(), publications.end(),
                           [&](const Publication& p) { return p.id == pubId; });
    return it == publications.end() ? nullptr : &*it;
}

void Dataset::validate() const {
    if (publications.empty())
        throw DemoError("dataset has no publications");
    std::set<std::string> ids;
    for (const Publication& p : publications) {
        if (!ids.insert(p.id).second)
            throw DemoError("duplicate publication id '" + p.id + "'");
        if (p.title.empty() || p.year == 0)
            throw DemoError("publication '" + p.id + "' is missing title or year");
        if (p.kind == Publication::Kind::Article) {
            if (p.journal.empty())
                throw DemoError("article '" + p.id + "' has no journal");
        } else if (!conferences.count(p.confId)) {
            throw DemoError("publication '" + p.id + "' references unknown conference '" +
                            p.confId + "'");
        }
        for (const std::string& a : p.authors) {
            if (!authors.count(a))
                throw DemoError("publication '" + p.id + "' references unknown author '" + a +
                                "'");
        }
    }
    for (const auto& [key, cited] : citations) {
        if (!ids.count(key))
            throw DemoError("citations reference unknown publication '" + key + "'");
        for (const std::string& c : cited) {
            if (!ids.count(c))
                throw DemoError("publication '" + key + "' cites unknown publication '" + c +
                                "'");
        }
    }
}

} // namespace emi::demo
