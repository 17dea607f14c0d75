// Catalogue fixture and demo services, checked against scan oracles written
// here rather than against the production query code.

#include "emi/demo/dataset.hpp"
#include "emi/demo/model.hpp"
#include "emi/demo/services.hpp"
#include "emi/idl/conformance.hpp"
#include "emi/idl/json.hpp"
#include "emi/idl/parser.hpp"
#include "emi/runtime/deployment.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace emi;
using namespace emi::demo;
using runtime::Deployment;
using runtime::Location;
using runtime::Outcome;
using idl::Value;

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "cannot open " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::shared_ptr<const Dataset> sharedBuiltin() {
    static auto data = std::make_shared<const Dataset>(Dataset::builtin());
    return data;
}

// Test-local mirror of the wire shape, kept independent of publicationValue.
Value expectedPub(const Publication& p, bool withDoi) {
    Value::Fields fields;
    if (p.kind == Publication::Kind::Article)
        fields.emplace_back("journal", Value::string(p.journal));
    else
        fields.emplace_back("confId", Value::string(p.confId));
    fields.emplace_back("title", Value::string(p.title));
    if (!p.authors.empty()) {
        std::vector<Value> items;
        for (const auto& a : p.authors)
            items.push_back(Value::string(a));
        fields.emplace_back("authors", std::move(items));
    }
    fields.emplace_back("year", Value::integer(p.year));
    if (withDoi)
        fields.emplace_back("doi", Value::string(p.doi));
    return Value::record(std::move(fields));
}

std::vector<const Publication*> scanByAuthor(const Dataset& d, const std::string& author) {
    std::vector<const Publication*> out;
    for (const auto& p : d.publications) {
        if (std::find(p.authors.begin(), p.authors.end(), author) != p.authors.end())
            out.push_back(&p);
    }
    return out;
}

Value keyRequest(const char* field, const std::string& v) {
    return Value::record({{field, Value::string(v)}});
}

struct DemoFixture {
    std::shared_ptr<const Dataset> data = sharedBuiltin();
    Deployment dep; // local ports only, nothing binds a socket

    DemoFixture() {
        dep.add(pubCatService("PubCat", Location::local(""), data));
        dep.add(pubCatV2Service("PubCatV2", Location::local(""), data));
        dep.add(citIndService("CitInd", Location::local(""), data));
        dep.start();
    }
};

} // namespace

TEST_CASE("the builtin dataset is internally consistent and big enough") {
    Dataset d = Dataset::builtin();
    d.validate();

    CHECK(d.publications.size() >= 20);
    CHECK(d.authors.size() == 8);

    int proceedings = 0, inproceedings = 0, articles = 0;
    for (const auto& p : d.publications) {
        switch (p.kind) {
        case Publication::Kind::Proceeding: proceedings++; break;
        case Publication::Kind::InProceeding: inproceedings++; break;
        case Publication::Kind::Article: articles++; break;
        }
    }
    CHECK(proceedings > 0);
    CHECK(inproceedings > 0);
    CHECK(articles > 0);

    // Pagination examples lean on these two sizes.
    CHECK(scanByAuthor(d, "a1").size() == 7);
    CHECK(scanByAuthor(d, "a3").size() == 3);

    SUBCASE("every citation key resolves both ways") {
        for (const auto& [key, cited] : d.citations) {
            CHECK(d.find(key) != nullptr);
            for (const auto& c : cited)
                CHECK(d.find(c) != nullptr);
        }
    }
}

TEST_CASE("the shipped dataset file and the builtin fixture are the same bytes") {
    std::string path = std::string(EMI_SOURCE_DIR) + "/data/pubcat_dataset.json";
    CHECK(readFile(path) == Dataset::builtinJson());
}

TEST_CASE("the shipped idl file matches the in-memory contract") {
    std::string path = std::string(EMI_SOURCE_DIR) + "/data/pubcat.idl";
    idl::IdlDocument doc = idl::parseIdl(readFile(path));

    const idl::InterfaceDef* pc = doc.findInterface("PubCatInterface");
    REQUIRE(pc != nullptr);
    CHECK(pc->structurallyEqual(pubCatInterface()));

    const idl::InterfaceDef* v2 = doc.findInterface("PubCatInterfaceV2");
    REQUIRE(v2 != nullptr);
    CHECK(v2->structurallyEqual(pubCatV2Interface()));

    const idl::InterfaceDef* ci = doc.findInterface("CitIndInterface");
    REQUIRE(ci != nullptr);
    CHECK(ci->structurallyEqual(citIndInterface()));

    const idl::InterfaceExtender* ext = doc.findExtender("APIKeyExtender");
    REQUIRE(ext != nullptr);
    CHECK(*ext == apiKeyExtender());
}

TEST_CASE("dataset loading rejects broken inputs") {
    CHECK_THROWS_AS(Dataset::fromJsonText("not json"), DemoError);
    CHECK_THROWS_AS(Dataset::fromJsonText("[]"), DemoError);
    CHECK_THROWS_AS(Dataset::fromJsonText(R"({"authors":{},"conferences":{},
        "publications":[{"id":"x","kind":"sculpture","title":"t","year":1,"doi":"d"}],
        "citations":{}})"),
                    DemoError);
    CHECK_THROWS_AS(Dataset::loadFile("/nonexistent/nowhere.json"), DemoError);

    SUBCASE("validate catches dangling references") {
        Dataset d = Dataset::builtin();
        d.publications[1].authors.push_back("a99");
        CHECK_THROWS_AS(d.validate(), DemoError);

        Dataset d2 = Dataset::builtin();
        d2.citations["p04"].push_back("p99");
        CHECK_THROWS_AS(d2.validate(), DemoError);
    }
}

TEST_CASE_FIXTURE(DemoFixture, "getAuthorPubs returns the scan result in dataset order") {
    for (const auto& [authorId, name] : data->authors) {
        Outcome out =
            dep.service("PubCat").dispatch("ip", "getAuthorPubs", keyRequest("authorId", authorId));
        REQUIRE_FALSE(out.isFault());

        auto expected = scanByAuthor(*data, authorId);
        const Value::Field* pubs = out.value().find("publications");
        std::size_t got = pubs ? pubs->items.size() : 0;
        REQUIRE(got == expected.size());
        for (std::size_t i = 0; i < got; ++i)
            CHECK(pubs->items[i] == expectedPub(*expected[i], false));
    }

    SUBCASE("a known author with exactly three publications") {
        Outcome out =
            dep.service("PubCat").dispatch("ip", "getAuthorPubs", keyRequest("authorId", "a3"));
        const Value::Field* pubs = out.value().find("publications");
        REQUIRE(pubs != nullptr);
        REQUIRE(pubs->items.size() == 3);
        CHECK(pubs->items[0].single("title")->asString() == "Cost Models for Edge Caching");
        CHECK(pubs->items[1].single("title")->asString() == "Fault Surfaces of Layered APIs");
        CHECK(pubs->items[2].single("title")->asString() ==
              "Twelve Ways to Version an Endpoint");
    }
    SUBCASE("unknown author yields an empty result") {
        Outcome out =
            dep.service("PubCat").dispatch("ip", "getAuthorPubs", keyRequest("authorId", "a99"));
        REQUIRE_FALSE(out.isFault());
        const Value::Field* pubs = out.value().find("publications");
        CHECK((pubs == nullptr || pubs->items.empty()));
    }
}

TEST_CASE_FIXTURE(DemoFixture, "getConfPubs never reports journal articles") {
    for (const auto& [confId, name] : data->conferences) {
        Outcome out =
            dep.service("PubCat").dispatch("ip", "getConfPubs", keyRequest("confId", confId));
        REQUIRE_FALSE(out.isFault());
        const Value::Field* pubs = out.value().find("publications");
        REQUIRE(pubs != nullptr);
        for (const Value& item : pubs->items) {
            CHECK(item.has("confId"));
            CHECK_FALSE(item.has("journal"));
        }
    }

    SUBCASE("c1 lists its volume and papers in order") {
        Outcome out =
            dep.service("PubCat").dispatch("ip", "getConfPubs", keyRequest("confId", "c1"));
        const Value::Field* pubs = out.value().find("publications");
        REQUIRE(pubs != nullptr);
        REQUIRE(pubs->items.size() == 5);
        CHECK(pubs->items[0].single("title")->asString() == "ICSC 2019 Companion Volume");
        CHECK_FALSE(pubs->items[0].has("authors")); // the volume itself has no authors
        CHECK(pubs->items[4].single("title")->asString() ==
              "Couriers, Filters, and Other Middleboxes");
    }
    SUBCASE("unknown conference is empty, not a fault") {
        Outcome out =
            dep.service("PubCat").dispatch("ip", "getConfPubs", keyRequest("confId", "c9"));
        REQUIRE_FALSE(out.isFault());
        CHECK_FALSE(out.value().has("publications"));
    }
}

TEST_CASE_FIXTURE(DemoFixture, "citation lookups agree with the fixture table") {
    Outcome out =
        dep.service("CitInd").dispatch("ip", "getCitations", keyRequest("pubKey", "p15"));
    REQUIRE_FALSE(out.isFault());
    const Value::Field* cites = out.value().find("citations");
    REQUIRE(cites != nullptr);
    REQUIRE(cites->items.size() == 3);
    CHECK(cites->items[0].asString() == "p04");
    CHECK(cites->items[1].asString() == "p08");
    CHECK(cites->items[2].asString() == "p12");

    SUBCASE("getCited inverts the table in dataset order") {
        Outcome cited =
            dep.service("CitInd").dispatch("ip", "getCited", keyRequest("pubKey", "p02"));
        REQUIRE_FALSE(cited.isFault());
        const Value::Field* by = cited.value().find("citations");
        REQUIRE(by != nullptr);
        REQUIRE(by->items.size() == 4);
        CHECK(by->items[0].asString() == "p04");
        CHECK(by->items[1].asString() == "p07");
        CHECK(by->items[2].asString() == "p14");
        CHECK(by->items[3].asString() == "p19");
    }
    SUBCASE("unknown keys are empty") {
        Outcome none =
            dep.service("CitInd").dispatch("ip", "getCitations", keyRequest("pubKey", "p99"));
        REQUIRE_FALSE(none.isFault());
        CHECK_FALSE(none.value().has("citations"));
    }
    SUBCASE("every getCitations answer resolves against getAuthorPubs data") {
        for (const auto& p : data->publications) {
            Outcome o =
                dep.service("CitInd").dispatch("ip", "getCitations", keyRequest("pubKey", p.id));
            REQUIRE_FALSE(o.isFault());
            if (const Value::Field* c = o.value().find("citations")) {
                for (const Value& key : c->items)
                    CHECK(data->find(key.asString()) != nullptr);
            }
        }
    }
}

TEST_CASE_FIXTURE(DemoFixture, "v2 responses add doi per publication and a count") {
    Outcome v2 =
        dep.service("PubCatV2").dispatch("ip", "getAuthorPubs", keyRequest("authorId", "a1"));
    REQUIRE_FALSE(v2.isFault());

    const Value* count = v2.value().single("count");
    REQUIRE(count != nullptr);
    CHECK(count->asInt() == 7);

    const Value::Field* pubs = v2.value().find("publications");
    REQUIRE(pubs != nullptr);
    REQUIRE(pubs->items.size() == 7);
    for (const Value& item : pubs->items) {
        REQUIRE(item.single("doi") != nullptr);
        CHECK(item.single("doi")->asString().rfind("10.5555/", 0) == 0);
    }

    SUBCASE("v1 responses never carry a doi") {
        Outcome v1 =
            dep.service("PubCat").dispatch("ip", "getAuthorPubs", keyRequest("authorId", "a1"));
        const Value::Field* old = v1.value().find("publications");
        REQUIRE(old != nullptr);
        for (const Value& item : old->items)
            CHECK_FALSE(item.has("doi"));
    }
    SUBCASE("shapes conform to the declared response types") {
        CHECK(idl::conforms(v2.value(), publicationsV2Type()).ok());
        Outcome v1 =
            dep.service("PubCat").dispatch("ip", "getAuthorPubs", keyRequest("authorId", "a1"));
        CHECK(idl::conforms(v1.value(), publicationsType()).ok());
        CHECK_FALSE(idl::conforms(v2.value(), publicationsType()).ok());
    }
}

TEST_CASE_FIXTURE(DemoFixture, "identical requests produce identical canonical json") {
    for (const char* op : {"getAuthorPubs", "getAuthorPubs"}) {
        Outcome first = dep.service("PubCat").dispatch("ip", op, keyRequest("authorId", "a1"));
        Outcome second = dep.service("PubCat").dispatch("ip", op, keyRequest("authorId", "a1"));
        REQUIRE_FALSE(first.isFault());
        CHECK(first == second);
        CHECK(idl::canonicalJson(first.value(), publicationsType()) ==
              idl::canonicalJson(second.value(), publicationsType()));
    }
}
