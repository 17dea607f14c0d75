#include "emi/idl/conformance.hpp"
#include "emi/idl/errors.hpp"
#include "emi/idl/extender.hpp"
#include "emi/idl/interface.hpp"
#include "emi/idl/json.hpp"
#include "emi/idl/value.hpp"

#include "support/test_gen.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

using namespace emi::idl;

namespace {

// Publication catalogue fixture, built by hand so extender results can be
// compared against independently written expectations.

ValueType pubRecord(const char* extra) {
    return ValueType::record({
        {"title", Prim::String},
        {"year", Prim::Int},
        {extra, Prim::String},
    });
}

ValueType publicationType() {
    return ValueType::unionOf(
        {pubRecord("editor"), pubRecord("bookTitle"), pubRecord("journal")});
}

ValueType publicationsType() {
    return ValueType::record({{"publications", publicationType(), Cardinality::many()}});
}

ValueType citationsType() {
    return ValueType::record(
        {{"citations",
          ValueType::record({{"fromDoi", Prim::String},
                             {"toDoi", Prim::String},
                             {"year", Prim::Int}}),
          Cardinality::many()}});
}

InterfaceDef pubCatInterface() {
    OperationDef author;
    author.name = "getAuthorPubs";
    author.request = ValueType::record({{"authorId", Prim::String}});
    author.response = publicationsType();
    OperationDef conf;
    conf.name = "getConfPubs";
    conf.request = ValueType::record({{"confId", Prim::String}});
    conf.response = publicationsType();
    return InterfaceDef("PubCatInterface", {author, conf});
}

InterfaceDef citIndInterface() {
    OperationDef citations;
    citations.name = "getCitations";
    citations.request = ValueType::record({{"doi", Prim::String}});
    citations.response = citationsType();
    OperationDef cited;
    cited.name = "getCited";
    cited.request = ValueType::record({{"doi", Prim::String}});
    cited.response = citationsType();
    return InterfaceDef("CitIndInterface", {citations, cited});
}

InterfaceExtender apiKeyExtender() {
    InterfaceExtender ext;
    ext.name = "APIKeyExtender";
    ext.requestExtension = {{"apiKey", Prim::String}};
    ext.addedFaults = {FaultDef("NotAuthorised")};
    return ext;
}

} // namespace

TEST_CASE("extender derives the keyed publication catalogue API") {
    InterfaceDef original = pubCatInterface();
    InterfaceDef refactored = applyExtender(original, apiKeyExtender());

    // Expected interface written out field by field, not computed.
    OperationDef author;
    author.name = "getAuthorPubs";
    author.request = ValueType::record({{"authorId", Prim::String}, {"apiKey", Prim::String}});
    author.response = publicationsType();
    author.faults = {FaultDef("NotAuthorised")};
    OperationDef conf;
    conf.name = "getConfPubs";
    conf.request = ValueType::record({{"confId", Prim::String}, {"apiKey", Prim::String}});
    conf.response = publicationsType();
    conf.faults = {FaultDef("NotAuthorised")};
    InterfaceDef expected("PubCatInterface", {author, conf});

    CHECK(refactored.structurallyEqual(expected));
    CHECK(refactored.name() == "PubCatInterface");

    // The input interface is untouched.
    CHECK(original.structurallyEqual(pubCatInterface()));
    CHECK(original.operations()[0].faults.empty());
}

TEST_CASE("empty extender is the identity on interfaces") {
    InterfaceDef original = pubCatInterface();
    InterfaceExtender empty;
    empty.name = "Empty";
    CHECK(applyExtender(original, empty).structurallyEqual(original));
}

TEST_CASE("extender reaches every operation of the citation index") {
    InterfaceDef refactored = applyExtender(citIndInterface(), apiKeyExtender());

    REQUIRE(refactored.operations().size() == 2);
    for (const auto& op : refactored.operations()) {
        const ValueType& req = op.request;
        REQUIRE(req.isRecord());
        REQUIRE(req.findField("apiKey") != nullptr);
        CHECK(req.findField("apiKey")->spec.type == ValueType::primitive(Prim::String));
        CHECK(req.findField("doi") != nullptr);
        CHECK(req.fields().size() == 2);
        REQUIRE(op.faults.size() == 1);
        CHECK(op.faults[0].name == "NotAuthorised");
        CHECK(op.faults[0].payload == defaultErrorPayload());
        CHECK(op.response == citationsType());
    }
}

TEST_CASE("extension collides with an existing request field") {
    OperationDef op;
    op.name = "login";
    op.request = ValueType::record({{"apiKey", Prim::String}});
    op.response = ValueType::primitive(Prim::Void);
    InterfaceDef iface("I", {op});

    try {
        applyExtender(iface, apiKeyExtender());
        FAIL("expected ExtendError");
    } catch (const ExtendError& e) {
        CHECK(e.kind == ExtendErrorKind::FieldCollision);
        CHECK(e.operation == "login");
    }
}

TEST_CASE("union and primitive messages cannot be extended") {
    OperationDef op;
    op.name = "search";
    op.request = publicationType(); // a union
    op.response = ValueType::primitive(Prim::Void);
    InterfaceDef withUnion("I", {op});
    CHECK_THROWS_AS(applyExtender(withUnion, apiKeyExtender()), ExtendError);

    op.request = ValueType::primitive(Prim::String);
    InterfaceDef withString("J", {op});
    try {
        applyExtender(withString, apiKeyExtender());
        FAIL("expected ExtendError");
    } catch (const ExtendError& e) {
        CHECK(e.kind == ExtendErrorKind::NonRecordMessage);
    }
}

TEST_CASE("extending a void message lifts it to a record") {
    OperationDef op;
    op.name = "ping";
    op.request = ValueType::primitive(Prim::Void);
    op.response = ValueType::primitive(Prim::Void);
    InterfaceDef iface("I", {op});

    InterfaceDef extended = applyExtender(iface, apiKeyExtender());
    CHECK(extended.operations()[0].request ==
          ValueType::record({{"apiKey", Prim::String}}));
    // The extender's response extension is empty, so void stays void.
    CHECK(extended.operations()[0].response == ValueType::primitive(Prim::Void));
}

TEST_CASE("response extensions merge like request extensions") {
    InterfaceExtender ext;
    ext.name = "Meta";
    ext.responseExtension = {{"requestId", Prim::String}};

    InterfaceDef extended = applyExtender(pubCatInterface(), ext);
    const ValueType& resp = extended.operations()[0].response;
    REQUIRE(resp.isRecord());
    CHECK(resp.findField("publications") != nullptr);
    CHECK(resp.findField("requestId") != nullptr);
    CHECK(resp.fields().size() == 2);
}

TEST_CASE("added faults union with existing ones") {
    OperationDef op;
    op.name = "get";
    op.request = ValueType::record({{"id", Prim::String}});
    op.response = ValueType::primitive(Prim::Void);
    op.faults = {FaultDef("NotAuthorised")};
    InterfaceDef iface("I", {op});

    // Same name, same payload: no duplicate.
    InterfaceDef extended = applyExtender(iface, apiKeyExtender());
    CHECK(extended.operations()[0].faults.size() == 1);

    // Same name, different payload: rejected.
    op.faults = {FaultDef("NotAuthorised", ValueType::record({{"why", Prim::String}}))};
    InterfaceDef conflicting("J", {op});
    try {
        applyExtender(conflicting, apiKeyExtender());
        FAIL("expected ExtendError");
    } catch (const ExtendError& e) {
        CHECK(e.kind == ExtendErrorKind::FaultCollision);
    }
}

TEST_CASE("strip removes exactly the extension fields") {
    InterfaceExtender ext = apiKeyExtender();

    Value req = Value::record();
    req.set("authorId", Value::string("a1"));
    req.set("apiKey", Value::string("k"));

    Value stripped = stripExtension(req, ext, MessageSide::Request);
    Value expected = Value::record();
    expected.set("authorId", Value::string("a1"));
    CHECK(stripped == expected);

    // Idempotent, and a no-op when the field is already absent.
    CHECK(stripExtension(stripped, ext, MessageSide::Request) == stripped);

    // Field order of the survivors is preserved.
    Value ordered = Value::record();
    ordered.set("a", Value::integer(1));
    ordered.set("apiKey", Value::string("k"));
    ordered.set("b", Value::integer(2));
    Value kept = stripExtension(ordered, ext, MessageSide::Request);
    REQUIRE(kept.fields().size() == 2);
    CHECK(kept.fields()[0].name == "a");
    CHECK(kept.fields()[1].name == "b");

    // Request extension does not touch response-side values.
    CHECK(stripExtension(req, ext, MessageSide::Response) == req);

    InterfaceExtender empty;
    CHECK(stripExtension(req, empty, MessageSide::Request) == req);
}

TEST_CASE("strip undoes merge on conforming requests") {
    emi::test::Gen gen(7);
    for (int round = 0; round < 50; ++round) {
        InterfaceDef iface = gen.interface("I");
        InterfaceExtender ext = gen.extender("E");
        for (const auto& op : iface.operations()) {
            if (!op.request.isRecord())
                continue;
            Value v = gen.value(op.request);
            Value x = Value::record();
            for (const auto& f : ext.requestExtension)
                x.set(f.name, gen.value(f.spec.type));
            Value merged = mergeFields(v, x);
            CHECK(stripExtension(merged, ext, MessageSide::Request) == v);
        }
    }
}

TEST_CASE("extenders never remove operations, fields, or faults") {
    emi::test::Gen gen(11);
    for (int round = 0; round < 50; ++round) {
        InterfaceDef iface = gen.interface("I");
        InterfaceExtender ext = gen.extender("E");
        InterfaceDef extended = applyExtender(iface, ext);

        REQUIRE(extended.operations().size() == iface.operations().size());
        for (std::size_t i = 0; i < iface.operations().size(); ++i) {
            const auto& before = iface.operations()[i];
            const auto& after = extended.operations()[i];
            CHECK(after.name == before.name);
            if (before.request.isRecord()) {
                for (const auto& f : before.request.fields()) {
                    const auto* kept = after.request.findField(f.name);
                    REQUIRE(kept != nullptr);
                    CHECK(kept->spec == f.spec);
                }
            }
            for (const auto& fault : before.faults)
                CHECK(after.findFault(fault.name) != nullptr);
            for (const auto& fault : ext.addedFaults)
                CHECK(after.findFault(fault.name) != nullptr);
        }
    }
}

TEST_CASE("conformance admits cardinality-correct publication lists") {
    ValueType pubs = publicationsType();

    Value empty = Value::record();
    empty.fields().emplace_back("publications", std::vector<Value>{});
    CHECK(conforms(empty, pubs).ok());

    // Absent star field is the same as zero items.
    CHECK(conforms(Value::record(), pubs).ok());

    Value one = Value::record();
    Value proceeding = Value::record();
    proceeding.set("title", Value::string("T"));
    proceeding.set("year", Value::integer(2001));
    proceeding.set("editor", Value::string("E"));
    one.add("publications", proceeding);
    CHECK(conforms(one, pubs).ok());
}

TEST_CASE("conformance reports the first violating path") {
    InterfaceDef iface = pubCatInterface();
    const ValueType& req = iface.operations()[0].request;

    Value bad = Value::record();
    bad.set("authorId", Value::integer(42));
    auto r = conforms(bad, req);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->path == "authorId");

    Value undeclared = Value::record();
    undeclared.set("authorId", Value::string("a1"));
    undeclared.set("extra", Value::string("x"));
    auto u = conforms(undeclared, req);
    REQUIRE_FALSE(u.ok());
    CHECK(u.violation->path == "extra");

    Value missing = Value::record();
    auto m = conforms(missing, req);
    REQUIRE_FALSE(m.ok());
    CHECK(m.violation->path == "authorId");

    auto root = conforms(Value::string("nope"), req);
    REQUIRE_FALSE(root.ok());
    CHECK(root.violation->path == "$");
}

TEST_CASE("conformance against extended and stripped requests") {
    InterfaceDef original = pubCatInterface();
    InterfaceDef extended = applyExtender(original, apiKeyExtender());
    const ValueType& extReq = extended.operations()[0].request;
    const ValueType& origReq = original.operations()[0].request;

    Value req = Value::record();
    req.set("authorId", Value::string("a1"));
    req.set("apiKey", Value::string("k"));
    CHECK(conforms(req, extReq).ok());
    CHECK_FALSE(conforms(req, origReq).ok());

    Value stripped = stripExtension(req, apiKeyExtender(), MessageSide::Request);
    CHECK(conforms(stripped, origReq).ok());
}

TEST_CASE("union values conform through any alternative") {
    ValueType pub = publicationType();

    Value article = Value::record();
    article.set("title", Value::string("T"));
    article.set("year", Value::integer(1999));
    article.set("journal", Value::string("J"));
    CHECK(conforms(article, pub).ok());

    Value nothing = Value::record();
    nothing.set("title", Value::string("T"));
    auto r = conforms(nothing, pub);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violation->path == "$");
}

TEST_CASE("numeric conformance follows JSON's widening") {
    ValueType dbl = ValueType::record({{"score", Prim::Double}});
    Value asInt = Value::record();
    asInt.set("score", Value::integer(3));
    CHECK(conforms(asInt, dbl).ok());

    ValueType intOnly = ValueType::record({{"n", Prim::Int}});
    Value asDouble = Value::record();
    asDouble.set("n", Value::number(3.5));
    CHECK_FALSE(conforms(asDouble, intOnly).ok());
}

TEST_CASE("typed JSON encoding follows declared cardinalities") {
    ValueType pubs = publicationsType();
    Value one = Value::record();
    Value proceeding = Value::record();
    proceeding.set("title", Value::string("T"));
    proceeding.set("year", Value::integer(2001));
    proceeding.set("editor", Value::string("E"));
    one.add("publications", proceeding);

    nlohmann::json j = toJson(one, pubs);
    REQUIRE(j.contains("publications"));
    CHECK(j["publications"].is_array()); // single item, star cardinality
    CHECK(j["publications"].size() == 1);
    CHECK(j["publications"][0]["year"] == 2001);

    ValueType req = ValueType::record({{"authorId", Prim::String}});
    Value r = Value::record();
    r.set("authorId", Value::string("a1"));
    CHECK(toJson(r, req)["authorId"].is_string());
}

TEST_CASE("canonical JSON sorts keys for byte comparison") {
    Value v = Value::record();
    v.set("zeta", Value::integer(1));
    v.set("alpha", Value::integer(2));
    CHECK(canonicalJson(toJson(v)) == R"({"alpha":2,"zeta":1})");
}

TEST_CASE("JSON round-trips typed values") {
    emi::test::Gen gen(23);
    for (int round = 0; round < 80; ++round) {
        ValueType t = gen.record(2, "f");
        Value v = gen.value(t);
        REQUIRE(conforms(v, t).ok());

        nlohmann::json j = toJson(v, t);
        Value back = valueFromJson(j);
        CHECK(conforms(back, t).ok());
        CHECK(canonicalJson(toJson(back, t)) == canonicalJson(j));
    }
}

TEST_CASE("untyped JSON decoding maps arrays to item lists") {
    auto j = nlohmann::json::parse(R"({"x":[1,2],"y":"s","z":{"n":null}})");
    Value v = valueFromJson(j);
    REQUIRE(v.find("x") != nullptr);
    CHECK(v.find("x")->items.size() == 2);
    CHECK(v.find("x")->items[1] == Value::integer(2));
    CHECK(*v.single("y") == Value::string("s"));
    CHECK(v.single("z")->single("n")->isUnit());

    CHECK_THROWS_AS(valueFromJson(nlohmann::json::parse("[1,2]")), IdlError);
}
