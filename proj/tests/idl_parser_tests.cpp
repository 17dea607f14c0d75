#include "emi/idl/errors.hpp"
#include "emi/idl/interface.hpp"
#include "emi/idl/parser.hpp"
#include "emi/idl/printer.hpp"

#include "support/test_gen.hpp"

#include <doctest.h>

using namespace emi::idl;

namespace {

const char* const kCatalogueIdl = R"(
// Publication catalogue API and the key extender used to refactor it.
type Proceeding: { title: string, year: int, editor: string }
type InProceeding: { title: string, year: int, bookTitle: string }
type Article: { title: string, year: int, journal: string }
type Publication: Proceeding | InProceeding | Article
type Publications: { publications*: Publication }

interface PubCatInterface {
  RequestResponse:
    getAuthorPubs( { authorId: string } )( Publications ),
    getConfPubs( { confId: string } )( Publications )
}

interface extender APIKeyExtender {
  RequestResponse:
    *( { apiKey: string } )( void ) throws NotAuthorised
}
)";

ValueType expectedPublications() {
    auto pub = [](const char* extra) {
        return ValueType::record({
            {"title", Prim::String},
            {"year", Prim::Int},
            {extra, Prim::String},
        });
    };
    return ValueType::record(
        {{"publications",
          ValueType::unionOf({pub("editor"), pub("bookTitle"), pub("journal")}),
          Cardinality::many()}});
}

} // namespace

TEST_CASE("parses the publication catalogue document") {
    IdlDocument doc = parseIdl(kCatalogueIdl);

    REQUIRE(doc.interfaces.size() == 1);
    const InterfaceDef& iface = doc.interfaces[0];
    CHECK(iface.name() == "PubCatInterface");
    REQUIRE(iface.operations().size() == 2);

    const OperationDef& author = iface.operations()[0];
    CHECK(author.name == "getAuthorPubs");
    REQUIRE(author.request.isRecord());
    REQUIRE(author.request.fields().size() == 1);
    CHECK(author.request.fields()[0].name == "authorId");
    CHECK(author.request.fields()[0].spec.type == ValueType::primitive(Prim::String));
    CHECK(author.response == expectedPublications());
    CHECK(author.faults.empty());

    CHECK(iface.operations()[1].name == "getConfPubs");
    CHECK(iface.operations()[1].response == expectedPublications());

    const ValueType* pubs = doc.findType("Publications");
    REQUIRE(pubs != nullptr);
    CHECK(*pubs == expectedPublications());
    CHECK(doc.findType("Publication")->isUnion());

    REQUIRE(doc.extenders.size() == 1);
    const InterfaceExtender& ext = doc.extenders[0];
    CHECK(ext.name == "APIKeyExtender");
    REQUIRE(ext.requestExtension.size() == 1);
    CHECK(ext.requestExtension[0].name == "apiKey");
    CHECK(ext.requestExtension[0].spec.type == ValueType::primitive(Prim::String));
    CHECK(ext.responseExtension.empty());
    REQUIRE(ext.addedFaults.size() == 1);
    CHECK(ext.addedFaults[0].name == "NotAuthorised");
    CHECK(ext.addedFaults[0].payload == defaultErrorPayload());
}

TEST_CASE("fault names bind to same-named type declarations") {
    IdlDocument doc = parseIdl(R"(
        type NotAuthorised: { reason: string }
        interface I {
          get( { id: string } )( void ) throws NotAuthorised, Busy
        }
    )");
    const auto& faults = doc.interfaces[0].operations()[0].faults;
    REQUIRE(faults.size() == 2);
    CHECK(faults[0].payload == ValueType::record({{"reason", Prim::String}}));
    CHECK(faults[1].name == "Busy");
    CHECK(faults[1].payload == defaultErrorPayload());
}

TEST_CASE("empty or commentary-only input is rejected") {
    CHECK_THROWS_AS(parseIdl(""), ParseError);
    CHECK_THROWS_AS(parseIdl("  \n\t "), ParseError);
    CHECK_THROWS_AS(parseIdl("// nothing here\n/* or here */"), ParseError);
}

TEST_CASE("parse errors carry line and column") {
    try {
        parseIdl("type T: { x: int }\ntype T: int");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.message.find("duplicate type") != std::string::npos);
    }

    try {
        parseIdl("interface I {\n  op( { x: strng } )( void )\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.message.find("unknown type 'strng'") != std::string::npos);
        CHECK(e.line == 2);
    }
}

TEST_CASE("structural mistakes are rejected") {
    // Duplicate operation.
    CHECK_THROWS_AS(parseIdl("interface I { a( void )( void ), a( void )( void ) }"),
                    ParseError);
    // Duplicate record field.
    CHECK_THROWS_AS(parseIdl("type T: { x: int, x: string }"), ParseError);
    // Interface without operations.
    CHECK_THROWS_AS(parseIdl("interface I { }"), ParseError);
    // Unterminated comment.
    CHECK_THROWS_AS(parseIdl("type T: int /* open"), ParseError);
    // Stray token.
    CHECK_THROWS_AS(parseIdl("type T: int }"), ParseError);
}

TEST_CASE("recursive types are rejected") {
    CHECK_THROWS_AS(parseIdl("type A: { b: B }\ntype B: { a: A }"), ParseError);
    CHECK_THROWS_AS(parseIdl("type A: { a: A }"), ParseError);
}

TEST_CASE("forward references resolve") {
    IdlDocument doc = parseIdl(R"(
        type Outer: { inner: Inner }
        type Inner: { n: int }
    )");
    CHECK(*doc.findType("Outer") ==
          ValueType::record({{"inner", ValueType::record({{"n", Prim::Int}})}}));
}

TEST_CASE("cardinality suffixes parse") {
    IdlDocument doc = parseIdl("type T: { xs*: int, maybe?: string, exactly: bool }");
    const ValueType& t = *doc.findType("T");
    CHECK(t.findField("xs")->spec.cardinality == Cardinality::many());
    CHECK(t.findField("maybe")->spec.cardinality == Cardinality::opt());
    CHECK(t.findField("exactly")->spec.cardinality == Cardinality::one());
}

TEST_CASE("the RequestResponse marker and commas are optional") {
    IdlDocument bare = parseIdl(R"(
        interface I {
          a( void )( void ) throws X
          b( void )( void )
        }
    )");
    REQUIRE(bare.interfaces[0].operations().size() == 2);
    CHECK(bare.interfaces[0].operations()[0].faults.size() == 1);
    CHECK(bare.interfaces[0].operations()[0].faults[0].name == "X");
    CHECK(bare.interfaces[0].operations()[1].name == "b");

    IdlDocument marked = parseIdl(R"(
        interface I {
          RequestResponse:
            a( void )( void ) throws X,
            b( void )( void )
        }
    )");
    CHECK(marked.interfaces[0].structurallyEqual(bare.interfaces[0]));
}

TEST_CASE("extender extensions must be records or void") {
    CHECK_THROWS_AS(parseIdl("interface extender E { *( int )( void ) }"), ParseError);
    CHECK_THROWS_AS(
        parseIdl("type U: { a: int } | { b: int }\ninterface extender E { *( U )( void ) }"),
        ParseError);

    IdlDocument doc = parseIdl("interface extender E { *( void )( void ) }");
    CHECK(doc.extenders[0].empty());
}

TEST_CASE("the printed catalogue reparses to the same document") {
    IdlDocument doc = parseIdl(kCatalogueIdl);
    IdlDocument again = parseIdl(printIdl(doc));

    REQUIRE(again.interfaces.size() == doc.interfaces.size());
    CHECK(again.interfaces[0].structurallyEqual(doc.interfaces[0]));
    CHECK(again.interfaces[0].name() == doc.interfaces[0].name());
    CHECK(again.extenders == doc.extenders);
    for (const auto& [name, type] : doc.types) {
        const ValueType* t = again.findType(name);
        REQUIRE(t != nullptr);
        CHECK(*t == type);
    }
}

TEST_CASE("print then parse is the identity on generated documents") {
    emi::test::Gen gen(42);
    for (int round = 0; round < 60; ++round) {
        std::vector<InterfaceDef> interfaces{gen.interface("I"), gen.interface("J")};
        std::vector<InterfaceExtender> extenders{gen.extender("E")};

        IdlDocument back = parseIdl(printIdl(interfaces, extenders));
        REQUIRE(back.interfaces.size() == 2);
        for (std::size_t i = 0; i < interfaces.size(); ++i) {
            CHECK(back.interfaces[i].name() == interfaces[i].name());
            CHECK(back.interfaces[i].structurallyEqual(interfaces[i]));
        }
        REQUIRE(back.extenders.size() == 1);
        CHECK(back.extenders[0] == extenders[0]);
    }
}
