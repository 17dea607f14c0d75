#include "emi/demo/model.hpp"

namespace emi::demo {

using idl::Cardinality;
using idl::FaultDef;
using idl::InterfaceDef;
using idl::InterfaceExtender;
using idl::Prim;
using idl::ValueType;

namespace {

ValueType pubAlternative(const char* venueField, bool withAuthors, bool withDoi) {
    idl::RecordFields fields;
    fields.emplace_back(venueField, Prim::String);
    fields.emplace_back("title", Prim::String);
    if (withAuthors)
        fields.emplace_back("authors", ValueType::primitive(Prim::String), Cardinality::many());
    fields.emplace_back("year", Prim::Int);
    if (withDoi)
        fields.emplace_back("doi", Prim::String);
    return ValueType::record(std::move(fields));
}

ValueType publicationUnion(bool withDoi) {
    return ValueType::unionOf({
        pubAlternative("confId", false, withDoi), // Proceeding
        pubAlternative("confId", true, withDoi),  // InProceeding
        pubAlternative("journal", true, withDoi), // Article
    });
}

ValueType keyRequest(const char* field) {
    return ValueType::record({{field, Prim::String}});
}

} // namespace

ValueType publicationType() { return publicationUnion(false); }

ValueType publicationsType() {
    return ValueType::record({{"publications", publicationType(), Cardinality::many()}});
}

ValueType publicationV2Type() { return publicationUnion(true); }

ValueType publicationsV2Type() {
    return ValueType::record({
        {"publications", publicationV2Type(), Cardinality::many()},
        {"count", Prim::Int},
    });
}

ValueType citationsType() {
    return ValueType::record(
        {{"citations", ValueType::primitive(Prim::String), Cardinality::many()}});
}

InterfaceDef pubCatInterface() {
    return InterfaceDef("PubCatInterface",
                        {
                            {"getAuthorPubs", keyRequest("authorId"), publicationsType(), {}},
                            {"getConfPubs", keyRequest("confId"), publicationsType(), {}},
                        });
}

InterfaceDef pubCatV2Interface() {
    return InterfaceDef("PubCatInterfaceV2",
                        {
                            {"getAuthorPubs", keyRequest("authorId"), publicationsV2Type(), {}},
                            {"getConfPubs", keyRequest("confId"), publicationsV2Type(), {}},
                        });
}

InterfaceDef citIndInterface() {
    return InterfaceDef("CitIndInterface",
                        {
                            {"getCitations", keyRequest("pubKey"), citationsType(), {}},
                            {"getCited", keyRequest("pubKey"), citationsType(), {}},
                        });
}

InterfaceExtender apiKeyExtender() {
    InterfaceExtender ext;
    ext.name = "APIKeyExtender";
    ext.requestExtension = {{"apiKey", Prim::String}};
    ext.addedFaults = {FaultDef{"NotAuthorised"}};
    return ext;
}

idl::IdlDocument pubCatDocument() {
    idl::IdlDocument doc;
    doc.types = {
        {"Publication", publicationType()},
        {"Publications", publicationsType()},
        {"PublicationV2", publicationV2Type()},
        {"PublicationsV2", publicationsV2Type()},
        {"Citations", citationsType()},
    };
    doc.interfaces = {pubCatInterface(), pubCatV2Interface(), citIndInterface()};
    doc.extenders = {apiKeyExtender()};
    return doc;
}

} // namespace emi::demo
