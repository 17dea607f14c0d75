#pragma once

#include "emi/idl/extender.hpp"
#include "emi/idl/interface.hpp"
#include "emi/idl/parser.hpp"

namespace emi::demo {

/// Contract types and interfaces of the catalogue example, the in-memory
/// mirror of data/pubcat.idl (a test keeps the two in sync).

idl::ValueType publicationType();    // Proceeding | InProceeding | Article
idl::ValueType publicationsType();   // { publications*: Publication }
idl::ValueType publicationV2Type();  // every alternative gains doi
idl::ValueType publicationsV2Type(); // { publications*: PublicationV2, count: int }
idl::ValueType citationsType();      // { citations*: string }

idl::InterfaceDef pubCatInterface();   // getAuthorPubs, getConfPubs
idl::InterfaceDef pubCatV2Interface(); // same operations, V2 shapes
idl::InterfaceDef citIndInterface();   // getCitations, getCited

/// Adds `apiKey: string` to every request and declares NotAuthorised.
idl::InterfaceExtender apiKeyExtender();

/// Everything above as one document, equal to parsing data/pubcat.idl.
idl::IdlDocument pubCatDocument();

} // namespace emi::demo
