#include "emi/idl/printer.hpp"

#include "emi/idl/errors.hpp"
#include "emi/idl/interface.hpp"

#include <map>
#include <sstream>

namespace emi::idl {

namespace {

std::string cardSuffix(const Cardinality& c) {
    if (c == Cardinality::one())
        return "";
    if (c == Cardinality::opt())
        return "?";
    if (c.min == 0 && c.unbounded())
        return "*";
    throw IdlError("cardinality has no IDL notation (only one, '?' and '*' print)");
}

void printTypeTo(std::ostream& os, const ValueType& t) {
    switch (t.kind()) {
    case TypeKind::Primitive:
        os << primName(t.prim());
        return;
    case TypeKind::Record: {
        if (t.fields().empty()) {
            os << "{ }";
            return;
        }
        os << "{ ";
        bool first = true;
        for (const auto& f : t.fields()) {
            if (!first)
                os << ", ";
            first = false;
            os << f.name << cardSuffix(f.spec.cardinality) << ": ";
            printTypeTo(os, f.spec.type);
        }
        os << " }";
        return;
    }
    case TypeKind::Union: {
        bool first = true;
        for (const auto& alt : t.alternatives()) {
            if (!first)
                os << " | ";
            first = false;
            printTypeTo(os, alt);
        }
        return;
    }
    }
}

void printOperationTo(std::ostream& os, const OperationDef& op) {
    os << op.name << "( ";
    printTypeTo(os, op.request);
    os << " )( ";
    printTypeTo(os, op.response);
    os << " )";
    if (!op.faults.empty()) {
        os << " throws ";
        bool first = true;
        for (const auto& f : op.faults) {
            if (!first)
                os << ", ";
            first = false;
            os << f.name;
        }
    }
}

void printInterfaceTo(std::ostream& os, const InterfaceDef& iface) {
    os << "interface " << iface.name() << " {\n  RequestResponse:\n";
    for (std::size_t i = 0; i < iface.operations().size(); ++i) {
        os << "    ";
        printOperationTo(os, iface.operations()[i]);
        if (i + 1 < iface.operations().size())
            os << ",";
        os << "\n";
    }
    os << "}\n";
}

void printExtenderTo(std::ostream& os, const InterfaceExtender& ext) {
    os << "interface extender " << ext.name << " {\n  RequestResponse:\n    *( ";
    if (ext.requestExtension.empty())
        os << "void";
    else
        printTypeTo(os, ValueType::record(ext.requestExtension));
    os << " )( ";
    if (ext.responseExtension.empty())
        os << "void";
    else
        printTypeTo(os, ValueType::record(ext.responseExtension));
    os << " )";
    if (!ext.addedFaults.empty()) {
        os << " throws ";
        bool first = true;
        for (const auto& f : ext.addedFaults) {
            if (!first)
                os << ", ";
            first = false;
            os << f.name;
        }
    }
    os << "\n}\n";
}

// Faults print by name only, so a fault with a non-default payload needs a
// same-named type declaration for the reparse to reconstruct it.
void collectFaultDecls(std::map<std::string, ValueType>& decls,
                       const std::vector<FaultDef>& faults) {
    for (const auto& f : faults) {
        if (auto it = decls.find(f.name); it != decls.end()) {
            if (!(it->second == f.payload))
                throw IdlError("fault '" + f.name +
                               "' appears with two different payloads; cannot print");
        } else {
            decls.emplace(f.name, f.payload);
        }
    }
}

std::string renderDocument(const std::vector<std::pair<std::string, ValueType>>& namedTypes,
                           const std::vector<InterfaceDef>& interfaces,
                           const std::vector<InterfaceExtender>& extenders) {
    std::map<std::string, ValueType> faultDecls;
    for (const auto& i : interfaces)
        for (const auto& op : i.operations())
            collectFaultDecls(faultDecls, op.faults);
    for (const auto& e : extenders)
        collectFaultDecls(faultDecls, e.addedFaults);

    std::ostringstream os;
    std::map<std::string, ValueType> declared;
    for (const auto& [name, type] : namedTypes) {
        if (auto it = faultDecls.find(name); it != faultDecls.end() && !(it->second == type))
            throw IdlError("type '" + name + "' conflicts with a fault payload; cannot print");
        os << "type " << name << ": ";
        printTypeTo(os, type);
        os << "\n";
        declared.emplace(name, type);
    }
    for (const auto& [name, payload] : faultDecls) {
        if (payload == defaultErrorPayload() || declared.count(name))
            continue;
        os << "type " << name << ": ";
        printTypeTo(os, payload);
        os << "\n";
    }
    if (!declared.empty() || !faultDecls.empty())
        os << "\n";

    for (const auto& i : interfaces) {
        printInterfaceTo(os, i);
        os << "\n";
    }
    for (const auto& e : extenders) {
        printExtenderTo(os, e);
        os << "\n";
    }
    std::string out = os.str();
    while (!out.empty() && out.back() == '\n')
        out.pop_back();
    out.push_back('\n');
    return out;
}

} // namespace

std::string printType(const ValueType& type) {
    std::ostringstream os;
    printTypeTo(os, type);
    return os.str();
}

std::string printInterface(const InterfaceDef& iface) {
    std::ostringstream os;
    printInterfaceTo(os, iface);
    return os.str();
}

std::string printExtender(const InterfaceExtender& ext) {
    std::ostringstream os;
    printExtenderTo(os, ext);
    return os.str();
}

std::string printIdl(const IdlDocument& doc) {
    return renderDocument(doc.types, doc.interfaces, doc.extenders);
}

std::string printIdl(const std::vector<InterfaceDef>& interfaces,
                     const std::vector<InterfaceExtender>& extenders) {
    return renderDocument({}, interfaces, extenders);
}

} // namespace emi::idl
