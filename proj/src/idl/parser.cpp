#include "emi/idl/parser.hpp"

#include "emi/idl/errors.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <utility>

namespace emi::idl {

const ValueType* IdlDocument::findType(std::string_view name) const {
    for (const auto& [n, t] : types)
        if (n == name)
            return &t;
    return nullptr;
}

const InterfaceDef* IdlDocument::findInterface(std::string_view name) const {
    for (const auto& i : interfaces)
        if (i.name() == name)
            return &i;
    return nullptr;
}

const InterfaceExtender* IdlDocument::findExtender(std::string_view name) const {
    for (const auto& e : extenders)
        if (e.name == name)
            return &e;
    return nullptr;
}

namespace {

struct Pos {
    int line = 1;
    int column = 1;
};

enum class Tok { Ident, LBrace, RBrace, LParen, RParen, Colon, Comma, Pipe, Star, Quest, End };

struct Token {
    Tok kind;
    std::string text;
    Pos pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skipTrivia();
        Pos at = pos_;
        if (i_ >= src_.size())
            return {Tok::End, "", at};
        char c = src_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (i_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                                        src_[i_] == '_'))
                word.push_back(take());
            return {Tok::Ident, std::move(word), at};
        }
        take();
        switch (c) {
        case '{': return {Tok::LBrace, "{", at};
        case '}': return {Tok::RBrace, "}", at};
        case '(': return {Tok::LParen, "(", at};
        case ')': return {Tok::RParen, ")", at};
        case ':': return {Tok::Colon, ":", at};
        case ',': return {Tok::Comma, ",", at};
        case '|': return {Tok::Pipe, "|", at};
        case '*': return {Tok::Star, "*", at};
        case '?': return {Tok::Quest, "?", at};
        default:
            throw ParseError(at.line, at.column,
                             std::string("unexpected character '") + c + "'");
        }
    }

private:
    char take() {
        char c = src_[i_++];
        if (c == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
        return c;
    }

    void skipTrivia() {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
                while (i_ < src_.size() && src_[i_] != '\n')
                    take();
            } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '*') {
                Pos open = pos_;
                take();
                take();
                while (true) {
                    if (i_ >= src_.size())
                        throw ParseError(open.line, open.column, "unterminated comment");
                    char d = take();
                    if (d == '*' && i_ < src_.size() && src_[i_] == '/') {
                        take();
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Pos pos_;
};

// Unresolved type expression. Named references are resolved in a second pass
// so declarations may appear in any order.
struct RawType {
    enum class K { Prim, Name, Record, Union };

    struct Field {
        std::string name;
        Cardinality card;
        std::shared_ptr<RawType> type;
        Pos pos;
    };

    K k = K::Prim;
    Prim prim = Prim::Void;
    std::string name;
    std::vector<Field> fields;
    std::vector<std::shared_ptr<RawType>> alts;
    Pos pos;
};

using RawTypePtr = std::shared_ptr<RawType>;

struct RawFaultRef {
    std::string name;
    Pos pos;
};

struct RawOperation {
    std::string name;
    RawTypePtr request;
    RawTypePtr response;
    std::vector<RawFaultRef> faults;
    Pos pos;
};

struct RawInterface {
    std::string name;
    std::vector<RawOperation> ops;
    Pos pos;
};

struct RawExtender {
    std::string name;
    RawTypePtr request;
    RawTypePtr response;
    std::vector<RawFaultRef> faults;
    Pos pos;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    IdlDocument parse() {
        bool sawAnything = false;
        while (cur().kind != Tok::End) {
            sawAnything = true;
            if (cur().kind != Tok::Ident)
                fail(cur().pos, "expected a declaration");
            if (cur().text == "type")
                parseTypeDecl();
            else if (cur().text == "interface")
                parseInterfaceOrExtender();
            else
                fail(cur().pos, "expected 'type' or 'interface', got '" + cur().text + "'");
        }
        if (!sawAnything)
            fail(cur().pos, "empty document");
        return resolve();
    }

private:
    [[noreturn]] static void fail(Pos at, const std::string& msg) {
        throw ParseError(at.line, at.column, msg);
    }

    const Token& peek(std::size_t k = 0) {
        while (buf_.size() <= k)
            buf_.push_back(lex_.next());
        return buf_[k];
    }

    const Token& cur() { return peek(0); }

    Token advance() {
        Token t = cur();
        buf_.erase(buf_.begin());
        return t;
    }

    Token expect(Tok kind, const std::string& what) {
        if (cur().kind != kind)
            fail(cur().pos, "expected " + what + ", got '" +
                                (cur().kind == Tok::End ? "end of input" : cur().text) + "'");
        return advance();
    }

    std::string expectIdent(const std::string& what) { return expect(Tok::Ident, what).text; }

    bool atKeyword(std::string_view kw) {
        return cur().kind == Tok::Ident && cur().text == kw;
    }

    // --- declarations ---

    void parseTypeDecl() {
        advance(); // "type"
        Pos at = cur().pos;
        std::string name = expectIdent("type name");
        if (typeDecls_.count(name))
            fail(at, "duplicate type declaration '" + name + "'");
        expect(Tok::Colon, "':'");
        typeDecls_.emplace(name, parseTypeExpr());
        typeOrder_.push_back(name);
    }

    void parseInterfaceOrExtender() {
        Pos at = cur().pos;
        advance(); // "interface"
        if (atKeyword("extender")) {
            advance();
            parseExtenderBody(at);
        } else {
            parseInterfaceBody(at);
        }
    }

    void parseInterfaceBody(Pos at) {
        RawInterface iface;
        iface.pos = at;
        iface.name = expectIdent("interface name");
        expect(Tok::LBrace, "'{'");
        skipRequestResponseMarker();
        std::set<std::string> seen;
        while (cur().kind != Tok::RBrace) {
            RawOperation op = parseOperation();
            if (!seen.insert(op.name).second)
                fail(op.pos, "duplicate operation '" + op.name + "'");
            iface.ops.push_back(std::move(op));
            if (cur().kind == Tok::Comma)
                advance();
        }
        advance(); // '}'
        if (iface.ops.empty())
            fail(at, "interface '" + iface.name + "' declares no operations");
        rawInterfaces_.push_back(std::move(iface));
    }

    void parseExtenderBody(Pos at) {
        RawExtender ext;
        ext.pos = at;
        ext.name = expectIdent("extender name");
        expect(Tok::LBrace, "'{'");
        skipRequestResponseMarker();
        expect(Tok::Star, "'*'");
        expect(Tok::LParen, "'('");
        ext.request = parseTypeExpr();
        expect(Tok::RParen, "')'");
        expect(Tok::LParen, "'('");
        ext.response = parseTypeExpr();
        expect(Tok::RParen, "')'");
        ext.faults = parseThrowsClause();
        expect(Tok::RBrace, "'}'");
        rawExtenders_.push_back(std::move(ext));
    }

    void skipRequestResponseMarker() {
        if (atKeyword("RequestResponse")) {
            advance();
            expect(Tok::Colon, "':' after RequestResponse");
        }
    }

    RawOperation parseOperation() {
        RawOperation op;
        op.pos = cur().pos;
        op.name = expectIdent("operation name");
        expect(Tok::LParen, "'('");
        op.request = parseTypeExpr();
        expect(Tok::RParen, "')'");
        expect(Tok::LParen, "'('");
        op.response = parseTypeExpr();
        expect(Tok::RParen, "')'");
        op.faults = parseThrowsClause();
        return op;
    }

    std::vector<RawFaultRef> parseThrowsClause() {
        std::vector<RawFaultRef> faults;
        if (!atKeyword("throws"))
            return faults;
        advance();
        // Fault names separated by commas or plain whitespace. An identifier
        // followed by '(' is the next operation's name, not a fault.
        while (true) {
            if (cur().kind == Tok::Comma) {
                advance();
                continue;
            }
            if (cur().kind != Tok::Ident || peek(1).kind == Tok::LParen)
                break;
            faults.push_back({cur().text, cur().pos});
            advance();
        }
        if (faults.empty())
            fail(cur().pos, "expected fault name after 'throws'");
        return faults;
    }

    // --- type expressions ---

    RawTypePtr parseTypeExpr() {
        RawTypePtr first = parsePrimaryType();
        if (cur().kind != Tok::Pipe)
            return first;
        auto u = std::make_shared<RawType>();
        u->k = RawType::K::Union;
        u->pos = first->pos;
        u->alts.push_back(std::move(first));
        while (cur().kind == Tok::Pipe) {
            advance();
            u->alts.push_back(parsePrimaryType());
        }
        return u;
    }

    RawTypePtr parsePrimaryType() {
        auto t = std::make_shared<RawType>();
        t->pos = cur().pos;
        if (cur().kind == Tok::LBrace) {
            advance();
            t->k = RawType::K::Record;
            std::set<std::string> seen;
            while (cur().kind != Tok::RBrace) {
                RawType::Field f;
                f.pos = cur().pos;
                f.name = expectIdent("field name");
                if (!seen.insert(f.name).second)
                    fail(f.pos, "duplicate field '" + f.name + "'");
                if (cur().kind == Tok::Star) {
                    f.card = Cardinality::many();
                    advance();
                } else if (cur().kind == Tok::Quest) {
                    f.card = Cardinality::opt();
                    advance();
                }
                expect(Tok::Colon, "':' after field name");
                f.type = parseTypeExpr();
                t->fields.push_back(std::move(f));
                if (cur().kind == Tok::Comma)
                    advance();
            }
            advance(); // '}'
            return t;
        }
        if (cur().kind != Tok::Ident)
            fail(cur().pos, "expected a type");
        std::string word = cur().text;
        advance();
        if (word == "string") { t->k = RawType::K::Prim; t->prim = Prim::String; }
        else if (word == "int") { t->k = RawType::K::Prim; t->prim = Prim::Int; }
        else if (word == "bool") { t->k = RawType::K::Prim; t->prim = Prim::Bool; }
        else if (word == "double") { t->k = RawType::K::Prim; t->prim = Prim::Double; }
        else if (word == "void") { t->k = RawType::K::Prim; t->prim = Prim::Void; }
        else { t->k = RawType::K::Name; t->name = std::move(word); }
        return t;
    }

    // --- resolution ---

    IdlDocument resolve() {
        IdlDocument doc;
        for (const auto& name : typeOrder_)
            doc.types.emplace_back(name, resolveNamed(name, typeDecls_.at(name)->pos));

        for (const auto& raw : rawInterfaces_) {
            std::vector<OperationDef> ops;
            for (const auto& rop : raw.ops) {
                OperationDef op;
                op.name = rop.name;
                op.request = resolveType(*rop.request);
                op.response = resolveType(*rop.response);
                for (const auto& f : rop.faults)
                    op.faults.push_back(makeFault(f));
                ops.push_back(std::move(op));
            }
            doc.interfaces.emplace_back(raw.name, std::move(ops));
        }

        for (const auto& raw : rawExtenders_) {
            InterfaceExtender ext;
            ext.name = raw.name;
            ext.requestExtension = extensionFields(*raw.request, "request");
            ext.responseExtension = extensionFields(*raw.response, "response");
            for (const auto& f : raw.faults)
                ext.addedFaults.push_back(makeFault(f));
            doc.extenders.push_back(std::move(ext));
        }
        return doc;
    }

    FaultDef makeFault(const RawFaultRef& ref) {
        if (auto it = typeDecls_.find(ref.name); it != typeDecls_.end())
            return FaultDef(ref.name, resolveNamed(ref.name, ref.pos));
        return FaultDef(ref.name);
    }

    RecordFields extensionFields(const RawType& raw, const std::string& side) {
        ValueType t = resolveType(raw);
        if (t.isVoid())
            return {};
        if (!t.isRecord())
            fail(raw.pos, "extender " + side + " extension must be a record or void");
        return t.fields();
    }

    ValueType resolveNamed(const std::string& name, Pos useSite) {
        if (auto it = resolved_.find(name); it != resolved_.end())
            return it->second;
        auto decl = typeDecls_.find(name);
        if (decl == typeDecls_.end())
            fail(useSite, "unknown type '" + name + "'");
        if (!inProgress_.insert(name).second)
            fail(decl->second->pos, "recursive type '" + name + "' is not supported");
        ValueType t = resolveType(*decl->second);
        inProgress_.erase(name);
        resolved_.emplace(name, t);
        return t;
    }

    ValueType resolveType(const RawType& raw) {
        switch (raw.k) {
        case RawType::K::Prim:
            return ValueType::primitive(raw.prim);
        case RawType::K::Name:
            return resolveNamed(raw.name, raw.pos);
        case RawType::K::Record: {
            RecordFields fields;
            for (const auto& f : raw.fields)
                fields.emplace_back(f.name,
                                    ValueType::FieldSpec{resolveType(*f.type), f.card});
            return ValueType::record(std::move(fields));
        }
        case RawType::K::Union: {
            std::vector<ValueType> alts;
            for (const auto& a : raw.alts)
                alts.push_back(resolveType(*a));
            return ValueType::unionOf(std::move(alts));
        }
        }
        fail(raw.pos, "malformed type");
    }

    Lexer lex_;
    std::vector<Token> buf_;
    std::map<std::string, RawTypePtr> typeDecls_;
    std::vector<std::string> typeOrder_;
    std::vector<RawInterface> rawInterfaces_;
    std::vector<RawExtender> rawExtenders_;
    std::map<std::string, ValueType> resolved_;
    std::set<std::string> inProgress_;
};

} // namespace

IdlDocument parseIdl(std::string_view text) {
    return Parser(text).parse();
}

} // namespace emi::idl
