#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emi::demo {

class DemoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Publication {
    enum class Kind { Proceeding, InProceeding, Article };

    std::string id;
    Kind kind = Kind::Article;
    std::string confId;  // proceedings and inproceedings
    std::string journal; // articles
    std::string title;
    std::vector<std::string> authors; // empty for proceedings
    int year = 0;
    std::string doi;
};

/// Immutable backing data for the catalogue services. Publication order is
/// the order of the source file and never changes after load, so paginated
/// results are reproducible.
struct Dataset {
    std::map<std::string, std::string> authors;
    std::map<std::string, std::string> conferences;
    std::vector<Publication> publications;
    std::map<std::string, std::vector<std::string>> citations; // pub -> cited pubs

    /// The dataset compiled into the library, byte-identical to the shipped
    /// data/pubcat_dataset.json.
    static Dataset builtin();
    static const std::string& builtinJson();

    static Dataset loadFile(const std::string& path);
    static Dataset fromJsonText(const std::string& text);

    const Publication* find(std::string_view pubId) const;

    /// Referential integrity: unique publication ids, author and conference
    /// references resolve, citation keys resolve on both sides. Throws
    /// DemoError with the first problem found.
    void validate() const;
};

} // namespace emi::demo
