#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace otriage {

// Stable identifier of an abnormal-symptom class: dense integers from 0 in
// registration order.
using MetaIncidentId = int;

enum class TokenKind { Word, Location, Variable };

struct Token {
    TokenKind kind = TokenKind::Word;
    std::string text;  // lowercase; empty for placeholder tokens

    bool operator==(const Token&) const = default;
};

// Rendered form: word text, or "<location>" / "<variable>".
std::string render_token(const Token& t);

// Multi-word location phrases ("west us 2") collapsed to a single token.
// Matching is greedy, longest phrase first.
class LocationLexicon {
public:
    void add_phrase(std::string_view phrase);

    // One phrase per line; blank lines skipped.
    static LocationLexicon load(const std::string& path);
    void save(const std::string& path) const;

    // Tokenized phrases, longest first (ties lexicographic).
    const std::vector<std::vector<std::string>>& phrases() const { return phrases_; }
    bool empty() const { return phrases_.empty(); }

private:
    std::vector<std::vector<std::string>> phrases_;
};

// Lowercases the title, splits on whitespace and punctuation boundaries
// (punctuation becomes its own word token), collapses lexicon phrases to
// location tokens. Literal "<location>" / "<variable>" chunks are kept as
// placeholder tokens so rendered templates re-tokenize to themselves.
// Throws ValidationError for an all-whitespace title.
std::vector<Token> tokenize(std::string_view title, const LocationLexicon& lexicon);

// True for tokens that look like a number or hex blob ("5", "7f3a", "0x1f").
// These never enter the vocabulary and always parse as variables.
bool numeric_like(std::string_view word);

// Frequent-word vocabulary over a title corpus.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(int support_threshold) : support_threshold_(support_threshold) {}

    bool contains(const std::string& word) const { return counts_.count(word) != 0; }
    std::size_t size() const { return counts_.size(); }
    int support_threshold() const { return support_threshold_; }
    const std::map<std::string, std::uint64_t>& counts() const { return counts_; }

    void insert(std::string word, std::uint64_t count) { counts_[std::move(word)] = count; }

    // `word<TAB>count` lines under a header recording the threshold.
    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);

private:
    std::map<std::string, std::uint64_t> counts_;
    int support_threshold_ = 0;
};

// Counts word tokens across all titles (location and numeric-like positions
// excluded) and keeps those occurring >= support_threshold times.
Vocabulary build_vocabulary(std::span<const std::string> titles, int support_threshold,
                            const LocationLexicon& lexicon);

// A service-scoped parsed title. Equality is (owning_service, rendered tokens).
struct Template {
    std::string owning_service;
    std::vector<Token> tokens;

    std::string rendered() const;
    bool operator==(const Template& o) const {
        return owning_service == o.owning_service && tokens == o.tokens;
    }
};

// tokenize + replace out-of-vocabulary (or numeric-like) words with variables.
Template parse_title(std::string_view title, const Vocabulary& vocab,
                     const LocationLexicon& lexicon, std::string owning_service);

// Bijection between templates and meta-incident IDs. IDs are dense, assigned
// in first-seen order, and never reassigned.
class TemplateRegistry {
public:
    enum class Mode { Mining, Frozen };

    explicit TemplateRegistry(Mode mode = Mode::Mining) : mode_(mode) {}

    // Mining: returns the existing ID or registers a fresh one.
    // Frozen: returns nullopt for unseen templates.
    std::optional<MetaIncidentId> assign(const Template& t);

    std::optional<MetaIncidentId> lookup(const Template& t) const;

    void freeze() { mode_ = Mode::Frozen; }
    Mode mode() const { return mode_; }
    std::size_t size() const { return by_id_.size(); }

    // (service, rendered template) for an ID; valid for 0 <= id < size().
    const std::pair<std::string, std::string>& entry(MetaIncidentId id) const {
        return by_id_[static_cast<std::size_t>(id)];
    }

    // Versioned TSV: `id<TAB>service<TAB>rendered-template`, ids ascending.
    void save(const std::string& path) const;
    static TemplateRegistry load(const std::string& path, Mode mode = Mode::Frozen);

    bool operator==(const TemplateRegistry& o) const { return by_id_ == o.by_id_; }

private:
    Mode mode_;
    std::map<std::pair<std::string, std::string>, MetaIncidentId> ids_;
    std::vector<std::pair<std::string, std::string>> by_id_;
};

}  // namespace otriage
