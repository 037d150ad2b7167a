#include "otriage/templates.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "otriage/errors.hpp"

namespace otriage {

namespace {

constexpr std::string_view kLocationText = "<location>";
constexpr std::string_view kVariableText = "<variable>";

bool is_word_char(unsigned char c) {
    // Non-ASCII bytes are treated as word characters; only ASCII punctuation
    // splits, so UTF-8 sequences stay intact.
    return std::isalnum(c) != 0 || c >= 0x80;
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

// Splits one whitespace-delimited chunk into word tokens; punctuation chars
// become single-char tokens.
void split_chunk(std::string_view chunk, std::vector<std::string>& out) {
    std::string current;
    for (char raw : chunk) {
        unsigned char c = static_cast<unsigned char>(raw);
        if (is_word_char(c)) {
            current.push_back(ascii_lower(raw));
        } else {
            if (!current.empty()) {
                out.push_back(std::move(current));
                current.clear();
            }
            out.emplace_back(1, raw);
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) split_chunk(text.substr(start, i - start), words);
    }
    return words;
}

}  // namespace

std::string render_token(const Token& t) {
    switch (t.kind) {
        case TokenKind::Word: return t.text;
        case TokenKind::Location: return std::string(kLocationText);
        case TokenKind::Variable: return std::string(kVariableText);
    }
    return {};
}

void LocationLexicon::add_phrase(std::string_view phrase) {
    std::vector<std::string> words = split_words(phrase);
    if (words.empty()) throw ValidationError("lexicon: empty location phrase");
    if (std::find(phrases_.begin(), phrases_.end(), words) == phrases_.end())
        phrases_.push_back(std::move(words));
    std::sort(phrases_.begin(), phrases_.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });
}

LocationLexicon LocationLexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    LocationLexicon lex;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || std::all_of(line.begin(), line.end(), [](unsigned char c) {
                return std::isspace(c) != 0;
            }))
            continue;
        lex.add_phrase(line);
    }
    return lex;
}

void LocationLexicon::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    for (const auto& phrase : phrases_) {
        for (std::size_t i = 0; i < phrase.size(); ++i) {
            if (i) out << ' ';
            out << phrase[i];
        }
        out << '\n';
    }
}

std::vector<Token> tokenize(std::string_view title, const LocationLexicon& lexicon) {
    struct Raw {
        bool placeholder;
        TokenKind kind;
        std::string text;
    };

    std::vector<Raw> raw;
    std::size_t i = 0;
    while (i < title.size()) {
        while (i < title.size() && std::isspace(static_cast<unsigned char>(title[i]))) ++i;
        std::size_t start = i;
        while (i < title.size() && !std::isspace(static_cast<unsigned char>(title[i]))) ++i;
        if (i == start) continue;
        std::string_view chunk = title.substr(start, i - start);
        if (chunk == kLocationText) {
            raw.push_back({true, TokenKind::Location, {}});
        } else if (chunk == kVariableText) {
            raw.push_back({true, TokenKind::Variable, {}});
        } else {
            std::vector<std::string> words;
            split_chunk(chunk, words);
            for (auto& w : words) raw.push_back({false, TokenKind::Word, std::move(w)});
        }
    }
    if (raw.empty()) throw ValidationError("empty title");

    // Collapse lexicon phrases (word tokens only; placeholders break a run).
    std::vector<Token> out;
    out.reserve(raw.size());
    std::size_t pos = 0;
    while (pos < raw.size()) {
        if (raw[pos].placeholder) {
            out.push_back({raw[pos].kind, {}});
            ++pos;
            continue;
        }
        bool matched = false;
        for (const auto& phrase : lexicon.phrases()) {
            if (pos + phrase.size() > raw.size()) continue;
            bool ok = true;
            for (std::size_t k = 0; k < phrase.size(); ++k) {
                if (raw[pos + k].placeholder || raw[pos + k].text != phrase[k]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                out.push_back({TokenKind::Location, {}});
                pos += phrase.size();
                matched = true;
                break;
            }
        }
        if (!matched) {
            out.push_back({TokenKind::Word, std::move(raw[pos].text)});
            ++pos;
        }
    }
    return out;
}

bool numeric_like(std::string_view word) {
    if (word.size() > 2 && word[0] == '0' && word[1] == 'x') word.remove_prefix(2);
    if (word.empty()) return false;
    bool has_digit = false;
    for (char c : word) {
        if (c >= '0' && c <= '9')
            has_digit = true;
        else if (c < 'a' || c > 'f')
            return false;
    }
    return has_digit;
}

Vocabulary build_vocabulary(std::span<const std::string> titles, int support_threshold,
                            const LocationLexicon& lexicon) {
    if (support_threshold < 1) throw ValidationError("support threshold must be >= 1");
    std::map<std::string, std::uint64_t> counts;
    for (const std::string& title : titles) {
        for (Token& t : tokenize(title, lexicon)) {
            if (t.kind != TokenKind::Word || numeric_like(t.text)) continue;
            ++counts[std::move(t.text)];
        }
    }
    Vocabulary vocab(support_threshold);
    for (auto& [word, count] : counts) {
        if (count >= static_cast<std::uint64_t>(support_threshold)) vocab.insert(word, count);
    }
    return vocab;
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "#otriage-vocabulary v1\tsupport_threshold=" << support_threshold_ << '\n';
    for (const auto& [word, count] : counts_) out << word << '\t' << count << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string header;
    if (!std::getline(in, header) || header.rfind("#otriage-vocabulary v1\t", 0) != 0)
        throw ParseError(path + ": not a v1 vocabulary file");
    auto eq = header.find("support_threshold=");
    if (eq == std::string::npos) throw ParseError(path + ": header missing support_threshold");
    Vocabulary vocab(std::stoi(header.substr(eq + 18)));
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected 'word<TAB>count'");
        vocab.insert(line.substr(0, tab), std::stoull(line.substr(tab + 1)));
    }
    return vocab;
}

std::string Template::rendered() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += render_token(tokens[i]);
    }
    return out;
}

Template parse_title(std::string_view title, const Vocabulary& vocab,
                     const LocationLexicon& lexicon, std::string owning_service) {
    Template t;
    t.owning_service = std::move(owning_service);
    t.tokens = tokenize(title, lexicon);
    for (Token& tok : t.tokens) {
        if (tok.kind != TokenKind::Word) continue;
        if (numeric_like(tok.text) || !vocab.contains(tok.text)) {
            tok.kind = TokenKind::Variable;
            tok.text.clear();
        }
    }
    return t;
}

std::optional<MetaIncidentId> TemplateRegistry::lookup(const Template& t) const {
    auto it = ids_.find({t.owning_service, t.rendered()});
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<MetaIncidentId> TemplateRegistry::assign(const Template& t) {
    std::pair<std::string, std::string> key{t.owning_service, t.rendered()};
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (mode_ == Mode::Frozen) return std::nullopt;
    MetaIncidentId id = static_cast<MetaIncidentId>(by_id_.size());
    ids_.emplace(key, id);
    by_id_.push_back(std::move(key));
    return id;
}

void TemplateRegistry::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "#otriage-registry v1\n";
    for (std::size_t id = 0; id < by_id_.size(); ++id)
        out << id << '\t' << by_id_[id].first << '\t' << by_id_[id].second << '\n';
}

TemplateRegistry TemplateRegistry::load(const std::string& path, Mode mode) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string header;
    if (!std::getline(in, header) || header != "#otriage-registry v1")
        throw ParseError(path + ": not a v1 registry file");
    TemplateRegistry reg(mode);
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string id_field, service, rendered;
        if (!std::getline(ss, id_field, '\t') || !std::getline(ss, service, '\t') ||
            !std::getline(ss, rendered))
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected 'id<TAB>service<TAB>template'");
        if (std::stoul(id_field) != reg.by_id_.size())
            throw ParseError(path + ":" + std::to_string(line_no) + ": ids must be dense from 0");
        std::pair<std::string, std::string> key{service, rendered};
        if (!reg.ids_.emplace(key, static_cast<MetaIncidentId>(reg.by_id_.size())).second)
            throw ValidationError(path + ":" + std::to_string(line_no) + ": duplicate template");
        reg.by_id_.push_back(std::move(key));
    }
    return reg;
}

}  // namespace otriage
