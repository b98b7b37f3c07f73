#include "editio/text.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>

#include "editio/errors.hpp"
#include "editio/unicode.hpp"
#include "json.hpp"

namespace editio {

namespace {

constexpr std::array<char32_t, 3> kMandatory = {U'\n', U'\f', U' '};
constexpr std::string_view kAlphabetFormat = "editio-alphabet-v1";

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = seed;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Alphabet Alphabet::from_symbols(std::vector<char32_t> symbols) {
    symbols.insert(symbols.end(), kMandatory.begin(), kMandatory.end());
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());

    Alphabet a;
    a.symbols_ = std::move(symbols);
    a.replacement_index_ = a.index_of(U' ');
    a.fingerprint_ = fnv1a64(a.symbols_.data(), a.symbols_.size() * sizeof(char32_t));
    return a;
}

int Alphabet::index_of(char32_t cp) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), cp);
    if (it == symbols_.end() || *it != cp) return -1;
    return static_cast<int>(it - symbols_.begin());
}

std::string Alphabet::to_json_string() const {
    nlohmann::json j;
    j["format"] = kAlphabetFormat;
    j["codepoints"] = nlohmann::json::array();
    for (char32_t cp : symbols_) j["codepoints"].push_back(static_cast<uint32_t>(cp));
    return j.dump(2) + "\n";
}

Alphabet Alphabet::from_json_string(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("alphabet file is not valid JSON: ") + e.what());
    }
    if (!j.contains("format") || !j["format"].is_string()) {
        throw ParseError("alphabet file lacks a \"format\" field");
    }
    const auto format = j["format"].get<std::string>();
    if (format != kAlphabetFormat) {
        throw ParseError("unsupported alphabet format: found \"" + format + "\", expected \"" +
                         std::string(kAlphabetFormat) + "\"");
    }
    std::vector<char32_t> symbols;
    for (const auto& v : j.at("codepoints")) {
        symbols.push_back(static_cast<char32_t>(v.get<uint32_t>()));
    }
    return from_symbols(std::move(symbols));
}

void Alphabet::save(const std::filesystem::path& path) const {
    write_text_file(path, to_json_string());
}

Alphabet Alphabet::load(const std::filesystem::path& path) {
    return from_json_string(read_text_file(path));
}

Alphabet build_alphabet(const std::vector<std::u32string>& corpus, const AlphabetPolicy& policy) {
    std::vector<char32_t> symbols(policy.mandatory.begin(), policy.mandatory.end());

    if (policy.mode == AlphabetPolicy::Mode::ExplicitList) {
        symbols.insert(symbols.end(), policy.explicit_symbols.begin(),
                       policy.explicit_symbols.end());
        return Alphabet::from_symbols(std::move(symbols));
    }

    if (corpus.empty()) {
        throw ConfigError("corpus-derived alphabet requires a non-empty corpus");
    }
    if (policy.min_frequency < 1) {
        throw ConfigError("min_frequency must be >= 1, got " +
                          std::to_string(policy.min_frequency));
    }

    std::map<char32_t, long long> counts;
    for (const auto& text : corpus) {
        for (char32_t cp : collapse_line_endings(text)) ++counts[cp];
    }
    for (const auto& [cp, count] : counts) {
        if (count >= policy.min_frequency) symbols.push_back(cp);
    }
    return Alphabet::from_symbols(std::move(symbols));
}

CharSequence normalize_text(std::u32string_view raw, const Alphabet& alphabet,
                            std::string source_id) {
    const std::u32string collapsed = collapse_line_endings(raw);

    CharSequence seq;
    seq.source_id = std::move(source_id);
    seq.original_length = collapsed.size();
    seq.alphabet_fingerprint = alphabet.fingerprint();
    seq.items.reserve(collapsed.size());
    for (char32_t cp : collapsed) {
        const int ord = alphabet.index_of(cp);
        seq.items.push_back(ord >= 0 ? ord : alphabet.replacement_index());
    }
    return seq;
}

std::vector<CharSequence> load_corpus(const std::vector<std::filesystem::path>& paths,
                                      const Alphabet& alphabet) {
    std::vector<CharSequence> out;
    out.reserve(paths.size());
    for (const auto& path : paths) {
        const std::string bytes = read_text_file(path);
        std::u32string text;
        try {
            text = decode_utf8(bytes);
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
        out.push_back(normalize_text(text, alphabet, path.stem().string()));
    }
    return out;
}

std::u32string to_text(const CharSequence& seq, const Alphabet& alphabet) {
    std::u32string out;
    out.reserve(seq.items.size());
    for (int32_t ord : seq.items) out.push_back(alphabet.symbol(ord));
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure on file: " + path.string());
    return std::move(ss).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failure on file: " + path.string());
}

}  // namespace editio
