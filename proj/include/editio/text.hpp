#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace editio {

/// The emission alphabet: an ordered set of Unicode code points.
/// Space (U+0020), line feed (U+000A) and form feed (U+000C) are always
/// members; every out-of-alphabet code point normalizes to the space
/// ordinal. Symbols are kept sorted by code point so that serialization
/// is deterministic.
class Alphabet {
public:
    /// Builds an alphabet from arbitrary symbols. The three mandatory
    /// whitespace code points are added when missing; duplicates are
    /// dropped; the result is sorted by code point.
    static Alphabet from_symbols(std::vector<char32_t> symbols);

    const std::vector<char32_t>& symbols() const { return symbols_; }
    int size() const { return static_cast<int>(symbols_.size()); }

    /// Ordinal of a code point, or -1 when absent.
    int index_of(char32_t cp) const;
    bool contains(char32_t cp) const { return index_of(cp) >= 0; }

    char32_t symbol(int ordinal) const { return symbols_.at(static_cast<size_t>(ordinal)); }
    int replacement_index() const { return replacement_index_; }

    /// Order-sensitive hash of the symbol list, used to detect sequences
    /// normalized against different alphabets.
    uint64_t fingerprint() const { return fingerprint_; }

    std::string to_json_string() const;
    static Alphabet from_json_string(std::string_view json_text);
    void save(const std::filesystem::path& path) const;
    static Alphabet load(const std::filesystem::path& path);

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

private:
    Alphabet() = default;

    std::vector<char32_t> symbols_;
    int replacement_index_ = 0;
    uint64_t fingerprint_ = 0;
};

/// How build_alphabet assembles the symbol set.
struct AlphabetPolicy {
    enum class Mode { ExplicitList, CorpusDerived };

    Mode mode = Mode::CorpusDerived;
    /// Corpus-derived mode keeps code points occurring at least this often.
    int min_frequency = 1;
    /// Explicit-list mode uses exactly these symbols (plus mandatory ones).
    std::vector<char32_t> explicit_symbols;
    /// Always included regardless of mode or frequency.
    std::set<char32_t> mandatory = {U' ', U'\n', U'\f'};
};

/// A text normalized to alphabet ordinals.
struct CharSequence {
    std::vector<int32_t> items;
    std::string source_id;
    /// Code-point count after line-ending collapsing, before alphabet
    /// replacement. Replacement is 1:1, so this equals items.size().
    size_t original_length = 0;
    /// Fingerprint of the alphabet the ordinals refer to; 0 when unknown.
    uint64_t alphabet_fingerprint = 0;

    size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
};

Alphabet build_alphabet(const std::vector<std::u32string>& corpus, const AlphabetPolicy& policy);

/// Total function: collapses line endings, then maps each code point to
/// its ordinal, with out-of-alphabet code points replaced by the space
/// ordinal.
CharSequence normalize_text(std::u32string_view raw, const Alphabet& alphabet,
                            std::string source_id = "");

/// Reads UTF-8 files and normalizes them. source_id is the file stem;
/// output order follows input order.
std::vector<CharSequence> load_corpus(const std::vector<std::filesystem::path>& paths,
                                      const Alphabet& alphabet);

/// Decodes ordinals back to code points.
std::u32string to_text(const CharSequence& seq, const Alphabet& alphabet);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace editio
