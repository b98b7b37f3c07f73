#include "editio/align.hpp"

#include <atomic>
#include <future>
#include <thread>

#include "editio/errors.hpp"
#include "editio/unicode.hpp"
#include "json.hpp"
#include "nw_engine.hpp"

namespace editio {

void ScoringScheme::validate() const {
    if (match <= mismatch) {
        throw ConfigError("scoring: match must exceed mismatch");
    }
    if (gap >= match) {
        throw ConfigError("scoring: gap must be below match");
    }
}

namespace {

void check_same_alphabet(const CharSequence& a, const CharSequence& b) {
    if (a.alphabet_fingerprint != 0 && b.alphabet_fingerprint != 0 &&
        a.alphabet_fingerprint != b.alphabet_fingerprint) {
        throw UsageError("sequences '" + a.source_id + "' and '" + b.source_id +
                         "' were normalized against different alphabets");
    }
}

}  // namespace

PairwiseAlignment needleman_wunsch(const CharSequence& a, const CharSequence& b,
                                   const ScoringScheme& scoring, const AlignLimits& limits) {
    scoring.validate();
    check_same_alphabet(a, b);

    const auto& x = a.items;
    const auto& y = b.items;
    auto score = [&](size_t i, size_t j) -> long long {
        return x[i] == y[j] ? scoring.match : scoring.mismatch;
    };
    auto gap_cost = [&](size_t) -> long long { return scoring.gap; };

    auto [total, ops] =
        detail::nw_align(x.size(), y.size(), score, gap_cost, gap_cost, limits.full_matrix_max);

    PairwiseAlignment out;
    out.score = total;
    out.top_id = a.source_id;
    out.bottom_id = b.source_id;
    out.top.reserve(ops.size());
    out.bottom.reserve(ops.size());
    size_t i = 0, j = 0;
    for (const auto op : ops) {
        switch (op) {
            case detail::EditOp::Sub:
                out.top.push_back(x[i++]);
                out.bottom.push_back(y[j++]);
                break;
            case detail::EditOp::Del:
                out.top.push_back(x[i++]);
                out.bottom.push_back(kGapSymbol);
                break;
            case detail::EditOp::Ins:
                out.top.push_back(kGapSymbol);
                out.bottom.push_back(y[j++]);
                break;
        }
    }
    return out;
}

IdentityStats sequence_identity(const PairwiseAlignment& alignment) {
    IdentityStats stats;
    stats.alignment_length = alignment.columns();
    for (size_t c = 0; c < alignment.columns(); ++c) {
        if (alignment.top[c] != kGapSymbol && alignment.top[c] == alignment.bottom[c]) {
            ++stats.matches;
        }
    }
    stats.identity =
        stats.alignment_length == 0
            ? 1.0
            : static_cast<double>(stats.matches) / static_cast<double>(stats.alignment_length);
    return stats;
}

namespace {

constexpr char32_t kGapGlyph = U'░';

char32_t column_glyph(int32_t entry, const Alphabet& alphabet) {
    if (entry == kGapSymbol) return kGapGlyph;
    return display_glyph(alphabet.symbol(entry));
}

}  // namespace

std::string render_alignment(const PairwiseAlignment& alignment, const Alphabet& alphabet,
                             size_t width) {
    if (width < 1) throw UsageError("render width must be >= 1");

    std::u32string out;
    const size_t cols = alignment.columns();
    for (size_t start = 0; start < cols; start += width) {
        const size_t end = std::min(cols, start + width);
        if (start > 0) out.push_back(U'\n');
        for (size_t c = start; c < end; ++c) out.push_back(column_glyph(alignment.top[c], alphabet));
        out.push_back(U'\n');
        for (size_t c = start; c < end; ++c)
            out.push_back(column_glyph(alignment.bottom[c], alphabet));
        out.push_back(U'\n');
    }
    return encode_utf8(out);
}

std::string identity_matrix_json(const std::vector<std::string>& ids,
                                 const std::vector<std::vector<double>>& identity) {
    nlohmann::json j;
    j["ids"] = ids;
    j["identity"] = identity;
    return j.dump(2) + "\n";
}

std::vector<std::vector<double>> identity_matrix(const std::vector<CharSequence>& seqs,
                                                 const ScoringScheme& scoring,
                                                 const AlignLimits& limits) {
    const size_t k = seqs.size();
    std::vector<std::vector<double>> matrix(k, std::vector<double>(k, 1.0));

    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);

    const unsigned workers =
        std::max(1u, std::min({std::thread::hardware_concurrency(), 4u,
                               static_cast<unsigned>(pairs.size())}));
    std::atomic<size_t> next{0};
    auto run = [&] {
        for (size_t p = next.fetch_add(1); p < pairs.size(); p = next.fetch_add(1)) {
            const auto [i, j] = pairs[p];
            const auto alignment = needleman_wunsch(seqs[i], seqs[j], scoring, limits);
            const double identity = sequence_identity(alignment).identity;
            matrix[i][j] = matrix[j][i] = identity;
        }
    };
    std::vector<std::future<void>> futures;
    for (unsigned w = 1; w < workers; ++w) futures.push_back(std::async(std::launch::async, run));
    run();
    for (auto& f : futures) f.get();
    return matrix;
}

}  // namespace editio
