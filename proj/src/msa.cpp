#include "editio/msa.hpp"

#include <algorithm>
#include <numeric>

#include "editio/errors.hpp"
#include "editio/unicode.hpp"
#include "json.hpp"
#include "nw_engine.hpp"

namespace editio {

namespace {

constexpr std::string_view kMsaFormat = "editio-msa-v1";

int infer_alphabet_size(const std::vector<CharSequence>& seqs) {
    int32_t max_ord = -1;
    for (const auto& s : seqs)
        for (int32_t v : s.items) max_ord = std::max(max_ord, v);
    return static_cast<int>(max_ord + 1);
}

CharSequence degap_row(const MultipleAlignment& msa, size_t row) {
    CharSequence seq;
    seq.source_id = msa.row_ids[row];
    for (int32_t v : msa.rows[row])
        if (v != kGapSymbol) seq.items.push_back(v);
    seq.original_length = seq.items.size();
    return seq;
}

void drop_all_gap_columns(MultipleAlignment& msa) {
    const size_t cols = msa.columns();
    std::vector<size_t> keep;
    keep.reserve(cols);
    for (size_t c = 0; c < cols; ++c) {
        bool any = false;
        for (const auto& row : msa.rows) {
            if (row[c] != kGapSymbol) {
                any = true;
                break;
            }
        }
        if (any) keep.push_back(c);
    }
    if (keep.size() == cols) return;
    for (auto& row : msa.rows) {
        std::vector<int32_t> next;
        next.reserve(keep.size());
        for (size_t c : keep) next.push_back(row[c]);
        row = std::move(next);
    }
}

// Scaled column scores; multiplying every score by the profile's row
// count keeps the DP integral without changing the optimum.
struct ProfileScorer {
    const ColumnProfile& profile;
    const std::vector<int32_t>& seq;
    const ScoringScheme& scoring;

    long long column_vs_symbol(size_t col, size_t j) const {
        const long long hits = profile.symbol_counts[col][static_cast<size_t>(seq[j])];
        const long long non_gap = profile.non_gap(col);
        const long long gaps = profile.gap_counts[col];
        return hits * (scoring.match - scoring.mismatch) + non_gap * scoring.mismatch +
               gaps * scoring.gap;
    }
    long long column_vs_gap(size_t col) const {
        return static_cast<long long>(profile.non_gap(col)) * scoring.gap;
    }
    long long symbol_vs_gap(size_t) const {
        return static_cast<long long>(profile.rows_total) * scoring.gap;
    }
};

std::pair<long long, std::vector<detail::EditOp>> align_profile_ops(const ColumnProfile& profile,
                                                                    const CharSequence& seq,
                                                                    const ScoringScheme& scoring,
                                                                    const AlignLimits& limits) {
    if (profile.columns() == 0) throw UsageError("cannot align against an empty profile");
    scoring.validate();
    ProfileScorer scorer{profile, seq.items, scoring};
    auto score = [&](size_t i, size_t j) { return scorer.column_vs_symbol(i, j); };
    auto del_cost = [&](size_t i) { return scorer.column_vs_gap(i); };
    auto ins_cost = [&](size_t j) { return scorer.symbol_vs_gap(j); };
    return detail::nw_align(profile.columns(), seq.items.size(), score, del_cost, ins_cost,
                            limits.full_matrix_max);
}

int32_t majority_symbol(const ColumnProfile& profile, size_t col) {
    const auto& counts = profile.symbol_counts[col];
    int32_t best = 0;
    for (size_t s = 1; s < counts.size(); ++s)
        if (counts[s] > counts[static_cast<size_t>(best)]) best = static_cast<int32_t>(s);
    return best;
}

// Splices a newly aligned sequence into the alignment the profile was
// built from.
MultipleAlignment merge_alignment(const MultipleAlignment& msa, const CharSequence& seq,
                                  const std::vector<detail::EditOp>& ops) {
    MultipleAlignment out;
    out.row_ids = msa.row_ids;
    out.row_ids.push_back(seq.source_id);
    out.rows.assign(msa.row_count() + 1, {});
    for (auto& row : out.rows) row.reserve(ops.size());

    size_t col = 0, j = 0;
    for (const auto op : ops) {
        switch (op) {
            case detail::EditOp::Sub:
                for (size_t r = 0; r < msa.row_count(); ++r) out.rows[r].push_back(msa.rows[r][col]);
                out.rows.back().push_back(seq.items[j]);
                ++col;
                ++j;
                break;
            case detail::EditOp::Del:
                for (size_t r = 0; r < msa.row_count(); ++r) out.rows[r].push_back(msa.rows[r][col]);
                out.rows.back().push_back(kGapSymbol);
                ++col;
                break;
            case detail::EditOp::Ins:
                for (size_t r = 0; r < msa.row_count(); ++r) out.rows[r].push_back(kGapSymbol);
                out.rows.back().push_back(seq.items[j]);
                ++j;
                break;
        }
    }
    return out;
}

MultipleAlignment from_pairwise(const PairwiseAlignment& alignment) {
    MultipleAlignment out;
    out.rows = {alignment.top, alignment.bottom};
    out.row_ids = {alignment.top_id, alignment.bottom_id};
    return out;
}

}  // namespace

ColumnProfile ColumnProfile::from_alignment(const MultipleAlignment& msa, int alphabet_size) {
    ColumnProfile p;
    p.rows_total = msa.row_count();
    p.alphabet_size = alphabet_size;
    const size_t cols = msa.columns();
    p.symbol_counts.assign(cols, std::vector<uint32_t>(static_cast<size_t>(alphabet_size), 0));
    p.gap_counts.assign(cols, 0);
    for (const auto& row : msa.rows) {
        for (size_t c = 0; c < cols; ++c) {
            if (row[c] == kGapSymbol) {
                ++p.gap_counts[c];
            } else {
                ++p.symbol_counts[c][static_cast<size_t>(row[c])];
            }
        }
    }
    return p;
}

PairwiseAlignment align_sequence_to_profile(const ColumnProfile& profile, const CharSequence& seq,
                                            const ScoringScheme& scoring,
                                            const AlignLimits& limits) {
    auto [total, ops] = align_profile_ops(profile, seq, scoring, limits);

    PairwiseAlignment out;
    out.score = total;
    out.top_id = "profile";
    out.bottom_id = seq.source_id;
    size_t col = 0, j = 0;
    for (const auto op : ops) {
        switch (op) {
            case detail::EditOp::Sub:
                out.top.push_back(majority_symbol(profile, col++));
                out.bottom.push_back(seq.items[j++]);
                break;
            case detail::EditOp::Del:
                out.top.push_back(majority_symbol(profile, col++));
                out.bottom.push_back(kGapSymbol);
                break;
            case detail::EditOp::Ins:
                out.top.push_back(kGapSymbol);
                out.bottom.push_back(seq.items[j++]);
                break;
        }
    }
    return out;
}

long long sum_of_pairs_score(const MultipleAlignment& msa, const ScoringScheme& scoring,
                             int alphabet_size) {
    const ColumnProfile profile = ColumnProfile::from_alignment(msa, alphabet_size);
    long long total = 0;
    for (size_t c = 0; c < profile.columns(); ++c) {
        const long long non_gap = profile.non_gap(c);
        const long long gaps = profile.gap_counts[c];
        long long same_pairs = 0;
        for (const uint32_t n : profile.symbol_counts[c]) {
            same_pairs += static_cast<long long>(n) * (n - 1) / 2;
        }
        const long long non_gap_pairs = non_gap * (non_gap - 1) / 2;
        total += same_pairs * scoring.match + (non_gap_pairs - same_pairs) * scoring.mismatch +
                 non_gap * gaps * scoring.gap;
    }
    return total;
}

MultipleAlignment barton_sternberg(const std::vector<CharSequence>& seqs,
                                   const ScoringScheme& scoring, int refinement_rounds,
                                   int alphabet_size) {
    if (seqs.size() < 2) {
        throw UsageError("multiple alignment requires at least 2 sequences, got " +
                         std::to_string(seqs.size()));
    }
    if (refinement_rounds < 0) throw UsageError("refinement_rounds must be >= 0");
    scoring.validate();
    if (alphabet_size <= 0) alphabet_size = infer_alphabet_size(seqs);

    const size_t k = seqs.size();
    const auto identities = identity_matrix(seqs, scoring);

    // Seed with the most similar pair; ties resolve to the earliest
    // input indices.
    size_t seed_a = 0, seed_b = 1;
    double best_identity = -1.0;
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = i + 1; j < k; ++j) {
            if (identities[i][j] > best_identity) {
                best_identity = identities[i][j];
                seed_a = i;
                seed_b = j;
            }
        }
    }

    MultipleAlignment msa = from_pairwise(needleman_wunsch(seqs[seed_a], seqs[seed_b], scoring));
    std::vector<size_t> member_of;  // original index per msa row
    member_of = {seed_a, seed_b};
    std::vector<bool> placed(k, false);
    placed[seed_a] = placed[seed_b] = true;

    // Add the rest in decreasing order of similarity to the aligned set.
    for (size_t added = 2; added < k; ++added) {
        size_t pick = k;
        double pick_identity = -1.0;
        for (size_t i = 0; i < k; ++i) {
            if (placed[i]) continue;
            double sim = -1.0;
            for (size_t m : member_of) sim = std::max(sim, identities[i][m]);
            if (sim > pick_identity) {
                pick_identity = sim;
                pick = i;
            }
        }
        const auto profile = ColumnProfile::from_alignment(msa, alphabet_size);
        auto [score, ops] = align_profile_ops(profile, seqs[pick], scoring, {});
        (void)score;
        msa = merge_alignment(msa, seqs[pick], ops);
        member_of.push_back(pick);
        placed[pick] = true;
    }

    // Refinement: pull each row out, re-align it against the rest and
    // keep the result only when the sum-of-pairs score improves.
    long long current_sop = sum_of_pairs_score(msa, scoring, alphabet_size);
    for (int round = 0; round < refinement_rounds; ++round) {
        bool changed = false;
        for (size_t r = 0; r < msa.row_count(); ++r) {
            const CharSequence extracted = degap_row(msa, r);

            MultipleAlignment rest;
            rest.row_ids = msa.row_ids;
            rest.row_ids.erase(rest.row_ids.begin() + static_cast<ptrdiff_t>(r));
            rest.rows = msa.rows;
            rest.rows.erase(rest.rows.begin() + static_cast<ptrdiff_t>(r));
            drop_all_gap_columns(rest);

            const auto profile = ColumnProfile::from_alignment(rest, alphabet_size);
            auto [score, ops] = align_profile_ops(profile, extracted, scoring, {});
            (void)score;
            MultipleAlignment candidate = merge_alignment(rest, extracted, ops);
            // Put the re-aligned row back where it came from.
            std::rotate(candidate.rows.begin() + static_cast<ptrdiff_t>(r),
                        candidate.rows.end() - 1, candidate.rows.end());
            std::rotate(candidate.row_ids.begin() + static_cast<ptrdiff_t>(r),
                        candidate.row_ids.end() - 1, candidate.row_ids.end());

            const long long candidate_sop = sum_of_pairs_score(candidate, scoring, alphabet_size);
            if (candidate_sop > current_sop) {
                msa = std::move(candidate);
                current_sop = candidate_sop;
                changed = true;
            }
        }
        if (!changed) break;
    }

    // Restore input order; column content is order-independent.
    MultipleAlignment ordered;
    ordered.rows.resize(k);
    ordered.row_ids.resize(k);
    for (size_t pos = 0; pos < k; ++pos) {
        ordered.rows[member_of[pos]] = std::move(msa.rows[pos]);
        ordered.row_ids[member_of[pos]] = std::move(msa.row_ids[pos]);
    }
    return ordered;
}

MarkedAlignment mark_match_columns(const MultipleAlignment& msa, double gap_threshold) {
    if (!(gap_threshold > 0.0 && gap_threshold <= 1.0)) {
        throw UsageError("gap_threshold must be in (0, 1]");
    }
    MarkedAlignment marked;
    marked.alignment = msa;
    marked.gap_threshold = gap_threshold;
    const auto rows = static_cast<double>(msa.row_count());
    for (size_t c = 0; c < msa.columns(); ++c) {
        size_t gaps = 0;
        for (const auto& row : msa.rows)
            if (row[c] == kGapSymbol) ++gaps;
        if (static_cast<double>(gaps) / rows < gap_threshold) marked.match_columns.push_back(c);
    }
    return marked;
}

std::string msa_to_text(const MultipleAlignment& msa, const Alphabet& alphabet) {
    std::u32string out;
    for (const auto& row : msa.rows) {
        for (int32_t v : row) {
            out.push_back(v == kGapSymbol ? U'▁' : display_glyph(alphabet.symbol(v)));
        }
        out.push_back(U'\n');
    }
    return encode_utf8(out);
}

std::string marked_alignment_to_json(const MarkedAlignment& marked, const Alphabet& alphabet) {
    nlohmann::json j;
    j["format"] = kMsaFormat;
    j["row_ids"] = marked.alignment.row_ids;
    j["rows"] = marked.alignment.rows;
    j["match_columns"] = marked.match_columns;
    j["gap_threshold"] = marked.gap_threshold;
    j["alphabet"] = nlohmann::json::parse(alphabet.to_json_string());
    return j.dump(2) + "\n";
}

MarkedAlignment marked_alignment_from_json(std::string_view json_text, Alphabet* alphabet_out) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("alignment file is not valid JSON: ") + e.what());
    }
    const auto format = j.value("format", std::string{});
    if (format != kMsaFormat) {
        throw ParseError("unsupported alignment format: found \"" + format + "\", expected \"" +
                         std::string(kMsaFormat) + "\"");
    }
    MarkedAlignment marked;
    marked.alignment.row_ids = j.at("row_ids").get<std::vector<std::string>>();
    marked.alignment.rows = j.at("rows").get<std::vector<std::vector<int32_t>>>();
    marked.match_columns = j.at("match_columns").get<std::vector<size_t>>();
    marked.gap_threshold = j.at("gap_threshold").get<double>();
    if (alphabet_out != nullptr) {
        *alphabet_out = Alphabet::from_json_string(j.at("alphabet").dump());
    }
    return marked;
}

}  // namespace editio
