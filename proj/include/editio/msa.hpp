#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "editio/align.hpp"
#include "editio/text.hpp"

namespace editio {

/// Rows of equal length over a shared column axis; kGapSymbol marks
/// gaps. No column is all-gap; de-gapping row k reproduces input
/// sequence k.
struct MultipleAlignment {
    std::vector<std::vector<int32_t>> rows;
    std::vector<std::string> row_ids;

    size_t columns() const { return rows.empty() ? 0 : rows.front().size(); }
    size_t row_count() const { return rows.size(); }
};

/// A multiple alignment with consensus columns flagged. A column is a
/// match column iff its gap fraction is strictly below the threshold
/// recorded here.
struct MarkedAlignment {
    MultipleAlignment alignment;
    std::vector<size_t> match_columns;
    double gap_threshold = 0.5;
};

/// Per-column symbol and gap counts; intermediate for aligning a
/// sequence against a growing alignment.
struct ColumnProfile {
    size_t rows_total = 0;
    int alphabet_size = 0;
    /// columns x alphabet_size, dense.
    std::vector<std::vector<uint32_t>> symbol_counts;
    std::vector<uint32_t> gap_counts;

    size_t columns() const { return symbol_counts.size(); }
    uint32_t non_gap(size_t column) const {
        return static_cast<uint32_t>(rows_total) - gap_counts[column];
    }

    static ColumnProfile from_alignment(const MultipleAlignment& msa, int alphabet_size);
};

/// Iterative multiple alignment: seed with the most similar pair, add
/// the remaining sequences to the growing profile in decreasing order
/// of similarity, then re-align each row against the others for the
/// given number of refinement rounds. A re-alignment is kept only when
/// it does not lower the sum-of-pairs score; a round with no accepted
/// change stops the refinement early.
MultipleAlignment barton_sternberg(const std::vector<CharSequence>& seqs,
                                   const ScoringScheme& scoring, int refinement_rounds = 2,
                                   int alphabet_size = 0);

/// Flags column c as a match column iff gaps(c) / rows < gap_threshold.
MarkedAlignment mark_match_columns(const MultipleAlignment& msa, double gap_threshold = 0.5);

/// Global profile-to-sequence alignment with column-average scoring:
/// a column scores the frequency-weighted mean of its symbol scores
/// against the sequence symbol, and a gap against a column costs the
/// gap penalty weighted by the column's non-gap fraction. The returned
/// score is scaled by the profile's row count to stay integral; the top
/// row shows each consumed column's majority symbol.
PairwiseAlignment align_sequence_to_profile(const ColumnProfile& profile, const CharSequence& seq,
                                            const ScoringScheme& scoring,
                                            const AlignLimits& limits = {});

/// Sum over columns of all within-column pair scores (gap-gap pairs
/// score zero).
long long sum_of_pairs_score(const MultipleAlignment& msa, const ScoringScheme& scoring,
                             int alphabet_size);

/// One row per line, U+2581 as the gap glyph, control characters shown
/// as visible replacements.
std::string msa_to_text(const MultipleAlignment& msa, const Alphabet& alphabet);

/// Machine-readable form: row ids, gapped ordinal rows, match columns,
/// gap threshold and the alphabet, versioned.
std::string marked_alignment_to_json(const MarkedAlignment& marked, const Alphabet& alphabet);
MarkedAlignment marked_alignment_from_json(std::string_view json_text, Alphabet* alphabet_out);

}  // namespace editio
