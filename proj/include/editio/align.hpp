#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "editio/text.hpp"

namespace editio {

/// Gap marker inside alignment rows. Never a valid alphabet ordinal.
inline constexpr int32_t kGapSymbol = -1;

/// Linear gap penalty: every gap column costs gap once.
struct ScoringScheme {
    int match = 1;
    int mismatch = -1;
    int gap = -1;

    void validate() const;
};

/// Two gapped rows over a shared column axis. No column is (gap, gap);
/// de-gapping a row reproduces its input sequence.
struct PairwiseAlignment {
    std::vector<int32_t> top;
    std::vector<int32_t> bottom;
    long long score = 0;
    std::string top_id;
    std::string bottom_id;

    size_t columns() const { return top.size(); }
};

struct IdentityStats {
    size_t matches = 0;
    size_t alignment_length = 0;
    double identity = 0.0;
};

struct AlignLimits {
    /// Longest sequence still aligned with a full traceback matrix;
    /// longer inputs switch to the linear-memory divide-and-conquer
    /// variant.
    size_t full_matrix_max = 32768;
};

/// Optimal global alignment under the scoring scheme. Traceback ties
/// prefer diagonal, then a gap in the bottom row, then a gap in the top
/// row, so results are reproducible bit-for-bit.
PairwiseAlignment needleman_wunsch(const CharSequence& a, const CharSequence& b,
                                   const ScoringScheme& scoring, const AlignLimits& limits = {});

/// matches / columns; a gap never equals anything. The empty alignment
/// has identity 1 by convention (two empty sequences are identical).
IdentityStats sequence_identity(const PairwiseAlignment& alignment);

/// Interleaved wrapped rendering. Gaps print as U+2591; C0 control
/// characters print as their Control Pictures glyphs (U+2400 block) and
/// other non-printables as U+FFFD, so a line feed never breaks a row.
std::string render_alignment(const PairwiseAlignment& alignment, const Alphabet& alphabet,
                             size_t width = 80);

/// {"ids": [...], "identity": [[...]]} with fractions.
std::string identity_matrix_json(const std::vector<std::string>& ids,
                                 const std::vector<std::vector<double>>& identity);

/// All-pairs identity matrix (diagonal 1.0), computed with a few
/// alignments in flight at a time.
std::vector<std::vector<double>> identity_matrix(const std::vector<CharSequence>& seqs,
                                                 const ScoringScheme& scoring,
                                                 const AlignLimits& limits = {});

}  // namespace editio
