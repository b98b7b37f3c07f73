#pragma once

// Shared global-alignment engine. Scoring is supplied through callables
// so the same code drives symbol-vs-symbol and profile-vs-symbol
// alignment:
//   score(i, j)  — aligning top item i with bottom item j
//   del_cost(i)  — consuming top item i against a gap in the bottom row
//   ins_cost(j)  — consuming bottom item j against a gap in the top row
// Tie order is fixed: substitution, then deletion, then insertion.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace editio::detail {

enum class EditOp : uint8_t { Sub = 0, Del = 1, Ins = 2 };

// One 2-bit direction per DP cell; 17k x 17k fits in ~75 MB.
class PackedTrace {
public:
    PackedTrace(size_t rows, size_t cols)
        : cols_(cols), bytes_((rows * cols + 3) / 4, 0) {}

    void set(size_t i, size_t j, EditOp op) {
        const size_t cell = i * cols_ + j;
        const size_t shift = (cell & 3) * 2;
        uint8_t& b = bytes_[cell >> 2];
        b = static_cast<uint8_t>((b & ~(3u << shift)) | (static_cast<unsigned>(op) << shift));
    }

    EditOp get(size_t i, size_t j) const {
        const size_t cell = i * cols_ + j;
        return static_cast<EditOp>((bytes_[cell >> 2] >> ((cell & 3) * 2)) & 3u);
    }

private:
    size_t cols_;
    std::vector<uint8_t> bytes_;
};

template <class Score, class DelCost, class InsCost>
std::vector<EditOp> nw_full(size_t n, size_t m, const Score& score, const DelCost& del_cost,
                            const InsCost& ins_cost) {
    PackedTrace trace(n + 1, m + 1);
    std::vector<long long> prev(m + 1), cur(m + 1);
    prev[0] = 0;
    for (size_t j = 1; j <= m; ++j) {
        prev[j] = prev[j - 1] + ins_cost(j - 1);
        trace.set(0, j, EditOp::Ins);
    }
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = prev[0] + del_cost(i - 1);
        trace.set(i, 0, EditOp::Del);
        for (size_t j = 1; j <= m; ++j) {
            const long long diag = prev[j - 1] + score(i - 1, j - 1);
            const long long up = prev[j] + del_cost(i - 1);
            const long long left = cur[j - 1] + ins_cost(j - 1);
            long long best = diag;
            EditOp op = EditOp::Sub;
            if (up > best) {
                best = up;
                op = EditOp::Del;
            }
            if (left > best) {
                best = left;
                op = EditOp::Ins;
            }
            cur[j] = best;
            trace.set(i, j, op);
        }
        std::swap(prev, cur);
    }

    std::vector<EditOp> ops;
    ops.reserve(n + m);
    size_t i = n, j = m;
    while (i > 0 || j > 0) {
        const EditOp op = trace.get(i, j);
        ops.push_back(op);
        if (op == EditOp::Sub) {
            --i;
            --j;
        } else if (op == EditOp::Del) {
            --i;
        } else {
            --j;
        }
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

// Last DP row of aligning top[a0..a1) with bottom[b0..b1); row[j] is the
// best score using the first j bottom items.
template <class Score, class DelCost, class InsCost>
void nw_score_row(size_t a0, size_t a1, size_t b0, size_t b1, const Score& score,
                  const DelCost& del_cost, const InsCost& ins_cost,
                  std::vector<long long>& row) {
    const size_t m = b1 - b0;
    row.assign(m + 1, 0);
    for (size_t j = 1; j <= m; ++j) row[j] = row[j - 1] + ins_cost(b0 + j - 1);
    std::vector<long long> next(m + 1);
    for (size_t i = a0 + 1; i <= a1; ++i) {
        next[0] = row[0] + del_cost(i - 1);
        for (size_t j = 1; j <= m; ++j) {
            const long long diag = row[j - 1] + score(i - 1, b0 + j - 1);
            const long long up = row[j] + del_cost(i - 1);
            const long long left = next[j - 1] + ins_cost(b0 + j - 1);
            next[j] = std::max({diag, up, left});
        }
        std::swap(row, next);
    }
}

// Mirror image of nw_score_row: row[j] is the best score of aligning
// top[a0..a1) with bottom[b1-j..b1).
template <class Score, class DelCost, class InsCost>
void nw_score_row_rev(size_t a0, size_t a1, size_t b0, size_t b1, const Score& score,
                      const DelCost& del_cost, const InsCost& ins_cost,
                      std::vector<long long>& row) {
    const size_t m = b1 - b0;
    row.assign(m + 1, 0);
    for (size_t j = 1; j <= m; ++j) row[j] = row[j - 1] + ins_cost(b1 - j);
    std::vector<long long> next(m + 1);
    for (size_t ii = 1; ii <= a1 - a0; ++ii) {
        const size_t i = a1 - ii;  // consuming top item i
        next[0] = row[0] + del_cost(i);
        for (size_t j = 1; j <= m; ++j) {
            const long long diag = row[j - 1] + score(i, b1 - j);
            const long long up = row[j] + del_cost(i);
            const long long left = next[j - 1] + ins_cost(b1 - j);
            next[j] = std::max({diag, up, left});
        }
        std::swap(row, next);
    }
}

inline constexpr size_t kHirschbergBaseCells = size_t{1} << 22;

template <class Score, class DelCost, class InsCost>
void hirschberg_rec(size_t a0, size_t a1, size_t b0, size_t b1, const Score& score,
                    const DelCost& del_cost, const InsCost& ins_cost,
                    std::vector<EditOp>& out) {
    const size_t n = a1 - a0;
    const size_t m = b1 - b0;
    if (n == 0) {
        out.insert(out.end(), m, EditOp::Ins);
        return;
    }
    if (m == 0) {
        out.insert(out.end(), n, EditOp::Del);
        return;
    }
    if (n <= 2 || (n + 1) * (m + 1) <= kHirschbergBaseCells) {
        auto sub_score = [&](size_t i, size_t j) { return score(a0 + i, b0 + j); };
        auto sub_del = [&](size_t i) { return del_cost(a0 + i); };
        auto sub_ins = [&](size_t j) { return ins_cost(b0 + j); };
        auto ops = nw_full(n, m, sub_score, sub_del, sub_ins);
        out.insert(out.end(), ops.begin(), ops.end());
        return;
    }

    const size_t amid = a0 + n / 2;
    std::vector<long long> left, right;
    nw_score_row(a0, amid, b0, b1, score, del_cost, ins_cost, left);
    nw_score_row_rev(amid, a1, b0, b1, score, del_cost, ins_cost, right);

    size_t best_j = 0;
    long long best = left[0] + right[m];
    for (size_t j = 1; j <= m; ++j) {
        const long long total = left[j] + right[m - j];
        if (total > best) {
            best = total;
            best_j = j;
        }
    }

    hirschberg_rec(a0, amid, b0, b0 + best_j, score, del_cost, ins_cost, out);
    hirschberg_rec(amid, a1, b0 + best_j, b1, score, del_cost, ins_cost, out);
}

template <class Score, class DelCost, class InsCost>
std::pair<long long, std::vector<EditOp>> nw_align(size_t n, size_t m, const Score& score,
                                                   const DelCost& del_cost,
                                                   const InsCost& ins_cost,
                                                   size_t full_matrix_max) {
    std::vector<EditOp> ops;
    if (n <= full_matrix_max && m <= full_matrix_max) {
        ops = nw_full(n, m, score, del_cost, ins_cost);
    } else {
        ops.reserve(n + m);
        hirschberg_rec(0, n, 0, m, score, del_cost, ins_cost, ops);
    }

    long long total = 0;
    size_t i = 0, j = 0;
    for (const EditOp op : ops) {
        if (op == EditOp::Sub) {
            total += score(i, j);
            ++i;
            ++j;
        } else if (op == EditOp::Del) {
            total += del_cost(i);
            ++i;
        } else {
            total += ins_cost(j);
            ++j;
        }
    }
    return {total, std::move(ops)};
}

}  // namespace editio::detail
