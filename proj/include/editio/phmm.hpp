#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "editio/msa.hpp"
#include "editio/text.hpp"

namespace editio {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

/// Transition arcs out of position k. Position 0 holds the begin state
/// (b plays the role of m0) and i0; "m" arcs at position M lead to the
/// end state. The id/di slots exist only so that a violation of the
/// architecture is representable; they are log-zero in any valid model.
enum Arc : int {
    kArcMM = 0,  // m_k -> m_{k+1} (k=0: b -> m1; k=M: m_M -> e)
    kArcMI = 1,  // m_k -> i_k     (k=0: b -> i0)
    kArcMD = 2,  // m_k -> d_{k+1} (k=0: b -> d1; absent at k=M)
    kArcIM = 3,  // i_k -> m_{k+1} (k=M: i_M -> e)
    kArcII = 4,  // i_k -> i_k
    kArcID = 5,  // forbidden (insert -> delete)
    kArcDM = 6,  // d_k -> m_{k+1} (k=M: d_M -> e; absent at k=0)
    kArcDD = 7,  // d_k -> d_{k+1} (absent at k=0 and k=M)
    kArcDI = 8,  // forbidden (delete -> insert)
};
inline constexpr int kArcCount = 9;

/// Additive prior counts applied when estimating distributions from a
/// marked alignment (and re-applied in every Baum-Welch M-step).
struct PseudocountConfig {
    double emission = 1.0;
    double transition = 1.0;

    void validate() const;
};

/// Plan-7 profile HMM over an Alphabet, stored in natural-log space.
///
/// match_emissions[k-1] holds e_{m_k} for k = 1..M; insert_emissions[k]
/// holds e_{i_k} for k = 0..M; transitions[k] holds the arcs leaving
/// position k as defined by Arc.
struct ProfileHmm {
    Alphabet alphabet;
    int model_length = 0;  // M
    std::vector<std::vector<double>> match_emissions;
    std::vector<std::vector<double>> insert_emissions;
    std::vector<std::array<double, kArcCount>> transitions;

    double arc(int k, Arc a) const { return transitions[static_cast<size_t>(k)][a]; }
    double match_emission(int k, int32_t ordinal) const {
        return match_emissions[static_cast<size_t>(k - 1)][static_cast<size_t>(ordinal)];
    }
    double insert_emission(int k, int32_t ordinal) const {
        return insert_emissions[static_cast<size_t>(k)][static_cast<size_t>(ordinal)];
    }

    /// Arcs that may carry probability out of position k, per source
    /// state. Slots not listed must be log-zero.
    static std::vector<Arc> allowed_match_arcs(int k, int model_length);
    static std::vector<Arc> allowed_insert_arcs(int k, int model_length);
    static std::vector<Arc> allowed_delete_arcs(int k, int model_length);
};

struct ModelViolation {
    std::string where;   // state or row, e.g. "match_emissions[3]" or "m_2 transitions"
    std::string detail;  // what is wrong
    double residual = 0.0;

    std::string to_string() const;
};

/// Estimates a model from a marked alignment: one match state per match
/// column, one insert state per inter-match region, add-pseudocount
/// emission and transition distributions from the observed state walks.
/// Walks that a Plan-7 model cannot represent (delete next to insert)
/// fold the inserted symbol into the adjacent match column, following
/// standard profile-HMM practice.
ProfileHmm build_model(const MarkedAlignment& marked, const Alphabet& alphabet,
                       const PseudocountConfig& pseudo = {});

/// Empty iff every distribution normalizes and no forbidden arc carries
/// probability.
std::vector<ModelViolation> validate_model(const ProfileHmm& model);

/// Versioned JSON container; log-probabilities as 64-bit floats with
/// exact round-trip, log-zero stored as null.
void save_model(const ProfileHmm& model, const std::filesystem::path& path);
ProfileHmm load_model(const std::filesystem::path& path);

std::string model_to_json_string(const ProfileHmm& model);
ProfileHmm model_from_json_string(std::string_view json_text);

}  // namespace editio
