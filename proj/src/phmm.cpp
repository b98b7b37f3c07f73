#include "editio/phmm.hpp"

#include <cmath>
#include <sstream>

#include "editio/errors.hpp"
#include "json.hpp"

namespace editio {

namespace {

constexpr std::string_view kModelFormat = "editio-phmm-v1";

struct Visit {
    enum class Kind { Match, Insert, Delete } kind;
    int k;
    int32_t ordinal;  // -1 for silent visits
};

// The implied state walk of one alignment row. Insert visits carry the
// index of the preceding match column.
std::vector<Visit> row_state_walk(const MarkedAlignment& marked, size_t row) {
    const auto& cells = marked.alignment.rows[row];
    std::vector<bool> is_match(marked.alignment.columns(), false);
    for (size_t c : marked.match_columns) is_match[c] = true;

    std::vector<Visit> walk;
    walk.reserve(cells.size());
    int seen = 0;
    for (size_t c = 0; c < cells.size(); ++c) {
        if (is_match[c]) {
            ++seen;
            if (cells[c] != kGapSymbol) {
                walk.push_back({Visit::Kind::Match, seen, cells[c]});
            } else {
                walk.push_back({Visit::Kind::Delete, seen, -1});
            }
        } else if (cells[c] != kGapSymbol) {
            walk.push_back({Visit::Kind::Insert, seen, cells[c]});
        }
    }
    return walk;
}

// Plan-7 has no insert<->delete arcs. Where a row's walk needs one, the
// inserted symbol is folded into the adjacent match column instead; the
// doctored walk emits the same sequence.
std::vector<Visit> plan7_doctor(std::vector<Visit> walk) {
    std::vector<Visit> fixed;
    fixed.reserve(walk.size());
    for (const Visit& v : walk) {
        if (!fixed.empty()) {
            const Visit& top = fixed.back();
            if (top.kind == Visit::Kind::Delete && v.kind == Visit::Kind::Insert &&
                v.k == top.k) {
                const int k = top.k;
                fixed.pop_back();
                fixed.push_back({Visit::Kind::Match, k, v.ordinal});
                continue;
            }
            if (top.kind == Visit::Kind::Insert && v.kind == Visit::Kind::Delete &&
                v.k == top.k + 1) {
                const int32_t ordinal = top.ordinal;
                fixed.pop_back();
                fixed.push_back({Visit::Kind::Match, v.k, ordinal});
                continue;
            }
        }
        fixed.push_back(v);
    }
    return fixed;
}

std::vector<double> normalized_log_row(const std::vector<double>& counts, double pseudocount) {
    const size_t n = counts.size();
    double total = 0.0;
    for (double c : counts) total += c;
    total += pseudocount * static_cast<double>(n);
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = std::log((counts[i] + pseudocount) / total);
    return out;
}

nlohmann::json encode_log_array(const std::vector<double>& values) {
    nlohmann::json arr = nlohmann::json::array();
    for (double v : values) {
        if (std::isinf(v) && v < 0) {
            arr.push_back(nullptr);
        } else {
            arr.push_back(v);
        }
    }
    return arr;
}

std::vector<double> decode_log_array(const nlohmann::json& arr) {
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) out.push_back(v.is_null() ? kLogZero : v.get<double>());
    return out;
}

}  // namespace

void PseudocountConfig::validate() const {
    if (!(emission > 0.0) || !(transition > 0.0)) {
        throw ConfigError("pseudocounts must be positive");
    }
}

std::vector<Arc> ProfileHmm::allowed_match_arcs(int k, int model_length) {
    if (k == model_length) return {kArcMM, kArcMI};  // m_M -> e, m_M -> i_M
    return {kArcMM, kArcMI, kArcMD};
}

std::vector<Arc> ProfileHmm::allowed_insert_arcs(int /*k*/, int /*model_length*/) {
    return {kArcIM, kArcII};
}

std::vector<Arc> ProfileHmm::allowed_delete_arcs(int k, int model_length) {
    if (k == 0) return {};  // there is no d_0
    if (k == model_length) return {kArcDM};  // d_M -> e
    return {kArcDM, kArcDD};
}

ProfileHmm build_model(const MarkedAlignment& marked, const Alphabet& alphabet,
                       const PseudocountConfig& pseudo) {
    pseudo.validate();
    if (marked.match_columns.empty()) {
        throw UsageError("cannot build a model from an alignment with zero match columns");
    }
    const int M = static_cast<int>(marked.match_columns.size());
    const size_t S = static_cast<size_t>(alphabet.size());

    std::vector<std::vector<double>> match_counts(static_cast<size_t>(M),
                                                  std::vector<double>(S, 0.0));
    std::vector<std::vector<double>> insert_counts(static_cast<size_t>(M) + 1,
                                                   std::vector<double>(S, 0.0));
    std::vector<std::array<double, kArcCount>> arc_counts(static_cast<size_t>(M) + 1);
    for (auto& row : arc_counts) row.fill(0.0);

    for (size_t r = 0; r < marked.alignment.row_count(); ++r) {
        const auto walk = plan7_doctor(row_state_walk(marked, r));

        // Begin behaves as a match visit at position 0.
        Visit prev{Visit::Kind::Match, 0, -1};
        for (const Visit& v : walk) {
            switch (prev.kind) {
                case Visit::Kind::Match:
                    arc_counts[static_cast<size_t>(prev.k)]
                              [v.kind == Visit::Kind::Match    ? kArcMM
                               : v.kind == Visit::Kind::Insert ? kArcMI
                                                               : kArcMD] += 1.0;
                    break;
                case Visit::Kind::Insert:
                    arc_counts[static_cast<size_t>(prev.k)]
                              [v.kind == Visit::Kind::Match ? kArcIM : kArcII] += 1.0;
                    break;
                case Visit::Kind::Delete:
                    arc_counts[static_cast<size_t>(prev.k)]
                              [v.kind == Visit::Kind::Match ? kArcDM : kArcDD] += 1.0;
                    break;
            }
            if (v.kind == Visit::Kind::Match) {
                match_counts[static_cast<size_t>(v.k - 1)][static_cast<size_t>(v.ordinal)] += 1.0;
            } else if (v.kind == Visit::Kind::Insert) {
                insert_counts[static_cast<size_t>(v.k)][static_cast<size_t>(v.ordinal)] += 1.0;
            }
            prev = v;
        }
        // Arc into the end state; only position M can reach it.
        arc_counts[static_cast<size_t>(M)][prev.kind == Visit::Kind::Match    ? kArcMM
                                           : prev.kind == Visit::Kind::Insert ? kArcIM
                                                                              : kArcDM] += 1.0;
    }

    ProfileHmm model;
    model.alphabet = alphabet;
    model.model_length = M;
    model.match_emissions.reserve(static_cast<size_t>(M));
    for (const auto& counts : match_counts) {
        model.match_emissions.push_back(normalized_log_row(counts, pseudo.emission));
    }
    model.insert_emissions.reserve(static_cast<size_t>(M) + 1);
    for (const auto& counts : insert_counts) {
        model.insert_emissions.push_back(normalized_log_row(counts, pseudo.emission));
    }

    model.transitions.assign(static_cast<size_t>(M) + 1, {});
    for (int k = 0; k <= M; ++k) {
        auto& row = model.transitions[static_cast<size_t>(k)];
        row.fill(kLogZero);
        for (const auto& arcs : {ProfileHmm::allowed_match_arcs(k, M),
                                 ProfileHmm::allowed_insert_arcs(k, M),
                                 ProfileHmm::allowed_delete_arcs(k, M)}) {
            if (arcs.empty()) continue;
            double total = 0.0;
            for (Arc a : arcs) total += arc_counts[static_cast<size_t>(k)][a];
            total += pseudo.transition * static_cast<double>(arcs.size());
            for (Arc a : arcs) {
                row[a] = std::log((arc_counts[static_cast<size_t>(k)][a] + pseudo.transition) /
                                  total);
            }
        }
    }
    return model;
}

std::string ModelViolation::to_string() const {
    std::ostringstream ss;
    ss << where << ": " << detail;
    if (residual != 0.0) ss << " (residual " << residual << ")";
    return ss.str();
}

namespace {

double log_row_mass(const std::vector<double>& row) {
    double total = 0.0;
    for (double v : row) total += std::exp(v);
    return total;
}

void check_distribution(const std::string& where, double mass,
                        std::vector<ModelViolation>& out) {
    const double residual = mass - 1.0;
    if (std::abs(residual) > 1e-9) {
        out.push_back({where, "probabilities sum to " + std::to_string(mass) + ", expected 1",
                       residual});
    }
}

}  // namespace

std::vector<ModelViolation> validate_model(const ProfileHmm& model) {
    std::vector<ModelViolation> violations;
    const int M = model.model_length;
    const size_t S = static_cast<size_t>(model.alphabet.size());

    if (M < 1) {
        violations.push_back({"model", "model_length must be >= 1", 0.0});
        return violations;
    }
    if (model.match_emissions.size() != static_cast<size_t>(M) ||
        model.insert_emissions.size() != static_cast<size_t>(M) + 1 ||
        model.transitions.size() != static_cast<size_t>(M) + 1) {
        violations.push_back({"model", "parameter table sizes do not match model_length", 0.0});
        return violations;
    }

    for (int k = 1; k <= M; ++k) {
        const auto& row = model.match_emissions[static_cast<size_t>(k - 1)];
        if (row.size() != S) {
            violations.push_back({"match_emissions[" + std::to_string(k) + "]",
                                  "row width does not match alphabet size", 0.0});
            continue;
        }
        check_distribution("match_emissions[" + std::to_string(k) + "]", log_row_mass(row),
                           violations);
    }
    for (int k = 0; k <= M; ++k) {
        const auto& row = model.insert_emissions[static_cast<size_t>(k)];
        if (row.size() != S) {
            violations.push_back({"insert_emissions[" + std::to_string(k) + "]",
                                  "row width does not match alphabet size", 0.0});
            continue;
        }
        check_distribution("insert_emissions[" + std::to_string(k) + "]", log_row_mass(row),
                           violations);
    }

    for (int k = 0; k <= M; ++k) {
        const auto& row = model.transitions[static_cast<size_t>(k)];
        if (row[kArcID] != kLogZero) {
            violations.push_back({"i_" + std::to_string(k) + " transitions",
                                  "forbidden insert->delete arc carries probability", 0.0});
        }
        if (row[kArcDI] != kLogZero) {
            violations.push_back({"d_" + std::to_string(k) + " transitions",
                                  "forbidden delete->insert arc carries probability", 0.0});
        }

        struct Group {
            const char* name;
            std::vector<Arc> arcs;
            std::vector<Arc> absent;
        };
        const auto match_arcs = ProfileHmm::allowed_match_arcs(k, M);
        const auto insert_arcs = ProfileHmm::allowed_insert_arcs(k, M);
        const auto delete_arcs = ProfileHmm::allowed_delete_arcs(k, M);
        const std::vector<Group> groups = {
            {"m", match_arcs, k == M ? std::vector<Arc>{kArcMD} : std::vector<Arc>{}},
            {"i", insert_arcs, {}},
            {"d", delete_arcs,
             k == 0   ? std::vector<Arc>{kArcDM, kArcDD}
             : k == M ? std::vector<Arc>{kArcDD}
                      : std::vector<Arc>{}},
        };
        for (const auto& group : groups) {
            const std::string where =
                std::string(group.name) + "_" + std::to_string(k) + " transitions";
            for (Arc a : group.absent) {
                if (row[a] != kLogZero) {
                    violations.push_back(
                        {where, "structurally absent arc carries probability", 0.0});
                }
            }
            if (group.arcs.empty()) continue;
            double mass = 0.0;
            for (Arc a : group.arcs) mass += std::exp(row[a]);
            check_distribution(where, mass, violations);
        }
    }
    return violations;
}

std::string model_to_json_string(const ProfileHmm& model) {
    nlohmann::json j;
    j["format"] = kModelFormat;
    j["alphabet"] = nlohmann::json::parse(model.alphabet.to_json_string());
    j["model_length"] = model.model_length;

    nlohmann::json match_rows = nlohmann::json::array();
    for (const auto& row : model.match_emissions) match_rows.push_back(encode_log_array(row));
    j["log_match_emissions"] = std::move(match_rows);

    nlohmann::json insert_rows = nlohmann::json::array();
    for (const auto& row : model.insert_emissions) insert_rows.push_back(encode_log_array(row));
    j["log_insert_emissions"] = std::move(insert_rows);

    // The file format has no slot for the forbidden insert<->delete arcs.
    static constexpr std::pair<const char*, Arc> kNamedArcs[] = {
        {"mm", kArcMM}, {"mi", kArcMI}, {"md", kArcMD}, {"im", kArcIM},
        {"ii", kArcII}, {"dm", kArcDM}, {"dd", kArcDD},
    };
    nlohmann::json trans;
    for (const auto& [name, arc] : kNamedArcs) {
        std::vector<double> column;
        column.reserve(model.transitions.size());
        for (const auto& row : model.transitions) column.push_back(row[arc]);
        trans[name] = encode_log_array(column);
    }
    j["log_transitions"] = std::move(trans);
    return j.dump(2) + "\n";
}

ProfileHmm model_from_json_string(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what());
    }
    const auto format = j.value("format", std::string{});
    if (format != kModelFormat) {
        throw ParseError("unsupported model format: found \"" + format + "\", expected \"" +
                         std::string(kModelFormat) + "\"");
    }

    ProfileHmm model;
    model.alphabet = Alphabet::from_json_string(j.at("alphabet").dump());
    model.model_length = j.at("model_length").get<int>();
    if (model.model_length < 1) throw ParseError("model_length must be >= 1");
    const size_t M = static_cast<size_t>(model.model_length);
    const size_t S = static_cast<size_t>(model.alphabet.size());

    for (const auto& row : j.at("log_match_emissions")) {
        model.match_emissions.push_back(decode_log_array(row));
    }
    for (const auto& row : j.at("log_insert_emissions")) {
        model.insert_emissions.push_back(decode_log_array(row));
    }
    if (model.match_emissions.size() != M || model.insert_emissions.size() != M + 1) {
        throw ParseError("emission table row counts do not match model_length");
    }
    for (const auto& row : model.match_emissions) {
        if (row.size() != S) {
            throw ParseError("alphabet size " + std::to_string(S) +
                             " does not match match-emission row width " +
                             std::to_string(row.size()));
        }
    }
    for (const auto& row : model.insert_emissions) {
        if (row.size() != S) {
            throw ParseError("alphabet size " + std::to_string(S) +
                             " does not match insert-emission row width " +
                             std::to_string(row.size()));
        }
    }

    static constexpr std::pair<const char*, Arc> kNamedArcs[] = {
        {"mm", kArcMM}, {"mi", kArcMI}, {"md", kArcMD}, {"im", kArcIM},
        {"ii", kArcII}, {"dm", kArcDM}, {"dd", kArcDD},
    };
    model.transitions.assign(M + 1, {});
    for (auto& row : model.transitions) row.fill(kLogZero);
    const auto& trans = j.at("log_transitions");
    for (const auto& [name, arc] : kNamedArcs) {
        const auto column = decode_log_array(trans.at(name));
        if (column.size() != M + 1) {
            throw ParseError(std::string("transition array \"") + name +
                             "\" does not have model_length + 1 entries");
        }
        for (size_t k = 0; k <= M; ++k) model.transitions[k][arc] = column[k];
    }
    return model;
}

void save_model(const ProfileHmm& model, const std::filesystem::path& path) {
    write_text_file(path, model_to_json_string(model));
}

ProfileHmm load_model(const std::filesystem::path& path) {
    try {
        return model_from_json_string(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace editio
