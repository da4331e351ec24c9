// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ideal {

// Raw observational states. The model collapses the last three to missing,
// but attendance/abstention summaries need them kept apart.
enum class Vote : std::uint8_t { Yes, No, Abstain, Absent, NotListed };

const char* vote_name(Vote v);

enum class Bloc : std::uint8_t { Coalition, Opposition, Independent, Minority };

const char* bloc_name(Bloc b);
Bloc parse_bloc(const std::string& s);

// Vote-token dictionary, configurable per data source.
struct TokenMap {
    std::map<std::string, Vote> tokens;

    static TokenMap defaults();
    Vote parse(const std::string& token, const std::string& where) const;
};

struct LegislatorMeta {
    std::string id;
    std::string name;
    std::string party;
    Bloc bloc = Bloc::Independent;
    bool attribute_flag = false;
    std::optional<double> anchor;
};

using Roster = std::vector<LegislatorMeta>;

// n legislators (rows) x m vote lists (columns), row-major.
struct VoteMatrix {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<std::string> legislator_ids;
    std::vector<std::string> list_ids;
    std::vector<Vote> cells;

    Vote at(std::size_t i, std::size_t j) const { return cells[i * m + j]; }
    Vote& at(std::size_t i, std::size_t j) { return cells[i * m + j]; }
};

// Binary model view: 1 = Yes, 0 = No, -1 = missing (Abstain/Absent/NotListed).
struct ModelView {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<std::int8_t> y;
    std::size_t n_obs = 0;

    std::int8_t at(std::size_t i, std::size_t j) const { return y[i * m + j]; }
    bool observed(std::size_t i, std::size_t j) const { return at(i, j) >= 0; }

    std::size_t row_observed(std::size_t i) const {
        std::size_t c = 0;
        for (std::size_t j = 0; j < m; ++j)
            if (observed(i, j)) ++c;
        return c;
    }
};

struct FilterResult {
    VoteMatrix matrix;
    Roster roster;
    std::vector<std::string> dropped_ids;
};

// Per-legislator percentages; a ratio with a zero denominator is flagged
// undefined rather than reported as a number.
struct LegislatorStats {
    std::string id;
    double participation_pct = 0.0;
    bool attendance_defined = false;
    double attendance_pct = 0.0;
    bool abstention_defined = false;
    double abstention_pct = 0.0;
};

struct FiveNum {
    std::size_t count = 0;
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

FiveNum five_num(std::vector<double> values);

struct GroupStats {
    std::string group;
    std::size_t members = 0;
    FiveNum participation, attendance, abstention;
};

struct DescriptiveStats {
    std::vector<LegislatorStats> per_legislator;
    std::vector<GroupStats> by_party;
    std::vector<GroupStats> by_bloc;
};

// Five-number aggregates of the per-legislator percentages under an
// arbitrary labelling (party, bloc, attribute flag, ...).
std::vector<GroupStats> group_stats(const std::vector<LegislatorStats>& stats,
                                    const std::vector<std::string>& labels);

// Roster file alone: columns id,name,party,bloc,<attr_col>,anchor.
Roster read_meta_csv(const std::string& meta_path,
                     const std::string& attr_col = "attribute_flag");

std::pair<VoteMatrix, Roster> parse_rollcall(const std::string& votes_path,
                                             const std::string& meta_path,
                                             const TokenMap& tokens = TokenMap::defaults(),
                                             const std::string& attr_col = "attribute_flag");

ModelView encode_for_model(const VoteMatrix& matrix);

FilterResult filter_for_model(const VoteMatrix& matrix, const Roster& roster);

DescriptiveStats descriptive_stats(const VoteMatrix& matrix, const Roster& roster);

void write_votes_csv(const std::string& path, const VoteMatrix& matrix);
void write_meta_csv(const std::string& path, const Roster& roster);

}  // namespace ideal
