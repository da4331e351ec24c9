// Apache License, Version 2.0, refer to LICENSE.txt

#include "ideal/rollcall.hpp"

#include <algorithm>
#include <set>

#include "ideal/csv.hpp"
#include "ideal/errors.hpp"
#include "ideal/mathutil.hpp"

namespace ideal {

const char* vote_name(Vote v) {
    switch (v) {
        case Vote::Yes: return "Yes";
        case Vote::No: return "No";
        case Vote::Abstain: return "Abstain";
        case Vote::Absent: return "Absent";
        case Vote::NotListed: return "NotListed";
    }
    return "?";
}

const char* bloc_name(Bloc b) {
    switch (b) {
        case Bloc::Coalition: return "Coalition";
        case Bloc::Opposition: return "Opposition";
        case Bloc::Independent: return "Independent";
        case Bloc::Minority: return "Minority";
    }
    return "?";
}

Bloc parse_bloc(const std::string& s) {
    if (s == "Coalition") return Bloc::Coalition;
    if (s == "Opposition") return Bloc::Opposition;
    if (s == "Independent") return Bloc::Independent;
    if (s == "Minority") return Bloc::Minority;
    throw ValidationError("unknown bloc label: '" + s + "'");
}

TokenMap TokenMap::defaults() {
    TokenMap t;
    t.tokens = {
        {"SI", Vote::Yes},         {"NO", Vote::No},
        {"ABSTENCION", Vote::Abstain}, {"AUSENTE", Vote::Absent},
        {"NO-LISTADO", Vote::NotListed},
    };
    return t;
}

Vote TokenMap::parse(const std::string& token, const std::string& where) const {
    auto it = tokens.find(token);
    if (it == tokens.end())
        throw ValidationError(where + ": unknown vote token '" + token + "'");
    return it->second;
}

Roster read_meta_csv(const std::string& meta_path, const std::string& attr_col) {
    const Table meta = read_csv(meta_path);
    const int c_id = meta.col("id");
    const int c_name = meta.col("name");
    const int c_party = meta.col("party");
    const int c_bloc = meta.col("bloc");
    const int c_attr = meta.col(attr_col);
    const int c_anchor = meta.col("anchor");
    if (c_id < 0 || c_name < 0 || c_party < 0 || c_bloc < 0 || c_attr < 0 || c_anchor < 0)
        throw ValidationError(meta_path + ": expected columns id,name,party,bloc," +
                              attr_col + ",anchor");

    Roster roster;
    std::set<std::string> seen;
    for (std::size_t r = 0; r < meta.nrow(); ++r) {
        LegislatorMeta lm;
        lm.id = meta.rows[r][c_id];
        if (!seen.insert(lm.id).second)
            throw ValidationError(meta_path + ": duplicate legislator id '" + lm.id + "'");
        lm.name = meta.rows[r][c_name];
        lm.party = meta.rows[r][c_party];
        lm.bloc = parse_bloc(meta.rows[r][c_bloc]);
        const std::string& a = meta.rows[r][c_attr];
        if (a == "0") lm.attribute_flag = false;
        else if (a == "1") lm.attribute_flag = true;
        else throw ValidationError(meta_path + " row " + std::to_string(r + 2) + ": " +
                                   attr_col + " must be 0 or 1, got '" + a + "'");
        const std::string& anc = meta.rows[r][c_anchor];
        if (!anc.empty()) {
            try {
                std::size_t pos = 0;
                lm.anchor = std::stod(anc, &pos);
                if (pos != anc.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ValidationError(meta_path + " row " + std::to_string(r + 2) +
                                      ": bad anchor value '" + anc + "'");
            }
        }
        roster.push_back(std::move(lm));
    }
    return roster;
}

std::pair<VoteMatrix, Roster> parse_rollcall(const std::string& votes_path,
                                             const std::string& meta_path,
                                             const TokenMap& tokens,
                                             const std::string& attr_col) {
    const Table votes = read_csv(votes_path);
    if (votes.ncol() < 2) throw ValidationError(votes_path + ": no vote lists");
    if (votes.nrow() == 0) throw ValidationError(votes_path + ": no legislators");

    std::map<std::string, LegislatorMeta> meta_by_id;
    for (auto& lm : read_meta_csv(meta_path, attr_col)) meta_by_id[lm.id] = lm;

    VoteMatrix vm;
    vm.m = votes.ncol() - 1;
    vm.list_ids.assign(votes.header.begin() + 1, votes.header.end());
    vm.n = votes.nrow();
    vm.cells.reserve(vm.n * vm.m);

    Roster roster;
    std::set<std::string> seen;
    for (std::size_t r = 0; r < votes.nrow(); ++r) {
        const std::string& id = votes.rows[r][0];
        if (!seen.insert(id).second)
            throw ValidationError(votes_path + ": duplicate legislator id '" + id + "'");
        auto mit = meta_by_id.find(id);
        if (mit == meta_by_id.end())
            throw ValidationError(votes_path + " row " + std::to_string(r + 2) +
                                  ": legislator '" + id + "' missing from " + meta_path);
        vm.legislator_ids.push_back(id);
        roster.push_back(mit->second);
        for (std::size_t j = 1; j < votes.ncol(); ++j) {
            const std::string where = votes_path + " row " + std::to_string(r + 2) +
                                      ", column '" + votes.header[j] + "'";
            vm.cells.push_back(tokens.parse(votes.rows[r][j], where));
        }
    }

    std::size_t anchored = 0;
    std::set<double> pins;
    for (const auto& lm : roster)
        if (lm.anchor) {
            ++anchored;
            pins.insert(*lm.anchor);
        }
    if (anchored > 2)
        throw ValidationError(meta_path + ": more than 2 anchored legislators");
    if (anchored == 2 && pins.size() != 2)
        throw ValidationError(meta_path + ": the two anchor values must differ");

    return {std::move(vm), std::move(roster)};
}

ModelView encode_for_model(const VoteMatrix& matrix) {
    ModelView v;
    v.n = matrix.n;
    v.m = matrix.m;
    v.y.resize(matrix.cells.size());
    for (std::size_t k = 0; k < matrix.cells.size(); ++k) {
        switch (matrix.cells[k]) {
            case Vote::Yes: v.y[k] = 1; ++v.n_obs; break;
            case Vote::No: v.y[k] = 0; ++v.n_obs; break;
            default: v.y[k] = -1; break;
        }
    }
    return v;
}

FilterResult filter_for_model(const VoteMatrix& matrix, const Roster& roster) {
    if (roster.size() != matrix.n)
        throw ValidationError("roster size does not match vote matrix rows");
    const ModelView view = encode_for_model(matrix);

    FilterResult out;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < matrix.n; ++i) {
        if (view.row_observed(i) > 0) keep.push_back(i);
        else out.dropped_ids.push_back(matrix.legislator_ids[i]);
    }
    if (keep.size() < 3)
        throw ValidationError("model infeasible: only " + std::to_string(keep.size()) +
                              " legislators with recorded Yes/No votes (need >= 3)");

    out.matrix.n = keep.size();
    out.matrix.m = matrix.m;
    out.matrix.list_ids = matrix.list_ids;
    out.matrix.cells.reserve(keep.size() * matrix.m);
    for (std::size_t i : keep) {
        out.matrix.legislator_ids.push_back(matrix.legislator_ids[i]);
        out.roster.push_back(roster[i]);
        for (std::size_t j = 0; j < matrix.m; ++j)
            out.matrix.cells.push_back(matrix.at(i, j));
    }
    return out;
}

FiveNum five_num(std::vector<double> values) {
    FiveNum f;
    f.count = values.size();
    if (values.empty()) return f;
    std::sort(values.begin(), values.end());
    f.min = values.front();
    f.q1 = quantile_sorted(values, 0.25);
    f.median = quantile_sorted(values, 0.50);
    f.q3 = quantile_sorted(values, 0.75);
    f.max = values.back();
    return f;
}

std::vector<GroupStats> group_stats(const std::vector<LegislatorStats>& stats,
                                    const std::vector<std::string>& groups) {
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < stats.size(); ++i) members[groups[i]].push_back(i);

    std::vector<GroupStats> out;
    for (const auto& [g, idx] : members) {
        GroupStats gs;
        gs.group = g;
        gs.members = idx.size();
        std::vector<double> part, att, abst;
        for (std::size_t i : idx) {
            part.push_back(stats[i].participation_pct);
            if (stats[i].attendance_defined) att.push_back(stats[i].attendance_pct);
            if (stats[i].abstention_defined) abst.push_back(stats[i].abstention_pct);
        }
        gs.participation = five_num(std::move(part));
        gs.attendance = five_num(std::move(att));
        gs.abstention = five_num(std::move(abst));
        out.push_back(std::move(gs));
    }
    return out;
}

DescriptiveStats descriptive_stats(const VoteMatrix& matrix, const Roster& roster) {
    if (roster.size() != matrix.n)
        throw ValidationError("roster size does not match vote matrix rows");
    DescriptiveStats ds;
    const double m = static_cast<double>(matrix.m);
    for (std::size_t i = 0; i < matrix.n; ++i) {
        LegislatorStats ls;
        ls.id = matrix.legislator_ids[i];
        std::size_t listed = 0, present = 0, abstain = 0;
        for (std::size_t j = 0; j < matrix.m; ++j) {
            const Vote v = matrix.at(i, j);
            if (v != Vote::NotListed) ++listed;
            if (v == Vote::Yes || v == Vote::No || v == Vote::Abstain) ++present;
            if (v == Vote::Abstain) ++abstain;
        }
        ls.participation_pct = matrix.m == 0 ? 0.0 : 100.0 * static_cast<double>(listed) / m;
        if (listed > 0) {
            ls.attendance_defined = true;
            ls.attendance_pct = 100.0 * static_cast<double>(present) / static_cast<double>(listed);
        }
        if (present > 0) {
            ls.abstention_defined = true;
            ls.abstention_pct = 100.0 * static_cast<double>(abstain) / static_cast<double>(present);
        }
        ds.per_legislator.push_back(std::move(ls));
    }

    std::vector<std::string> parties, blocs;
    for (const auto& lm : roster) {
        parties.push_back(lm.party);
        blocs.push_back(bloc_name(lm.bloc));
    }
    ds.by_party = group_stats(ds.per_legislator, parties);
    ds.by_bloc = group_stats(ds.per_legislator, blocs);
    return ds;
}

void write_votes_csv(const std::string& path, const VoteMatrix& matrix) {
    CsvWriter w(path);
    std::vector<std::string> head{"id"};
    head.insert(head.end(), matrix.list_ids.begin(), matrix.list_ids.end());
    w.row(head);
    const char* token[] = {"SI", "NO", "ABSTENCION", "AUSENTE", "NO-LISTADO"};
    for (std::size_t i = 0; i < matrix.n; ++i) {
        std::vector<std::string> row{matrix.legislator_ids[i]};
        for (std::size_t j = 0; j < matrix.m; ++j)
            row.push_back(token[static_cast<int>(matrix.at(i, j))]);
        w.row(row);
    }
    w.close();
}

void write_meta_csv(const std::string& path, const Roster& roster) {
    CsvWriter w(path);
    w.row({"id", "name", "party", "bloc", "attribute_flag", "anchor"});
    for (const auto& lm : roster) {
        std::vector<std::string> row{lm.id,
                                     lm.name,
                                     lm.party,
                                     bloc_name(lm.bloc),
                                     lm.attribute_flag ? "1" : "0",
                                     lm.anchor ? fmt_num(*lm.anchor) : ""};
        w.row(row);
    }
    w.close();
}

}  // namespace ideal
