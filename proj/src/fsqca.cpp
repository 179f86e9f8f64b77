#include "trendlink/fsqca.hpp"

#include "trendlink/csv.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace trendlink::fsqca {

namespace {

double row_membership(const Case& c, std::uint32_t configuration) {
    double m = 1.0;
    for (std::size_t i = 0; i < c.conditions.size(); ++i) {
        const bool present = (configuration >> i) & 1U;
        m = std::min(m, present ? c.conditions[i] : 1.0 - c.conditions[i]);
    }
    return m;
}

double term_membership(const Case& c, const qmc::Implicant& t) {
    double m = 1.0;
    for (std::size_t i = 0; i < c.conditions.size(); ++i) {
        const std::uint32_t b = 1U << i;
        if (t.mask & b) continue;
        m = std::min(m, (t.value & b) ? c.conditions[i] : 1.0 - c.conditions[i]);
    }
    return m;
}

double sum_outcome(const CaseSet& cases, Outcome o) {
    double s = 0.0;
    for (const auto& c : cases.cases) s += c.outcome(o);
    return s;
}

// Raw coverage of the disjunction of `terms` (Σ min(max_t, y) / Σ y).
double coverage_of(const std::vector<qmc::Implicant>& terms, const CaseSet& cases, Outcome o,
                   double sum_y) {
    if (terms.empty() || sum_y <= 0.0) return 0.0;
    double num = 0.0;
    for (const auto& c : cases.cases) {
        double s = 0.0;
        for (const auto& t : terms) s = std::max(s, term_membership(c, t));
        num += std::min(s, c.outcome(o));
    }
    return num / sum_y;
}

std::string solution_label(Outcome o, std::size_t i, std::size_t count) {
    const std::string base = o == Outcome::High ? "HIGH" : "LOW";
    return count == 1 ? base : fmt::format("{}{}", base, i + 1);
}

std::string opt_num(const std::optional<double>& v) {
    return v ? csv::format_fixed(*v, 4) : std::string("undefined");
}

}  // namespace

void CalibrationAnchors::validate() const {
    if (!(full_non_membership < crossover && crossover < full_membership))
        throw InputError(fmt::format("calibration anchors must satisfy non-membership < crossover "
                                     "< membership, got {}, {}, {}",
                                     full_non_membership, crossover, full_membership));
}

double calibrate_direct(double score, const CalibrationAnchors& a) {
    a.validate();
    const double log_odds = score >= a.crossover
                                ? 3.0 * (score - a.crossover) / (a.full_membership - a.crossover)
                                : 3.0 * (score - a.crossover) / (a.crossover - a.full_non_membership);
    return 1.0 / (1.0 + std::exp(-log_odds));
}

double negate(double membership) {
    if (!(membership >= 0.0 && membership <= 1.0))
        throw InputError(fmt::format("membership must lie in [0, 1], got {}", membership));
    return 1.0 - membership;
}

std::string to_string(Outcome o) { return o == Outcome::High ? "high" : "low"; }

CaseSet build_cases(const std::vector<CorrelationResult>& results,
                    const portfolio::FeatureMap& features, const CalibrationAnchors& anchors) {
    CaseSet set;
    set.condition_names = kConditionNames;
    for (const auto& r : results) {
        const auto it = features.find(r.company_id);
        if (it == features.end())
            throw InputError(fmt::format("no company features for '{}'", r.company_id));
        const auto& f = it->second;
        Case c;
        c.id = r.company_id;
        c.conditions = {f.is_b2c ? 1.0 : 0.0, f.is_platform ? 1.0 : 0.0,
                        f.is_unicorn ? 1.0 : 0.0};
        c.outcome_high = calibrate_direct(r.tau_best, anchors);
        c.outcome_low = negate(c.outcome_high);
        set.cases.push_back(std::move(c));
    }
    return set;
}

std::vector<NecessityRow> necessity_analysis(const CaseSet& cases, Outcome outcome,
                                             const NecessityThresholds& thresholds) {
    if (cases.cases.empty()) throw InputError("necessity analysis needs at least one case");
    const double sum_y = sum_outcome(cases, outcome);
    if (!(sum_y > 0.0)) throw InputError("empty outcome set");

    std::vector<NecessityRow> rows;
    for (std::size_t i = 0; i < cases.condition_names.size(); ++i) {
        for (bool negated : {false, true}) {
            double sum_x = 0.0, sum_min = 0.0, sum_not_x = 0.0, sum_not_min = 0.0;
            for (const auto& c : cases.cases) {
                const double x = negated ? 1.0 - c.conditions[i] : c.conditions[i];
                const double m = std::min(x, c.outcome(outcome));
                sum_x += x;
                sum_min += m;
                sum_not_x += 1.0 - x;
                sum_not_min += 1.0 - m;
            }
            NecessityRow row;
            row.condition = (negated ? "~" : "") + cases.condition_names[i];
            row.consistency = sum_min / sum_y;
            if (sum_x > 0.0) row.coverage = sum_min / sum_x;
            // A condition present in every case is trivially necessary: relevance 0.
            row.relevance = sum_not_x > 0.0 ? sum_not_x / sum_not_min : 0.0;
            row.necessary =
                row.consistency >= thresholds.consistency && row.relevance >= thresholds.relevance;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<TruthTableRow> build_truth_table(const CaseSet& cases, Outcome outcome,
                                             const SufficiencyThresholds& thresholds) {
    const auto k = cases.condition_names.size();
    if (k == 0 || k > static_cast<std::size_t>(qmc::kMaxVariables))
        throw InputError(fmt::format("truth table needs 1..{} conditions, got {}",
                                     qmc::kMaxVariables, k));
    std::vector<TruthTableRow> rows(std::size_t{1} << k);
    for (std::uint32_t cfg = 0; cfg < rows.size(); ++cfg) {
        auto& row = rows[cfg];
        row.configuration = cfg;
        double sum_m = 0.0, sum_min = 0.0;
        for (const auto& c : cases.cases) {
            const double m = row_membership(c, cfg);
            sum_m += m;
            sum_min += std::min(m, c.outcome(outcome));
            if (m > 0.5) {
                ++row.case_count;
                row.case_ids.push_back(c.id);
            }
        }
        if (sum_m > 0.0) row.consistency = sum_min / sum_m;
        row.included = row.case_count >= thresholds.frequency && row.consistency &&
                       *row.consistency >= thresholds.consistency;
    }
    return rows;
}

qmc::Cover minimize_configurations(const std::vector<TruthTableRow>& table, int k) {
    std::set<std::uint32_t> minterms;
    for (const auto& row : table)
        if (row.included) minterms.insert(row.configuration);
    return qmc::minimize(minterms, k);
}

Solution solution_metrics(const std::vector<qmc::Implicant>& terms, const CaseSet& cases,
                          Outcome outcome) {
    if (terms.empty()) throw InputError("solution metrics need at least one term");
    const double sum_y = sum_outcome(cases, outcome);
    Solution sol;
    const double total_raw = coverage_of(terms, cases, outcome, sum_y);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        TermMetrics tm;
        tm.term = terms[i];
        tm.label = qmc::render(terms[i], cases.condition_names);
        double sum_t = 0.0, sum_min = 0.0;
        for (const auto& c : cases.cases) {
            const double t = term_membership(c, terms[i]);
            sum_t += t;
            sum_min += std::min(t, c.outcome(outcome));
        }
        if (sum_t > 0.0) tm.consistency = sum_min / sum_t;
        tm.raw_coverage = sum_y > 0.0 ? sum_min / sum_y : 0.0;
        std::vector<qmc::Implicant> others;
        for (std::size_t j = 0; j < terms.size(); ++j)
            if (j != i) others.push_back(terms[j]);
        tm.unique_coverage = std::max(0.0, total_raw - coverage_of(others, cases, outcome, sum_y));
        sol.terms.push_back(std::move(tm));
    }
    double sum_s = 0.0, sum_min = 0.0;
    for (const auto& c : cases.cases) {
        double s = 0.0;
        for (const auto& t : terms) s = std::max(s, term_membership(c, t));
        sum_s += s;
        sum_min += std::min(s, c.outcome(outcome));
        if (s > 0.5)
            ++sol.cases_covered;
        else
            ++sol.cases_not_covered;
    }
    if (sum_s > 0.0) sol.consistency = sum_min / sum_s;
    sol.coverage = total_raw;
    return sol;
}

OutcomeAnalysis analyze_outcome(const CaseSet& cases, Outcome outcome, const Thresholds& t) {
    OutcomeAnalysis a;
    a.outcome = outcome;
    if (sum_outcome(cases, outcome) > 0.0)
        a.necessity = necessity_analysis(cases, outcome, t.necessity);
    a.truth_table = build_truth_table(cases, outcome, t.sufficiency);
    const bool any = std::any_of(a.truth_table.begin(), a.truth_table.end(),
                                 [](const TruthTableRow& r) { return r.included; });
    if (any) {
        const auto cover = minimize_configurations(
            a.truth_table, static_cast<int>(cases.condition_names.size()));
        a.solution = solution_metrics(cover.terms, cases, outcome);
        a.solution->exact_minimization = cover.exact;
    }
    return a;
}

std::pair<OutcomeAnalysis, OutcomeAnalysis> analyze_both_outcomes(const CaseSet& cases,
                                                                  const Thresholds& t) {
    return {analyze_outcome(cases, Outcome::High, t), analyze_outcome(cases, Outcome::Low, t)};
}

void write_necessity(const std::filesystem::path& path,
                     const std::vector<const OutcomeAnalysis*>& analyses) {
    std::vector<std::vector<std::string>> out;
    for (const auto* a : analyses)
        for (const auto& r : a->necessity)
            out.push_back({to_string(a->outcome), r.condition, csv::format_fixed(r.consistency),
                           r.coverage ? csv::format_fixed(*r.coverage) : std::string{},
                           csv::format_fixed(r.relevance), r.necessary ? "true" : "false"});
    csv::write(path, {"outcome", "condition", "consistency", "coverage", "relevance", "necessary"},
               out);
}

void write_truth_table(const std::filesystem::path& path, const CaseSet& cases,
                       const std::vector<const OutcomeAnalysis*>& analyses) {
    std::vector<std::string> header = {"outcome"};
    for (const auto& n : cases.condition_names) header.push_back(n);
    for (const char* h : {"case_count", "consistency", "included"}) header.emplace_back(h);
    std::vector<std::vector<std::string>> out;
    for (const auto* a : analyses) {
        for (const auto& r : a->truth_table) {
            std::vector<std::string> f = {to_string(a->outcome)};
            for (std::size_t i = 0; i < cases.condition_names.size(); ++i)
                f.push_back(((r.configuration >> i) & 1U) ? "1" : "0");
            f.push_back(std::to_string(r.case_count));
            f.push_back(r.consistency ? csv::format_fixed(*r.consistency) : std::string{});
            f.push_back(r.included ? "true" : "false");
            out.push_back(std::move(f));
        }
    }
    csv::write(path, header, out);
}

std::string render_solution_text(const CaseSet& cases,
                                 const std::vector<const OutcomeAnalysis*>& analyses) {
    struct Column {
        std::string title;
        const TermMetrics* term = nullptr;  // null: "No solution"
        const Solution* solution = nullptr;
    };
    std::vector<Column> cols;
    for (const auto* a : analyses) {
        if (!a->solution) {
            cols.push_back({a->outcome == Outcome::High ? "HIGH" : "LOW", nullptr, nullptr});
            continue;
        }
        const auto& terms = a->solution->terms;
        for (std::size_t i = 0; i < terms.size(); ++i)
            cols.push_back({solution_label(a->outcome, i, terms.size()), &terms[i],
                            &*a->solution});
    }

    constexpr int kLabelWidth = 42;
    constexpr int kColWidth = 14;
    std::string out;
    auto line = [&](const std::string& label, const std::vector<std::string>& cells) {
        out += fmt::format("{:<{}}", label, kLabelWidth);
        for (const auto& c : cells) out += fmt::format("{:<{}}", c, kColWidth);
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    };
    auto cells = [&](auto&& f) {
        std::vector<std::string> v;
        for (const auto& c : cols) v.push_back(c.term ? f(c) : std::string("-"));
        return v;
    };

    std::vector<std::string> titles;
    for (const auto& c : cols) titles.push_back(c.title);
    line("Solution", titles);
    line("Conditions:", {});
    for (std::size_t i = 0; i < cases.condition_names.size(); ++i) {
        std::vector<std::string> v;
        for (const auto& c : cols) {
            if (!c.term) {
                v.push_back(i == 0 ? "No solution" : "");
                continue;
            }
            const std::uint32_t b = 1U << i;
            v.push_back((c.term->term.mask & b) ? "-" : ((c.term->term.value & b) ? "present"
                                                                                   : "absent"));
        }
        line("  " + cases.condition_names[i], v);
    }
    line("Solution consistency and coverage:", {});
    line("  Consistency", cells([](const Column& c) { return opt_num(c.term->consistency); }));
    line("  Raw coverage",
         cells([](const Column& c) { return csv::format_fixed(c.term->raw_coverage, 4); }));
    line("  Unique coverage",
         cells([](const Column& c) { return csv::format_fixed(c.term->unique_coverage, 4); }));
    for (const auto* a : analyses) {
        const std::string name = a->outcome == Outcome::High ? "HIGH" : "LOW";
        out += fmt::format("Overall solution ({}):\n", name);
        if (!a->solution) {
            out += "  No solution: no configuration passed the sufficiency thresholds\n";
            continue;
        }
        const auto& s = *a->solution;
        out += fmt::format("  {:<40}{}\n", "Overall solution consistency", opt_num(s.consistency));
        out += fmt::format("  {:<40}{}\n", "Overall solution coverage",
                           csv::format_fixed(s.coverage, 4));
        out += fmt::format("  {:<40}{}\n", "No. of cases covered", s.cases_covered);
        out += fmt::format("  {:<40}{}\n", "No. of cases not covered", s.cases_not_covered);
        std::vector<std::string> labels;
        for (const auto& t : s.terms) labels.push_back(t.label);
        out += fmt::format("  {:<40}{}\n", "Expression", fmt::join(labels, " + "));
    }
    return out;
}

std::string render_solution_json(const CaseSet& cases,
                                 const std::vector<const OutcomeAnalysis*>& analyses) {
    using nlohmann::json;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    json root;
    root["conditions"] = cases.condition_names;
    root["case_count"] = cases.cases.size();
    for (const auto* a : analyses) {
        json o;
        json nec = json::array();
        for (const auto& r : a->necessity)
            nec.push_back({{"condition", r.condition},
                           {"consistency", r.consistency},
                           {"coverage", opt(r.coverage)},
                           {"relevance", r.relevance},
                           {"necessary", r.necessary}});
        o["necessity"] = nec;
        json tt = json::array();
        for (const auto& r : a->truth_table)
            tt.push_back({{"configuration", r.configuration},
                          {"case_count", r.case_count},
                          {"consistency", opt(r.consistency)},
                          {"included", r.included}});
        o["truth_table"] = tt;
        if (!a->solution) {
            o["solution"] = nullptr;
        } else {
            const auto& s = *a->solution;
            json terms = json::array();
            for (const auto& t : s.terms) {
                json lits = json::object();
                for (std::size_t i = 0; i < cases.condition_names.size(); ++i) {
                    const std::uint32_t b = 1U << i;
                    if (!(t.term.mask & b)) lits[cases.condition_names[i]] = (t.term.value & b) != 0;
                }
                terms.push_back({{"expression", t.label},
                                 {"literals", lits},
                                 {"consistency", opt(t.consistency)},
                                 {"raw_coverage", t.raw_coverage},
                                 {"unique_coverage", t.unique_coverage}});
            }
            o["solution"] = {{"terms", terms},
                             {"consistency", opt(s.consistency)},
                             {"coverage", s.coverage},
                             {"cases_covered", s.cases_covered},
                             {"cases_not_covered", s.cases_not_covered},
                             {"exact_minimization", s.exact_minimization}};
        }
        root[to_string(a->outcome)] = o;
    }
    return root.dump(2) + "\n";
}

}  // namespace trendlink::fsqca
