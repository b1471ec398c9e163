#pragma once

#include "argtab/arguments.hpp"
#include "argtab/cases.hpp"
#include "argtab/defeasible.hpp"
#include "argtab/defeat.hpp"
#include "argtab/lang/parser.hpp"
#include "argtab/tableau.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace argtab {

namespace detail {

inline void argument_lines(const Support& s, int depth, std::vector<std::string>& out)
{
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    for (const auto& e : s) {
        switch (e.kind()) {
        case SupportElement::Kind::Premise: out.push_back(pad + "  " + render_formula(e.formula())); break;
        case SupportElement::Kind::Test: out.push_back(pad + "  " + render_formula(e.formula()) + "?"); break;
        case SupportElement::Kind::RuleApplication:
            argument_lines(e.inner(), depth + 1, out);
            out.push_back(pad + "  |- " + e.rule().text() + " => " + GroundRuleInstance::consequent_text(e.rule().consequent()));
            break;
        }
    }
}

} // namespace detail

/// Human readable argument. Arguments without rule applications fit on one
/// line (`a, b |- c`); otherwise each rule application shows its support
/// indented one level deeper, followed by a `|- rule => consequent` line,
/// and the conclusion comes last.
inline std::string render_argument_text(const Argument& a)
{
    if (!a.support.has_rule_application()) {
        std::string line;
        for (const auto& e : a.support) {
            if (!line.empty()) line += ", ";
            line += render_element(e);
        }
        return (line.empty() ? "" : line + " ") + "|- " + render_conclusion(a.conclusion);
    }
    std::vector<std::string> lines;
    detail::argument_lines(a.support, 0, lines);
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out + "|- " + render_conclusion(a.conclusion);
}

inline nlohmann::ordered_json support_to_json(const Support& s)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : s) {
        nlohmann::ordered_json j;
        switch (e.kind()) {
        case SupportElement::Kind::Premise: j["premise"] = render_formula(e.formula()); break;
        case SupportElement::Kind::Test:
            j["test"] = render_formula(e.formula());
            j["id"] = e.test_id();
            break;
        case SupportElement::Kind::RuleApplication:
            j["rule"] = e.rule().key();
            j["instance"] = e.rule().text();
            j["antecedent_support"] = support_to_json(e.inner());
            break;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

inline nlohmann::ordered_json conclusion_to_json(const Conclusion& c)
{
    nlohmann::ordered_json j;
    if (const auto* f = std::get_if<Formula>(&c)) j["formula"] = render_formula(*f);
    else if (std::holds_alternative<Falsum>(c)) j["falsum"] = true;
    else if (const auto* r = std::get_if<NegatedRuleClaim>(&c)) {
        j["not_rule"] = r->rule.key();
        j["instance"] = r->rule.text;
    } else {
        j["not_premise"] = render_formula(std::get<NegatedPremiseClaim>(c).premise);
    }
    return j;
}

/// `{conclusion, support: [{premise} | {test, id} | {rule, instance, antecedent_support}]}`
inline nlohmann::ordered_json argument_to_json(const Argument& a)
{
    nlohmann::ordered_json j;
    j["conclusion"] = conclusion_to_json(a.conclusion);
    j["support"] = support_to_json(a.support);
    j["text"] = render_argument(a);
    return j;
}

enum class Mode { Classic, Defeasible, Cases };
enum class Emit { Text, Json, Dot, Apx };

struct RunConfig {
    Mode mode = Mode::Defeasible;
    Semantics semantics = Semantics::Grounded;
    Budget budget;
    Emit emit = Emit::Text;
    /// Replaces the queries of the knowledge base when not empty.
    std::vector<Formula> queries;
};

struct Report {
    nlohmann::ordered_json data;
    std::string tableau_dot;
    std::string apx;
    int exit_status = 0;
};

/// `k=v,k=v` overrides for the budget fields.
inline Budget parse_budget(const std::string& spec, Budget b = {})
{
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("budget item '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        long long value = 0;
        try {
            value = std::stoll(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("budget value for '" + key + "' is not a number");
        }
        if (value <= 0) throw std::invalid_argument("budget value for '" + key + "' must be positive");
        if (key == "gamma_rounds") b.gamma_rounds = static_cast<int>(value);
        else if (key == "fresh_constants") b.fresh_constants = static_cast<int>(value);
        else if (key == "max_entries") b.max_entries = static_cast<std::size_t>(value);
        else if (key == "depth_cap") b.depth_cap = static_cast<int>(value);
        else if (key == "combination_cap") b.combination_cap = static_cast<std::size_t>(value);
        else throw std::invalid_argument("unknown budget key '" + key + "'");
    }
    return b;
}

inline std::string mode_name(Mode m)
{
    switch (m) {
    case Mode::Classic: return "classic";
    case Mode::Defeasible: return "defeasible";
    case Mode::Cases: return "cases";
    }
    return "";
}

namespace detail {

inline nlohmann::ordered_json af_to_json(const AttackGraph& g, Semantics sem, const std::vector<ConclusionStatus>& statuses)
{
    nlohmann::ordered_json j;
    j["arguments"] = nlohmann::ordered_json::array();
    for (int i = 0; i < g.size(); ++i) {
        auto a = argument_to_json(g.arguments[static_cast<std::size_t>(i)]);
        a["id"] = "a" + std::to_string(i + 1);
        j["arguments"].push_back(std::move(a));
    }
    j["attacks"] = nlohmann::ordered_json::array();
    for (const auto& [a, b] : g.attacks)
        j["attacks"].push_back({"a" + std::to_string(a + 1), "a" + std::to_string(b + 1)});
    j["undercutters"] = nlohmann::ordered_json::array();
    for (const auto& u : g.undercutters) j["undercutters"].push_back(argument_to_json(u.argument));
    j["conflicts"] = nlohmann::ordered_json::array();
    for (const auto& c : g.conflicts) j["conflicts"].push_back(argument_to_json(c));
    j["extensions"] = nlohmann::ordered_json::array();
    for (const auto& e : enumerate_extensions(g, sem)) {
        auto members = nlohmann::ordered_json::array();
        for (int m : e.members) members.push_back("a" + std::to_string(m + 1));
        j["extensions"].push_back(std::move(members));
    }
    j["statuses"] = nlohmann::ordered_json::array();
    for (const auto& s : statuses)
        j["statuses"].push_back({{"query", render_formula(s.conclusion)}, {"status", status_name(s.status)}});
    return j;
}

inline int exit_for(const std::vector<ConclusionStatus>& statuses, bool incomplete)
{
    if (incomplete) return 3;
    for (const auto& s : statuses)
        if (s.status != Status::Justified) return 1;
    return 0;
}

} // namespace detail

/// Runs the selected pipeline over a parsed knowledge base. Exit status: 0
/// every query justified, 1 some query not justified, 3 the budget cut the
/// search short.
inline Report run(const KnowledgeBase& input, const RunConfig& cfg)
{
    KnowledgeBase kb = input;
    if (!cfg.queries.empty()) {
        kb.queries.clear();
        for (const auto& q : cfg.queries)
            if (std::find(kb.queries.begin(), kb.queries.end(), q) == kb.queries.end()) kb.queries.push_back(q);
    }

    Report r;
    auto& j = r.data;
    j["schema"] = 1;
    j["mode"] = mode_name(cfg.mode);
    j["semantics"] = semantics_name(cfg.semantics);

    const auto query_json = [](const Formula& q, const std::vector<Argument>& args) {
        nlohmann::ordered_json qj;
        qj["query"] = render_formula(q);
        qj["arguments"] = nlohmann::ordered_json::array();
        for (const auto& a : args) {
            auto aj = argument_to_json(a);
            aj["tree"] = render_argument_text(a);
            qj["arguments"].push_back(std::move(aj));
        }
        return qj;
    };

    if (cfg.mode == Mode::Cases) {
        const CaseReport rep = case_report(kb, cfg.semantics, cfg.budget);
        j["local_closures"] = nlohmann::ordered_json::array();
        for (const auto& s : rep.local_closures) j["local_closures"].push_back(argument_to_json({s, Falsum{}}));
        j["cases"] = nlohmann::ordered_json::array();
        for (const auto& c : rep.cases) {
            nlohmann::ordered_json cj;
            cj["defining_literals"] = nlohmann::ordered_json::array();
            for (const auto& l : c.defining_literals) cj["defining_literals"].push_back(render_formula(l));
            cj["fired"] = support_to_json(c.fired);
            cj["queries"] = nlohmann::ordered_json::array();
            for (const auto& q : c.queries) cj["queries"].push_back(query_json(q.query, q.arguments));
            cj["framework"] = detail::af_to_json(c.af, cfg.semantics, c.statuses);
            j["cases"].push_back(std::move(cj));
        }
        j["common"] = nlohmann::ordered_json::array();
        for (const auto& f : rep.common) j["common"].push_back(render_formula(f));
        // Query arguments here are case-relative, so the merged graph carries
        // no verdicts of its own.
        j["merged"] = detail::af_to_json(rep.merged, cfg.semantics, {});
        j["incomplete"] = rep.incomplete();
        r.tableau_dot = rep.state.tableau.dump_dot();
        r.apx = export_apx(rep.merged);
        if (rep.incomplete()) r.exit_status = 3;
        else {
            r.exit_status = 0;
            for (const auto& q : kb.queries)
                if (std::find(rep.common.begin(), rep.common.end(), q) == rep.common.end()) r.exit_status = 1;
        }
        return r;
    }

    std::vector<QueryArguments> queries;
    std::vector<Argument> pool;
    bool incomplete = false;
    if (cfg.mode == Mode::Classic) {
        if (kb.queries.empty()) {
            const auto pr = prove(kb, Formula::bottom(), cfg.budget);
            pool = pr.inconsistencies;
            incomplete = pr.incomplete;
            r.tableau_dot = pr.tableau.dump_dot();
        }
        std::set<Argument> conflicts;
        for (const auto& q : kb.queries) {
            const auto pr = prove(kb, q, cfg.budget);
            queries.push_back({q, pr.arguments});
            conflicts.insert(pr.inconsistencies.begin(), pr.inconsistencies.end());
            incomplete = incomplete || pr.incomplete;
            if (r.tableau_dot.empty()) r.tableau_dot = pr.tableau.dump_dot();
            pool.insert(pool.end(), pr.arguments.begin(), pr.arguments.end());
        }
        pool.insert(pool.end(), conflicts.begin(), conflicts.end());
    } else {
        const DerivationState st = derive(kb, cfg.budget);
        queries = st.queries;
        pool = st.pool();
        incomplete = st.incomplete();
        r.tableau_dot = st.tableau.dump_dot();
        j["firings"] = nlohmann::ordered_json::array();
        for (const auto& f : st.fired)
            j["firings"].push_back({{"rule", f.rule.key()},
                                    {"instance", f.rule.text()},
                                    {"round", f.round},
                                    {"antecedent_support", support_to_json(f.antecedent_support)},
                                    {"closure_support", support_to_json(f.closure_support)}});
    }

    j["queries"] = nlohmann::ordered_json::array();
    for (const auto& q : queries) j["queries"].push_back(query_json(q.query, q.arguments));
    const AttackGraph g = build_af(pool, kb.preferences);
    const auto statuses = justified_conclusions(g, cfg.semantics, kb.queries);
    j["framework"] = detail::af_to_json(g, cfg.semantics, statuses);
    j["incomplete"] = incomplete;
    r.apx = export_apx(g);
    r.exit_status = detail::exit_for(statuses, incomplete);
    return r;
}

namespace detail {

inline void framework_text(std::ostringstream& out, const nlohmann::ordered_json& f, const std::string& pad)
{
    const auto plain = [](const nlohmann::ordered_json& a) { return a["text"].get<std::string>(); };
    if (!f["conflicts"].empty()) {
        out << pad << "conflicts:\n";
        for (const auto& c : f["conflicts"]) out << pad << "  " << plain(c) << "\n";
    }
    if (!f["undercutters"].empty()) {
        out << pad << "undercutters:\n";
        for (const auto& u : f["undercutters"]) out << pad << "  " << plain(u) << "\n";
    }
    out << pad << "framework: " << f["arguments"].size() << " arguments, " << f["attacks"].size() << " attacks\n";
    for (const auto& a : f["arguments"]) out << pad << "  " << a["id"].get<std::string>() << " " << plain(a) << "\n";
    for (const auto& at : f["attacks"])
        out << pad << "  " << at[0].get<std::string>() << " -> " << at[1].get<std::string>() << "\n";
    for (const auto& e : f["extensions"]) {
        out << pad << "extension:";
        for (const auto& m : e) out << " " << m.get<std::string>();
        out << "\n";
    }
    for (const auto& s : f["statuses"])
        out << pad << s["query"].get<std::string>() << ": " << s["status"].get<std::string>() << "\n";
}

inline void queries_text(std::ostringstream& out, const nlohmann::ordered_json& qs, const std::string& pad)
{
    for (const auto& q : qs) {
        out << pad << "query " << q["query"].get<std::string>() << ": " << q["arguments"].size() << " argument(s)\n";
        for (const auto& a : q["arguments"]) {
            std::istringstream lines(a["tree"].get<std::string>());
            for (std::string line; std::getline(lines, line);) out << pad << "  " << line << "\n";
        }
    }
}

} // namespace detail

/// Plain-text rendering of a report.
inline std::string report_text(const Report& r)
{
    const auto& j = r.data;
    std::ostringstream out;
    out << "mode: " << j["mode"].get<std::string>() << ", semantics: " << j["semantics"].get<std::string>() << "\n";
    if (j.contains("cases")) {
        if (!j["local_closures"].empty()) {
            out << "local closures:\n";
            for (const auto& c : j["local_closures"]) out << "  " << c["text"].get<std::string>() << "\n";
        }
        int n = 0;
        for (const auto& c : j["cases"]) {
            out << "case " << ++n << ":";
            for (const auto& l : c["defining_literals"]) out << " " << l.get<std::string>();
            out << "\n";
            detail::queries_text(out, c["queries"], "  ");
            detail::framework_text(out, c["framework"], "  ");
        }
        out << "all cases:\n";
        detail::framework_text(out, j["merged"], "  ");
        out << "common:";
        for (const auto& f : j["common"]) out << " " << f.get<std::string>();
        out << "\n";
    } else {
        detail::queries_text(out, j["queries"], "");
        detail::framework_text(out, j["framework"], "");
    }
    if (j["incomplete"].get<bool>()) out << "incomplete: search stopped by the budget\n";
    return out.str();
}

} // namespace argtab
