#pragma once

#include "argtab/arguments.hpp"
#include "argtab/lang/knowledge_base.hpp"
#include "argtab/tableau.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace argtab {

struct FiringRecord {
    GroundRuleInstance rule;
    /// Minimized support of the antecedent.
    Support antecedent_support;
    /// The closure support (including the antecedent test) that fired it.
    Support closure_support;
    /// ({(S, φ ~> ψ)}, ψ); absent for defeaters, whose conclusion is not a
    /// proposition.
    std::optional<Entry> produced_entry;
    int node = 0;
    int round = 0;

    SupportElement element() const { return SupportElement::rule_application(antecedent_support, rule); }
};

struct PendingTest {
    GroundRuleInstance rule;
    SupportElement test;
    int node = 0;
};

struct QueryArguments {
    Formula query;
    std::vector<Argument> arguments;
};

struct DerivationState {
    KnowledgeBase kb;
    Tableau tableau;
    std::vector<PendingTest> pending_tests;
    std::vector<FiringRecord> fired;
    std::vector<QueryArguments> queries;
    /// (S, ⊥) arguments from test-free closure supports.
    std::vector<Argument> inconsistencies;
    /// Arguments concluding not(rule) produced by defeater rules.
    std::vector<Argument> defeaters;
    std::vector<std::string> trace;
    int rounds = 0;

    bool incomplete() const { return tableau.incomplete(); }

    /// Every argument produced: query arguments, inconsistencies, defeaters.
    std::vector<Argument> pool() const
    {
        std::set<Argument> out;
        for (const auto& q : queries) out.insert(q.arguments.begin(), q.arguments.end());
        out.insert(inconsistencies.begin(), inconsistencies.end());
        out.insert(defeaters.begin(), defeaters.end());
        return {out.begin(), out.end()};
    }

    const std::vector<Argument>* arguments_for(const Formula& q) const
    {
        for (const auto& qa : queries)
            if (qa.query == q) return &qa.arguments;
        return nullptr;
    }
};

/// Ground terms occurring in any entry of the tableau.
inline std::vector<Term> tableau_terms(const Tableau& t)
{
    std::set<Term> out;
    for (const auto& n : t.nodes())
        for (const auto& e : n.added) e.formula().collect_ground_terms(out);
    return {out.begin(), out.end()};
}

namespace detail {

template <typename T>
void insert_unique(std::vector<T>& v, T x)
{
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(std::move(x));
}

inline Argument defeater_argument(const FiringRecord& f)
{
    return {Support{f.element()}, NegatedRuleClaim{std::get<RuleRef>(f.rule.consequent())}};
}

} // namespace detail

/// Posts a test for the antecedent of every ground rule instance that has
/// none yet at `node`. Instances range over the terms currently in the
/// tableau. Returns the number of tests added.
inline std::size_t post_antecedent_tests(DerivationState& st, int node = 0)
{
    const auto terms = tableau_terms(st.tableau);
    std::size_t added = 0;
    for (const auto& rule : st.kb.rules) {
        for (auto& inst : ground_instances(rule, terms)) {
            const bool known = std::any_of(st.pending_tests.begin(), st.pending_tests.end(), [&](const PendingTest& p) {
                return p.node == node && p.rule == inst;
            });
            if (known) continue;
            SupportElement test = st.tableau.add_test(node, inst.antecedent());
            st.pending_tests.push_back({std::move(inst), std::move(test), node});
            ++added;
        }
    }
    return added;
}

/// Fires `rule` on the given antecedent support. Returns
/// false when the same firing happened before or the depth cap forbids it.
inline bool fire_rule(DerivationState& st, const GroundRuleInstance& rule, Support antecedent_support,
                      Support closure_support, int node, const EntailmentOracle& oracle)
{
    Support minimized = minimize_support(antecedent_support, rule.antecedent(), oracle);
    for (const auto& f : st.fired)
        if (f.rule == rule && f.antecedent_support == minimized && f.node == node) return false;
    FiringRecord rec{rule, std::move(minimized), std::move(closure_support), std::nullopt, node, st.rounds};
    const SupportElement el = rec.element();
    if (el.rule_depth() > st.tableau.budget().depth_cap) {
        st.tableau.mark_incomplete("rule depth cap reached");
        return false;
    }
    if (const auto* f = std::get_if<Formula>(&rule.consequent())) rec.produced_entry = Entry(Support{el}, *f);
    st.trace.push_back("round " + std::to_string(st.rounds) + ": fire " + rule.text() + " on " +
                       render_support(rec.antecedent_support));
    st.fired.push_back(rec);
    if (rec.produced_entry) st.tableau.add_entry(node, *rec.produced_entry);
    else detail::insert_unique(st.defeaters, detail::defeater_argument(rec));
    return true;
}

/// Root-mode derivation: antecedent tests at the root, firing on
/// single-test closure supports, repeated until nothing new appears.
/// `queries` defaults to the queries of the knowledge base.
inline DerivationState derive(const KnowledgeBase& kb, const Budget& budget = {},
                              std::optional<std::vector<Formula>> queries = std::nullopt)
{
    DerivationState st{kb, Tableau(budget), {}, {}, {}, {}, {}, {}, 0};
    Tableau& t = st.tableau;
    for (const auto& s : kb.sigma) t.add_premise(s);

    std::vector<std::pair<std::size_t, SupportElement>> query_tests;
    for (const auto& q : queries ? *queries : kb.queries) {
        if (st.arguments_for(q)) continue;
        st.queries.push_back({q, {}});
        query_tests.emplace_back(st.queries.size() - 1, t.add_test(0, q));
    }

    const EntailmentOracle oracle = tableau_oracle(budget);
    post_antecedent_tests(st, 0);
    for (;;) {
        ++st.rounds;
        t.saturate();
        bool fired = false;
        for (const auto& s : t.closure_supports({1, true})) {
            const auto tests = s.tests();
            if (tests.empty()) {
                detail::insert_unique(st.inconsistencies, Argument{s, Falsum{}});
                continue;
            }
            const SupportElement& test = tests.front();
            for (const auto& [qi, qt] : query_tests)
                if (qt == test) detail::insert_unique(st.queries[qi].arguments, Argument{s.without(test), st.queries[qi].query});
            for (const auto& p : st.pending_tests)
                if (p.test == test) fired = fire_rule(st, p.rule, s.without(test), s, 0, oracle) || fired;
        }
        // Saturation may have introduced fresh constants, hence new instances.
        const std::size_t posted = post_antecedent_tests(st, 0);
        if (!fired && posted == 0) break;
        if (t.incomplete() && t.incomplete_reasons().count("entry budget exhausted")) break;
    }
    for (auto& q : st.queries) std::sort(q.arguments.begin(), q.arguments.end());
    std::sort(st.inconsistencies.begin(), st.inconsistencies.end());
    std::sort(st.defeaters.begin(), st.defeaters.end());
    return st;
}

} // namespace argtab
