#pragma once

#include "argtab/arguments.hpp"
#include "argtab/defeasible.hpp"
#include "argtab/defeat.hpp"
#include "argtab/lang/knowledge_base.hpp"
#include "argtab/tableau.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace argtab {

/// The three mutually exclusive children of an entry whose formula is ∨, →
/// or ¬∧.
inline std::vector<Entry> exclusive_expand(const Entry& e)
{
    auto parts = exclusive_split(e.formula());
    if (!parts) throw std::invalid_argument("exclusive split needs a disjunction, implication or negated conjunction");
    std::vector<Entry> out;
    for (auto& f : *parts) out.emplace_back(e.support(), std::move(f));
    return out;
}

namespace detail {

/// True when `f`, read with the given polarity, asserts something for all
/// objects: a positive ∀ or a negated ∃.
inline bool has_universal_claim(const Formula& f, bool positive)
{
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::ForAll:
        return positive || has_universal_claim(f.operand(), positive);
    case K::Exists:
        return !positive || has_universal_claim(f.operand(), positive);
    case K::Not:
        return has_universal_claim(f.operand(), !positive);
    case K::And:
    case K::Or:
        return has_universal_claim(f.left(), positive) || has_universal_claim(f.right(), positive);
    case K::Implies:
        return has_universal_claim(f.left(), !positive) || has_universal_claim(f.right(), positive);
    case K::Iff:
        return has_universal_claim(f.left(), true) || has_universal_claim(f.left(), false) ||
               has_universal_claim(f.right(), true) || has_universal_claim(f.right(), false);
    default:
        return false;
    }
}

/// A leaf whose branch is closed by premises alone is an impossible case.
inline bool closed_by_premises(const TableauNode& n)
{
    return std::any_of(n.closures.begin(), n.closures.end(), [](const Support& s) {
        return std::all_of(s.begin(), s.end(), [](const SupportElement& e) { return e.is_premise(); });
    });
}

inline bool on_path(const std::vector<int>& path, int node)
{
    return std::find(path.begin(), path.end(), node) != path.end();
}

} // namespace detail

inline void check_cases_rules(const KnowledgeBase& kb)
{
    for (const auto& r : kb.rules)
        if (detail::has_universal_claim(r.antecedent(), true))
            throw std::invalid_argument("rule '" + r.id() + "' has a universal claim in its antecedent, which cases mode does not support");
}

/// Open leaves: not closed by premises alone.
inline std::vector<int> open_case_leaves(const Tableau& t)
{
    std::vector<int> out;
    for (int l : t.leaves())
        if (!detail::closed_by_premises(t.node(l))) out.push_back(l);
    return out;
}

/// Firing records that apply on the branch ending at `leaf`.
inline std::vector<const FiringRecord*> firings_on_branch(const DerivationState& st, int leaf)
{
    const auto path = st.tableau.path_to(leaf);
    std::vector<const FiringRecord*> out;
    for (const auto& f : st.fired)
        if (detail::on_path(path, f.node)) out.push_back(&f);
    return out;
}

/// Leaf-mode derivation with mutually exclusive splitting. At each open
/// saturated leaf every rule antecedent is tested in turn; a test that
/// closes all branches below the leaf with a single-test support fires the
/// rule into that leaf, and the test is always removed again.
inline DerivationState case_derive(const KnowledgeBase& kb, const Budget& budget = {})
{
    check_cases_rules(kb);
    DerivationState st{kb, Tableau(budget), {}, {}, {}, {}, {}, {}, 0};
    Tableau& t = st.tableau;
    t.set_exclusive(true);
    for (const auto& s : kb.sigma) t.add_premise(s);
    t.saturate();

    // Antecedent supports in a case need not entail the antecedent outside
    // that case, so they are kept as found.
    const EntailmentOracle keep = [](const std::vector<Formula>&, const Formula&) { return false; };
    // (leaf, instance key) -> number of branch entries at the last attempt.
    std::map<std::pair<int, std::string>, std::size_t> attempted;

    for (bool progress = true; progress;) {
        progress = false;
        ++st.rounds;
        for (int leaf : t.leaves()) {
            if (detail::closed_by_premises(t.node(leaf))) continue;
            const std::size_t branch_size = t.branch(leaf).entries.size();
            bool fired_here = false;
            for (const auto& rule : kb.rules) {
                for (const auto& inst : ground_instances(rule, tableau_terms(t))) {
                    auto& seen = attempted[{leaf, inst.key()}];
                    if (seen == branch_size) continue;
                    seen = branch_size;

                    const auto snap = t.snapshot({leaf});
                    const SupportElement test = t.add_test(leaf, inst.antecedent());
                    t.saturate(leaf);
                    std::vector<Support> found;
                    for (const auto& s : t.closure_supports({1, true}, leaf))
                        if (s.contains(test)) found.push_back(s);
                    t.restore(snap);

                    const auto path = t.path_to(leaf);
                    for (const auto& s : found) {
                        const Support ante = s.without(test);
                        const bool dup = std::any_of(st.fired.begin(), st.fired.end(), [&](const FiringRecord& f) {
                            return f.rule == inst && f.antecedent_support == ante && detail::on_path(path, f.node);
                        });
                        if (dup) continue;
                        fired_here = fire_rule(st, inst, ante, s, leaf, keep) || fired_here;
                    }
                }
            }
            if (fired_here) {
                t.saturate(leaf);
                progress = true;
            }
        }
    }
    return st;
}

struct PropagationOptions {
    bool minimal_only = false;
    std::size_t cap = 10000;
};

/// ⊥ records of every node after propagating leaf closures to the root.
struct Propagation {
    std::vector<std::vector<Support>> records;
    bool capped = false;

    const std::vector<Support>& root() const { return records.front(); }
};

/// Moves leaf closures towards the root. A single child passes its records
/// up. At a split of entry (S, η) one record per child that includes S is
/// combined by union, and records not including S pass up unchanged.
inline Propagation propagate_local_closures(const Tableau& t, PropagationOptions opts = {})
{
    Propagation p;
    p.records.resize(t.nodes().size());
    const auto tidy = [&](std::vector<Support> v) {
        if (opts.minimal_only) return minimal_supports(std::move(v));
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        if (v.size() > opts.cap) {
            v.resize(opts.cap);
            p.capped = true;
        }
        return v;
    };

    // Children always have larger indices than their parent.
    for (int i = static_cast<int>(t.nodes().size()) - 1; i >= 0; --i) {
        const auto& n = t.node(i);
        auto& out = p.records[static_cast<std::size_t>(i)];
        if (n.children.empty()) {
            out = tidy(n.closures);
            continue;
        }
        if (n.children.size() == 1) {
            out = p.records[static_cast<std::size_t>(n.children.front())];
            continue;
        }
        const Support& s = n.rewrite->entry.support();
        std::vector<Support> collected;
        std::vector<Support> partial{Support{}};
        for (int c : n.children) {
            std::vector<Support> with_s;
            for (const auto& r : p.records[static_cast<std::size_t>(c)]) {
                if (r.includes(s)) with_s.push_back(r);
                else collected.push_back(r);
            }
            std::vector<Support> next;
            for (const auto& u : partial)
                for (const auto& r : with_s) next.push_back(u.unite(r));
            partial = tidy(std::move(next));
        }
        collected.insert(collected.end(), partial.begin(), partial.end());
        out = tidy(std::move(collected));
    }
    return p;
}

/// Test-free root records: the supports of local tableau closures.
inline std::vector<Support> local_closures(const Tableau& t, PropagationOptions opts = {true, 10000})
{
    const Propagation p = propagate_local_closures(t, opts);
    std::vector<Support> out;
    for (const auto& s : p.root())
        if (s.test_count() == 0) out.push_back(s);
    return out;
}

struct CaseResult {
    std::vector<int> leaves;
    /// Rule applications fired on the branches of this case.
    Support fired;
    /// Literals derived from premises alone that hold on every leaf.
    std::vector<Formula> defining_literals;
    std::vector<QueryArguments> queries;
    std::vector<Argument> conflicts;
    std::vector<Argument> defeaters;
    AttackGraph af;
    std::vector<ConclusionStatus> statuses;
};

struct CaseReport {
    DerivationState state;
    std::vector<Support> local_closures;
    std::vector<CaseResult> cases;
    AttackGraph merged;
    /// Queries justified in every case.
    std::vector<Formula> common;
    Semantics semantics = Semantics::Grounded;

    bool incomplete() const { return state.incomplete(); }
};

/// Runs the case derivation and evaluates every open case on its own
/// framework built from the case's query arguments, conflicts and
/// defeaters.
inline CaseReport case_report(const KnowledgeBase& kb, Semantics sem = Semantics::Grounded, const Budget& budget = {},
                              std::optional<std::vector<Formula>> queries = std::nullopt)
{
    CaseReport rep{case_derive(kb, budget), {}, {}, {}, {}, sem};
    Tableau& t = rep.state.tableau;
    rep.local_closures = local_closures(t);
    rep.state.inconsistencies.clear();
    for (const auto& s : rep.local_closures) rep.state.inconsistencies.push_back({s, Falsum{}});
    const std::vector<Formula> qs = queries ? *queries : kb.queries;
    for (const auto& q : qs) rep.state.queries.push_back({q, {}});

    // Each leaf not closed by premises alone is a case; its literals fix the
    // case completely.
    for (int leaf : open_case_leaves(t)) {
        std::vector<SupportElement> els;
        for (const auto* f : firings_on_branch(rep.state, leaf)) els.push_back(f->element());
        rep.cases.push_back({{leaf}, Support(std::move(els)), {}, {}, {}, {}, {}, {}});
    }

    for (auto& c : rep.cases) {
        std::map<std::string, std::pair<Formula, std::size_t>> counts;
        for (int leaf : c.leaves) {
            std::set<std::string> seen;
            for (const auto& e : t.branch(leaf).entries) {
                const bool premises_only = std::all_of(e.support().begin(), e.support().end(),
                                                       [](const SupportElement& x) { return x.is_premise(); });
                if (!premises_only || !e.formula().is_literal() || !seen.insert(e.formula().key()).second) continue;
                auto [it, fresh] = counts.emplace(e.formula().key(), std::make_pair(e.formula(), 0));
                it->second.second += 1;
            }
        }
        std::set<Formula> literals;
        for (const auto& [k, v] : counts)
            if (v.second == c.leaves.size()) literals.insert(v.first);
        c.defining_literals.assign(literals.begin(), literals.end());

        for (const auto& q : qs) {
            QueryArguments qa{q, {}};
            const auto snap = t.snapshot(c.leaves);
            const SupportElement test = SupportElement::test(Formula::negation(q), t.next_test_id());
            for (int leaf : c.leaves) {
                t.add_entry(leaf, Entry(Support{test}, test.formula()));
                t.saturate(leaf);
            }
            std::vector<int> below;
            for (int leaf : c.leaves)
                for (int l : t.leaves(leaf)) below.push_back(l);
            for (const auto& s : t.closure_supports_over(below, {1, true}))
                if (s.contains(test)) qa.arguments.push_back({s.without(test), q});
            t.restore(snap);
            std::sort(qa.arguments.begin(), qa.arguments.end());
            c.queries.push_back(std::move(qa));
        }

        // Conflicts of the case: local closures built from its own rule
        // applications, and whatever closes the leaf itself.
        std::vector<Support> conflicts;
        for (const auto& s : rep.local_closures) {
            const bool inside = std::all_of(s.begin(), s.end(), [&](const SupportElement& e) {
                return !e.is_rule_application() || c.fired.contains(e);
            });
            if (inside) conflicts.push_back(s);
        }
        for (int leaf : c.leaves)
            for (const auto& s : t.node(leaf).closures)
                if (s.test_count() == 0) conflicts.push_back(s);
        for (auto& s : minimal_supports(std::move(conflicts))) c.conflicts.push_back({std::move(s), Falsum{}});
        std::set<Argument> defeaters;
        for (int leaf : c.leaves)
            for (const auto* f : firings_on_branch(rep.state, leaf))
                if (!f->produced_entry) defeaters.insert(detail::defeater_argument(*f));
        c.defeaters.assign(defeaters.begin(), defeaters.end());

        std::vector<Argument> pool;
        for (const auto& qa : c.queries) pool.insert(pool.end(), qa.arguments.begin(), qa.arguments.end());
        pool.insert(pool.end(), c.conflicts.begin(), c.conflicts.end());
        pool.insert(pool.end(), c.defeaters.begin(), c.defeaters.end());
        c.af = build_af(pool, kb.preferences);
        c.statuses = justified_conclusions(c.af, sem, qs);
    }

    std::vector<Argument> merged;
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
        std::set<Argument> all;
        for (const auto& c : rep.cases) all.insert(c.queries[qi].arguments.begin(), c.queries[qi].arguments.end());
        rep.state.queries[qi].arguments.assign(all.begin(), all.end());
        merged.insert(merged.end(), all.begin(), all.end());
    }
    // Across cases only the local closures count as conflicts; leaf
    // closures hold inside their own case.
    for (const auto& s : rep.local_closures) merged.push_back({s, Falsum{}});
    for (const auto& c : rep.cases) merged.insert(merged.end(), c.defeaters.begin(), c.defeaters.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    rep.merged = build_af(merged, kb.preferences);

    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
        const bool everywhere = !rep.cases.empty() && std::all_of(rep.cases.begin(), rep.cases.end(), [&](const CaseResult& c) {
            return c.statuses[qi].status == Status::Justified;
        });
        if (everywhere) rep.common.push_back(qs[qi]);
    }
    return rep;
}

} // namespace argtab
