#pragma once

// Reference implementations used to check the engine: truth tables,
// brute-force subset enumeration and random instance generators. Only
// `realized` looks at a tableau, and only to read its branches.

#include "argtab/arguments.hpp"
#include "argtab/lang/knowledge_base.hpp"
#include "argtab/tableau.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using argtab::Formula;

inline void atoms_of(const Formula& f, std::set<std::string>& out)
{
    if (f.is(Formula::Kind::Atom)) {
        out.insert(f.key());
        return;
    }
    if (f.is(Formula::Kind::True) || f.is(Formula::Kind::False)) return;
    if (f.is_quantifier()) throw std::invalid_argument("truth tables need quantifier-free formulas");
    if (f.is(Formula::Kind::Not)) return atoms_of(f.operand(), out);
    atoms_of(f.left(), out);
    atoms_of(f.right(), out);
}

inline bool eval(const Formula& f, const std::map<std::string, bool>& v)
{
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::Atom: return v.at(f.key());
    case K::Not: return !eval(f.operand(), v);
    case K::And: return eval(f.left(), v) && eval(f.right(), v);
    case K::Or: return eval(f.left(), v) || eval(f.right(), v);
    case K::Implies: return !eval(f.left(), v) || eval(f.right(), v);
    case K::Iff: return eval(f.left(), v) == eval(f.right(), v);
    default: throw std::invalid_argument("truth tables need quantifier-free formulas");
    }
}

/// Calls `visit` with every assignment to the atoms of `fs`; stops early
/// when `visit` returns false.
inline void for_each_model(const std::vector<Formula>& fs, const std::function<bool(const std::map<std::string, bool>&)>& visit)
{
    std::set<std::string> atoms;
    for (const auto& f : fs) atoms_of(f, atoms);
    const std::vector<std::string> names(atoms.begin(), atoms.end());
    std::map<std::string, bool> v;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << names.size()); ++bits) {
        for (std::size_t i = 0; i < names.size(); ++i) v[names[i]] = (bits >> i) & 1u;
        if (!visit(v)) return;
    }
}

inline bool satisfiable(const std::vector<Formula>& fs)
{
    bool sat = false;
    for_each_model(fs, [&](const auto& v) {
        sat = std::all_of(fs.begin(), fs.end(), [&](const Formula& f) { return eval(f, v); });
        return !sat;
    });
    return sat;
}

inline bool entails(std::vector<Formula> premises, const Formula& goal)
{
    premises.push_back(Formula::negation(goal));
    return !satisfiable(premises);
}

inline bool equivalent(const Formula& a, const Formula& b)
{
    return entails({a}, b) && entails({b}, a);
}

/// Minimal subsets (by inclusion) of `items` satisfying the monotone
/// predicate `good`, found by scanning subsets in order of size.
template <typename T>
std::vector<std::vector<T>> minimal_subsets(const std::vector<T>& items, const std::function<bool(const std::vector<T>&)>& good)
{
    const std::size_t n = items.size();
    if (n > 22) throw std::length_error("too many items for subset enumeration");
    std::vector<std::uint32_t> masks(std::size_t{1} << n);
    for (std::uint32_t m = 0; m < masks.size(); ++m) masks[m] = m;
    std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        return __builtin_popcount(a) < __builtin_popcount(b);
    });
    std::vector<std::uint32_t> found;
    std::vector<std::vector<T>> out;
    for (std::uint32_t m : masks) {
        if (std::any_of(found.begin(), found.end(), [&](std::uint32_t f) { return (m & f) == f; })) continue;
        std::vector<T> subset;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1u) subset.push_back(items[i]);
        if (good(subset)) {
            found.push_back(m);
            out.push_back(std::move(subset));
        }
    }
    return out;
}

inline std::vector<Formula> propositions(const std::vector<argtab::SupportElement>& els)
{
    std::vector<Formula> out;
    for (const auto& e : els)
        if (auto p = e.proposition()) out.push_back(*p);
    return out;
}

/// Minimal subsets of `elements` whose propositions are consistent and
/// entail `goal`.
inline std::vector<argtab::Support> minimal_consistent_supports(const std::vector<argtab::SupportElement>& elements,
                                                                const Formula& goal)
{
    std::vector<argtab::Support> out;
    for (auto& s : minimal_subsets<argtab::SupportElement>(elements, [&](const auto& sub) {
             const auto props = propositions(sub);
             return satisfiable(props) && entails(props, goal);
         }))
        out.emplace_back(std::move(s));
    return out;
}

/// Minimal subsets of `elements` whose propositions are inconsistent.
inline std::vector<argtab::Support> minimal_inconsistent(const std::vector<argtab::SupportElement>& elements)
{
    std::vector<argtab::Support> out;
    for (auto& s : minimal_subsets<argtab::SupportElement>(elements, [&](const auto& sub) { return !satisfiable(propositions(sub)); }))
        out.emplace_back(std::move(s));
    return out;
}

/// Supporting elements obtainable by repeatedly applying rules to minimal
/// consistent supports of their antecedents, starting from the premises,
/// up to the given nesting depth of rule applications.
inline std::vector<argtab::SupportElement> closure_elements(const argtab::KnowledgeBase& kb, int depth_cap)
{
    std::vector<argtab::SupportElement> els;
    for (const auto& s : kb.sigma) els.push_back(argtab::SupportElement::premise(s));
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& rule : kb.rules) {
            const argtab::GroundRuleInstance inst(rule, {});
            for (const auto& s : minimal_consistent_supports(els, inst.antecedent())) {
                auto el = argtab::SupportElement::rule_application(s, inst);
                if (el.rule_depth() > depth_cap || std::find(els.begin(), els.end(), el) != els.end()) continue;
                els.push_back(std::move(el));
                grew = true;
            }
        }
    }
    return els;
}

/// Every minimal argument for `goal` with a consistent support, built
/// directly from the definition rather than through a tableau.
inline std::set<std::string> minimal_argument_keys(const argtab::KnowledgeBase& kb, const Formula& goal, int depth_cap)
{
    std::set<std::string> out;
    for (const auto& s : minimal_consistent_supports(closure_elements(kb, depth_cap), goal))
        out.insert(argtab::Argument{s, goal}.key());
    return out;
}

struct Random {
    explicit Random(std::uint32_t seed) : gen(seed) {}
    std::mt19937 gen;

    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen); }
    bool chance(double p) { return std::bernoulli_distribution(p)(gen); }

    Formula atom(int atoms)
    {
        static const char* names[] = {"p", "q", "r", "s", "t", "u", "v", "w"};
        return Formula::atom(names[below(std::min(atoms, 8))]);
    }
    Formula literal(int atoms)
    {
        Formula a = atom(atoms);
        return chance(0.35) ? Formula::negation(a) : a;
    }
    Formula formula(int atoms, int depth)
    {
        if (depth == 0 || chance(0.3)) return literal(atoms);
        switch (below(5)) {
        case 0: return Formula::negation(formula(atoms, depth - 1));
        case 1: return Formula::conjunction(formula(atoms, depth - 1), formula(atoms, depth - 1));
        case 2: return Formula::disjunction(formula(atoms, depth - 1), formula(atoms, depth - 1));
        case 3: return Formula::implication(formula(atoms, depth - 1), formula(atoms, depth - 1));
        default: return Formula::equivalence(formula(atoms, depth - 1), formula(atoms, depth - 1));
        }
    }
    /// A formula whose main connective is ∨, → or ¬∧.
    Formula splittable(int atoms, int depth)
    {
        Formula a = formula(atoms, depth), b = formula(atoms, depth);
        switch (below(3)) {
        case 0: return Formula::disjunction(a, b);
        case 1: return Formula::implication(a, b);
        default: return Formula::negation(Formula::conjunction(a, b));
        }
    }

    argtab::KnowledgeBase kb(int atoms, int max_formulas, int max_rules, int depth = 2)
    {
        argtab::KnowledgeBase out;
        const int nf = 1 + below(max_formulas);
        for (int i = 0; i < nf; ++i) out.add_sigma(formula(atoms, depth));
        const int nr = max_rules > 0 ? below(max_rules + 1) : 0;
        for (int i = 0; i < nr; ++i) {
            Formula ante = chance(0.7) ? literal(atoms) : formula(atoms, 1);
            out.rules.emplace_back("d" + std::to_string(i), ante, literal(atoms));
        }
        return out;
    }
};

/// Whether the set `m` closes the tableau below node `n` on its own: at a
/// leaf the branch entries whose supports lie inside `m` must be jointly
/// unsatisfiable; a split on an entry supported inside `m` needs every child
/// to close, any other split needs one child.
inline bool realized(const argtab::Tableau& t, int n, const argtab::Support& m)
{
    const auto& nd = t.node(n);
    if (nd.children.empty()) {
        std::vector<Formula> fs;
        for (const auto& e : t.branch(n).entries)
            if (m.includes(e.support())) fs.push_back(e.formula());
        return !satisfiable(fs);
    }
    if (nd.children.size() == 1) return realized(t, nd.children.front(), m);
    const bool need_all = m.includes(nd.rewrite->entry.support());
    for (int c : nd.children) {
        const bool r = realized(t, c, m);
        if (need_all && !r) return false;
        if (!need_all && r) return true;
    }
    return need_all;
}

/// Grounded extension as the least fixpoint of S ↦ {a | every attacker of a
/// is attacked by S}, iterated from the empty set.
inline std::set<int> grounded_reference(int n, const std::set<std::pair<int, int>>& att)
{
    std::set<int> s;
    for (;;) {
        std::set<int> next;
        for (int a = 0; a < n; ++a) {
            bool defended = true;
            for (int b = 0; b < n && defended; ++b) {
                if (!att.count({b, a})) continue;
                bool countered = false;
                for (int c : s) countered = countered || att.count({c, b});
                defended = countered;
            }
            if (defended) next.insert(a);
        }
        if (next == s) return s;
        s = std::move(next);
    }
}

/// Stable or preferred extensions by checking every subset with sets.
inline std::set<std::set<int>> extensions_reference(int n, const std::set<std::pair<int, int>>& att, bool stable)
{
    std::vector<std::set<int>> admissible;
    std::set<std::set<int>> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        std::set<int> s;
        for (int i = 0; i < n; ++i)
            if (m >> i & 1u) s.insert(i);
        bool conflict_free = true;
        for (int a : s)
            for (int b : s) conflict_free = conflict_free && !att.count({a, b});
        if (!conflict_free) continue;
        const auto attacked = [&](int x) {
            return std::any_of(s.begin(), s.end(), [&](int a) { return att.count({a, x}) > 0; });
        };
        if (stable) {
            bool all = true;
            for (int x = 0; x < n; ++x) all = all && (s.count(x) || attacked(x));
            if (all) out.insert(s);
            continue;
        }
        bool defended = true;
        for (int a : s)
            for (int b = 0; b < n; ++b)
                if (att.count({b, a}) && !attacked(b)) defended = false;
        if (defended) admissible.push_back(s);
    }
    if (!stable) {
        for (const auto& s : admissible) {
            const bool maximal = std::none_of(admissible.begin(), admissible.end(), [&](const std::set<int>& t) {
                return t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end());
            });
            if (maximal) out.insert(s);
        }
    }
    return out;
}

} // namespace oracle
