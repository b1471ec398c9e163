#pragma once

#include "argtab/lang/formula.hpp"
#include "argtab/lang/rule.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace argtab {

/// One side of a preference statement: a rule id or a formula of Σ.
using PrefAtom = std::variant<std::string, Formula>;

inline std::string pref_atom_key(const PrefAtom& a)
{
    if (const auto* id = std::get_if<std::string>(&a)) return "rule:" + *id;
    return "formula:" + std::get<Formula>(a).key();
}

inline std::string render_pref_atom(const PrefAtom& a)
{
    if (const auto* id = std::get_if<std::string>(&a)) return *id;
    return "[" + render_formula(std::get<Formula>(a)) + "]";
}

/// Strict partial order over rule ids and Σ formulas, stored as its
/// transitive closure. `less(a, b)` reads "a is weaker than b".
class PreferenceOrder {
public:
    PreferenceOrder() = default;

    /// Throws std::invalid_argument when the closure relates some x < x.
    explicit PreferenceOrder(const std::vector<std::pair<PrefAtom, PrefAtom>>& pairs)
    {
        std::set<std::string> nodes;
        for (const auto& [a, b] : pairs) {
            const auto ka = pref_atom_key(a), kb = pref_atom_key(b);
            below_[kb].insert(ka);
            nodes.insert(ka);
            nodes.insert(kb);
        }
        // Floyd-Warshall style closure; preference sets are tiny.
        for (const auto& k : nodes)
            for (const auto& i : nodes)
                if (below_[i].count(k))
                    for (const auto& j : std::set<std::string>(below_[k])) below_[i].insert(j);
        for (const auto& n : nodes)
            if (below_[n].count(n)) throw std::invalid_argument("preference cycle through " + n);
    }

    bool less(const std::string& weaker_key, const std::string& stronger_key) const
    {
        auto it = below_.find(stronger_key);
        return it != below_.end() && it->second.count(weaker_key);
    }
    bool rule_less(const std::string& a, const std::string& b) const { return less("rule:" + a, "rule:" + b); }
    bool formula_less(const Formula& a, const Formula& b) const
    {
        return less("formula:" + a.key(), "formula:" + b.key());
    }

    bool empty() const
    {
        return std::all_of(below_.begin(), below_.end(), [](const auto& e) { return e.second.empty(); });
    }

private:
    std::map<std::string, std::set<std::string>> below_;
};

/// Elements of `items` with no strictly smaller element among `items`.
template <typename T, typename Less>
std::vector<T> minimal_elements(const std::vector<T>& items, Less less)
{
    std::vector<T> out;
    for (const auto& x : items) {
        const bool dominated = std::any_of(items.begin(), items.end(), [&](const T& y) { return less(y, x); });
        if (!dominated) out.push_back(x);
    }
    return out;
}

struct KnowledgeBase {
    std::vector<Formula> sigma;
    std::vector<DefeasibleRule> rules;
    std::vector<std::pair<PrefAtom, PrefAtom>> preference_pairs;
    PreferenceOrder preferences;
    std::vector<Formula> queries;

    const DefeasibleRule* find_rule(const std::string& id) const
    {
        for (const auto& r : rules)
            if (r.id() == id) return &r;
        return nullptr;
    }

    bool in_sigma(const Formula& f) const { return std::find(sigma.begin(), sigma.end(), f) != sigma.end(); }

    bool is_propositional() const
    {
        auto prop = [](const Formula& f) { return f.is_propositional(); };
        return std::all_of(sigma.begin(), sigma.end(), prop) && std::all_of(queries.begin(), queries.end(), prop) &&
               std::all_of(rules.begin(), rules.end(), [&](const DefeasibleRule& r) {
                   if (!r.antecedent().is_propositional()) return false;
                   const auto* f = std::get_if<Formula>(&r.consequent());
                   return !f || f->is_propositional();
               });
    }

    /// Ground terms occurring anywhere in the knowledge base.
    std::set<Term> ground_terms() const
    {
        std::set<Term> out;
        for (const auto& f : sigma) f.collect_ground_terms(out);
        for (const auto& f : queries) f.collect_ground_terms(out);
        for (const auto& r : rules) {
            r.antecedent().collect_ground_terms(out);
            if (const auto* f = std::get_if<Formula>(&r.consequent())) f->collect_ground_terms(out);
        }
        return out;
    }

    void add_sigma(const Formula& f)
    {
        if (!in_sigma(f)) sigma.push_back(f);
    }
};

} // namespace argtab
