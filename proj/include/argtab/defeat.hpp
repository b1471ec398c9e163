#pragma once

#include "argtab/arguments.hpp"
#include "argtab/lang/knowledge_base.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace argtab {

using Culprit = std::variant<GroundRuleInstance, Formula>;

struct UndercutArgument {
    Argument argument;
    Culprit culprit;
    /// The ⊥ argument it was obtained from.
    Argument source;
};

/// Undercutting arguments obtained from a test-free argument for ⊥ by
/// dropping a weakest last rule, or a weakest premise when no rule is used.
inline std::vector<UndercutArgument> undercut(const Argument& a, const PreferenceOrder& prefs)
{
    if (!a.concludes_falsum()) throw std::invalid_argument("undercut needs an argument for false");
    if (a.support.test_count() != 0) throw std::invalid_argument("undercut needs a support without tests");

    std::vector<UndercutArgument> out;
    std::vector<SupportElement> last;
    for (const auto& e : a.support)
        if (e.is_rule_application()) last.push_back(e);

    if (!last.empty()) {
        const auto weakest = minimal_elements(last, [&](const SupportElement& x, const SupportElement& y) {
            return prefs.rule_less(x.rule().origin(), y.rule().origin());
        });
        for (const auto& e : weakest)
            out.push_back({{a.support.without(e), NegatedRuleClaim{e.rule().ref()}}, e.rule(), a});
        return out;
    }
    std::vector<SupportElement> premises;
    for (const auto& e : a.support)
        if (e.is_premise()) premises.push_back(e);
    const auto weakest = minimal_elements(premises, [&](const SupportElement& x, const SupportElement& y) {
        return prefs.formula_less(x.formula(), y.formula());
    });
    for (const auto& e : weakest)
        out.push_back({{a.support.without(e), NegatedPremiseClaim{e.formula()}}, e.formula(), a});
    return out;
}

/// A negated-rule claim hits an instance when the origins agree and every
/// binding of the claim occurs in the instance; unbound variables of the
/// claim act as wildcards.
inline bool rule_claim_matches(const RuleRef& claim, const GroundRuleInstance& inst)
{
    if (claim.origin != inst.origin()) return false;
    for (const auto& b : claim.bindings)
        if (std::find(inst.bindings().begin(), inst.bindings().end(), b) == inst.bindings().end()) return false;
    return true;
}

inline bool attacks(const Argument& attacker, const Argument& target)
{
    if (const auto* r = std::get_if<NegatedRuleClaim>(&attacker.conclusion)) {
        const auto v = views_of_support(target.support);
        return std::any_of(v.rules.begin(), v.rules.end(), [&](const GroundRuleInstance& g) { return rule_claim_matches(r->rule, g); });
    }
    if (const auto* p = std::get_if<NegatedPremiseClaim>(&attacker.conclusion))
        return views_of_support(target.support).premises.count(p->premise) > 0;
    return false;
}

struct AttackGraph {
    std::vector<Argument> arguments;
    std::vector<std::pair<int, int>> attacks;
    /// Undercutters in the order they were generated, with their origin.
    std::vector<UndercutArgument> undercutters;
    /// ⊥ arguments kept for reporting; they are not nodes of the graph.
    std::vector<Argument> conflicts;

    int size() const { return static_cast<int>(arguments.size()); }

    int index_of(const Argument& a) const
    {
        for (int i = 0; i < size(); ++i)
            if (arguments[static_cast<std::size_t>(i)] == a) return i;
        return -1;
    }

    std::vector<int> attackers_of(int target) const
    {
        std::vector<int> out;
        for (const auto& [a, b] : attacks)
            if (b == target) out.push_back(a);
        return out;
    }

    int add_argument(const Argument& a)
    {
        const int i = index_of(a);
        if (i >= 0) return i;
        arguments.push_back(a);
        return size() - 1;
    }
};

/// Builds the framework from a pool: ⊥ arguments are turned into
/// undercutters, everything else enters as is, and attacks follow the
/// culprit's membership in the target's rules or premises.
inline AttackGraph build_af(const std::vector<Argument>& pool, const PreferenceOrder& prefs)
{
    AttackGraph g;
    for (const auto& a : pool) {
        if (!a.concludes_falsum()) {
            g.add_argument(a);
            continue;
        }
        g.conflicts.push_back(a);
        if (a.support.test_count() != 0) continue;
        for (auto& u : undercut(a, prefs)) {
            g.add_argument(u.argument);
            g.undercutters.push_back(std::move(u));
        }
    }
    for (int i = 0; i < g.size(); ++i) {
        const auto& attacker = g.arguments[static_cast<std::size_t>(i)];
        if (!attacker.is_undercutter()) continue;
        for (int j = 0; j < g.size(); ++j)
            if (attacks(attacker, g.arguments[static_cast<std::size_t>(j)])) g.attacks.emplace_back(i, j);
    }
    return g;
}

enum class Semantics { Grounded, Stable, Preferred };

inline std::string semantics_name(Semantics s)
{
    switch (s) {
    case Semantics::Grounded: return "grounded";
    case Semantics::Stable: return "stable";
    case Semantics::Preferred: return "preferred";
    }
    return "";
}

struct Extension {
    Semantics semantics;
    std::vector<int> members;

    bool contains(int i) const { return std::binary_search(members.begin(), members.end(), i); }
};

/// Least fixpoint of the characteristic function: accept arguments whose
/// attackers are all defeated, defeat what accepted arguments attack.
inline Extension grounded(const AttackGraph& g)
{
    const int n = g.size();
    std::vector<std::vector<int>> attackers(static_cast<std::size_t>(n));
    for (const auto& [a, b] : g.attacks) attackers[static_cast<std::size_t>(b)].push_back(a);
    enum Label { Undecided, In, Out };
    std::vector<Label> label(static_cast<std::size_t>(n), Undecided);
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            auto& l = label[static_cast<std::size_t>(i)];
            if (l != Undecided) continue;
            const auto& att = attackers[static_cast<std::size_t>(i)];
            if (std::all_of(att.begin(), att.end(), [&](int a) { return label[static_cast<std::size_t>(a)] == Out; })) {
                l = In;
                changed = true;
            } else if (std::any_of(att.begin(), att.end(), [&](int a) { return label[static_cast<std::size_t>(a)] == In; })) {
                l = Out;
                changed = true;
            }
        }
    }
    Extension e{Semantics::Grounded, {}};
    for (int i = 0; i < n; ++i)
        if (label[static_cast<std::size_t>(i)] == In) e.members.push_back(i);
    return e;
}

/// Brute-force stable or preferred extensions over all subsets; graphs
/// larger than `cap` arguments are refused.
inline std::vector<Extension> enumerate_extensions(const AttackGraph& g, Semantics sem, int cap = 20)
{
    if (sem == Semantics::Grounded) return {grounded(g)};
    const int n = g.size();
    if (n > cap || n > 30) throw std::length_error("attack graph has " + std::to_string(n) + " arguments, above the cap of " + std::to_string(cap));

    std::vector<std::uint32_t> out_mask(static_cast<std::size_t>(n), 0), in_mask(static_cast<std::size_t>(n), 0);
    for (const auto& [a, b] : g.attacks) {
        out_mask[static_cast<std::size_t>(a)] |= 1u << b;
        in_mask[static_cast<std::size_t>(b)] |= 1u << a;
    }
    const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1;
    const auto attacked_by = [&](std::uint32_t s) {
        std::uint32_t m = 0;
        for (int i = 0; i < n; ++i)
            if (s >> i & 1u) m |= out_mask[static_cast<std::size_t>(i)];
        return m;
    };

    std::vector<std::uint32_t> found;
    for (std::uint32_t s = 0;; ++s) {
        const std::uint32_t hit = attacked_by(s);
        if ((hit & s) == 0) {
            if (sem == Semantics::Stable) {
                if ((s | hit) == all) found.push_back(s);
            } else {
                bool defended = true;
                for (int i = 0; i < n && defended; ++i)
                    if (s >> i & 1u) defended = (in_mask[static_cast<std::size_t>(i)] & ~hit) == 0;
                if (defended) found.push_back(s);
            }
        }
        if (s == all) break;
    }
    if (sem == Semantics::Preferred) {
        std::vector<std::uint32_t> maximal;
        for (auto s : found) {
            const bool dominated = std::any_of(found.begin(), found.end(), [&](std::uint32_t t) { return t != s && (s & t) == s; });
            if (!dominated) maximal.push_back(s);
        }
        found = std::move(maximal);
    }
    std::vector<Extension> out;
    for (auto s : found) {
        Extension e{sem, {}};
        for (int i = 0; i < n; ++i)
            if (s >> i & 1u) e.members.push_back(i);
        out.push_back(std::move(e));
    }
    return out;
}

enum class Status { Justified, Defensible, Overruled };

inline std::string status_name(Status s)
{
    switch (s) {
    case Status::Justified: return "justified";
    case Status::Defensible: return "defensible";
    case Status::Overruled: return "overruled";
    }
    return "";
}

struct ConclusionStatus {
    Formula conclusion;
    Status status;
    /// Indices of the arguments for the conclusion.
    std::vector<int> arguments;
};

/// Status of each conclusion. Under grounded semantics a conclusion is
/// justified when one of its arguments is in the extension and defensible
/// when one is at least not attacked by it. Under stable and preferred it is
/// justified when one argument sits in every extension (there must be one)
/// and defensible when some extension holds an argument for it.
inline std::vector<ConclusionStatus> justified_conclusions(const AttackGraph& g, Semantics sem,
                                                           const std::vector<Formula>& conclusions)
{
    const auto exts = enumerate_extensions(g, sem);
    std::vector<ConclusionStatus> out;
    for (const auto& c : conclusions) {
        ConclusionStatus cs{c, Status::Overruled, {}};
        for (int i = 0; i < g.size(); ++i) {
            const auto* f = g.arguments[static_cast<std::size_t>(i)].formula_conclusion();
            if (f && *f == c) cs.arguments.push_back(i);
        }
        if (sem == Semantics::Grounded) {
            const Extension& e = exts.front();
            std::set<int> hit;
            for (const auto& [a, b] : g.attacks)
                if (e.contains(a)) hit.insert(b);
            for (int i : cs.arguments) {
                if (e.contains(i)) cs.status = Status::Justified;
                else if (!hit.count(i) && cs.status == Status::Overruled) cs.status = Status::Defensible;
            }
        } else {
            for (int i : cs.arguments) {
                const bool everywhere = !exts.empty() && std::all_of(exts.begin(), exts.end(), [&](const Extension& e) { return e.contains(i); });
                const bool somewhere = std::any_of(exts.begin(), exts.end(), [&](const Extension& e) { return e.contains(i); });
                if (everywhere) cs.status = Status::Justified;
                else if (somewhere && cs.status == Status::Overruled) cs.status = Status::Defensible;
            }
        }
        out.push_back(std::move(cs));
    }
    return out;
}

/// Formula conclusions of the graph's arguments, in canonical order.
inline std::vector<Formula> formula_conclusions(const AttackGraph& g)
{
    std::set<Formula> out;
    for (const auto& a : g.arguments)
        if (const auto* f = a.formula_conclusion()) out.insert(*f);
    return {out.begin(), out.end()};
}

/// Abstract framework in the `arg(a1). att(a1,a2).` text format.
inline std::string export_apx(const AttackGraph& g)
{
    std::ostringstream out;
    for (int i = 0; i < g.size(); ++i) out << "arg(a" << i + 1 << ").\n";
    for (const auto& [a, b] : g.attacks) out << "att(a" << a + 1 << ",a" << b + 1 << ").\n";
    return out.str();
}

} // namespace argtab
