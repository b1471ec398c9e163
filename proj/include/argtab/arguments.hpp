#pragma once

#include "argtab/lang/formula.hpp"
#include "argtab/lang/rule.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace argtab {

class Support;

/// Member of a support: a premise from Σ, a test `¬φ?`, or a rule
/// application `(S, φ ~> ψ)` whose inner support backs the antecedent.
class SupportElement {
public:
    enum class Kind { Premise, Test, RuleApplication };

    static SupportElement premise(Formula f);
    /// `formula` is the tested entry itself, i.e. ¬φ when proving φ.
    static SupportElement test(Formula formula, int id);
    static SupportElement rule_application(Support inner, GroundRuleInstance rule);

    Kind kind() const;
    bool is_premise() const { return kind() == Kind::Premise; }
    bool is_test() const { return kind() == Kind::Test; }
    bool is_rule_application() const { return kind() == Kind::RuleApplication; }

    /// Premise or test formula.
    const Formula& formula() const;
    int test_id() const;
    const Support& inner() const;
    const GroundRuleInstance& rule() const;
    const std::string& key() const;

    /// Proposition this element contributes to the supporting propositions
    /// Ŝ; defeater applications contribute nothing.
    std::optional<Formula> proposition() const;

    /// Depth of nested rule applications (0 for premises and tests).
    int rule_depth() const;

    friend bool operator==(const SupportElement& a, const SupportElement& b)
    {
        return a.node_ == b.node_ || a.key() == b.key();
    }
    friend bool operator!=(const SupportElement& a, const SupportElement& b) { return !(a == b); }
    friend bool operator<(const SupportElement& a, const SupportElement& b) { return a.key() < b.key(); }

private:
    struct Node;
    explicit SupportElement(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Canonical set of supporting elements (sorted by key, no duplicates).
class Support {
public:
    Support() = default;
    Support(std::initializer_list<SupportElement> items) : Support(std::vector<SupportElement>(items)) {}
    explicit Support(std::vector<SupportElement> items) : items_(std::move(items))
    {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }

    const std::vector<SupportElement>& elements() const { return items_; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    bool contains(const SupportElement& e) const { return std::binary_search(items_.begin(), items_.end(), e); }
    bool includes(const Support& sub) const
    {
        return sub.size() <= size() && std::includes(items_.begin(), items_.end(), sub.items_.begin(), sub.items_.end());
    }

    Support unite(const Support& other) const
    {
        Support out;
        out.items_.reserve(size() + other.size());
        std::set_union(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
                       std::back_inserter(out.items_));
        return out;
    }
    Support without(const SupportElement& e) const
    {
        Support out;
        out.items_.reserve(size());
        for (const auto& x : items_)
            if (x != e) out.items_.push_back(x);
        return out;
    }
    Support without_tests() const
    {
        Support out;
        for (const auto& x : items_)
            if (!x.is_test()) out.items_.push_back(x);
        return out;
    }

    std::vector<SupportElement> tests() const
    {
        std::vector<SupportElement> out;
        for (const auto& x : items_)
            if (x.is_test()) out.push_back(x);
        return out;
    }
    std::size_t test_count() const
    {
        return static_cast<std::size_t>(std::count_if(items_.begin(), items_.end(), [](const auto& x) { return x.is_test(); }));
    }
    bool has_rule_application() const
    {
        return std::any_of(items_.begin(), items_.end(), [](const auto& x) { return x.is_rule_application(); });
    }

    /// Ŝ: the propositions the elements contribute, in canonical order.
    std::vector<Formula> propositions() const
    {
        std::set<Formula> out;
        for (const auto& x : items_)
            if (auto p = x.proposition()) out.insert(*p);
        return {out.begin(), out.end()};
    }

    std::string key() const
    {
        std::string k = "{";
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (i) k += ",";
            k += items_[i].key();
        }
        return k + "}";
    }

    friend bool operator==(const Support& a, const Support& b) { return a.items_ == b.items_; }
    friend bool operator!=(const Support& a, const Support& b) { return !(a == b); }
    friend bool operator<(const Support& a, const Support& b) { return a.items_ < b.items_; }

private:
    std::vector<SupportElement> items_;
};

struct SupportElement::Node {
    Kind kind;
    std::optional<Formula> formula;
    int test_id = -1;
    Support inner;
    std::optional<GroundRuleInstance> rule;
    std::string key;
    int depth = 0;
};

inline SupportElement SupportElement::premise(Formula f)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Premise;
    n->key = "0" + f.key();
    n->formula = std::move(f);
    return SupportElement(std::move(n));
}

inline SupportElement SupportElement::test(Formula formula, int id)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::Test;
    n->test_id = id;
    n->key = "1#" + std::to_string(id) + ":" + formula.key();
    n->formula = std::move(formula);
    return SupportElement(std::move(n));
}

inline SupportElement SupportElement::rule_application(Support inner, GroundRuleInstance rule)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::RuleApplication;
    n->key = "2" + rule.key() + "@" + inner.key();
    for (const auto& x : inner) n->depth = std::max(n->depth, x.rule_depth());
    n->depth += 1;
    n->inner = std::move(inner);
    n->rule = std::move(rule);
    return SupportElement(std::move(n));
}

inline SupportElement::Kind SupportElement::kind() const { return node_->kind; }
inline const Formula& SupportElement::formula() const { return node_->formula.value(); }
inline int SupportElement::test_id() const { return node_->test_id; }
inline const Support& SupportElement::inner() const { return node_->inner; }
inline const GroundRuleInstance& SupportElement::rule() const { return node_->rule.value(); }
inline const std::string& SupportElement::key() const { return node_->key; }
inline int SupportElement::rule_depth() const { return node_->depth; }

inline std::optional<Formula> SupportElement::proposition() const
{
    if (!is_rule_application()) return formula();
    if (const auto* f = std::get_if<Formula>(&rule().consequent())) return *f;
    return std::nullopt;
}

/// ⊥ as a conclusion.
struct Falsum {
    friend bool operator==(Falsum, Falsum) { return true; }
};
/// not(φ ~> ψ): the rule instance must not be applied.
struct NegatedRuleClaim {
    RuleRef rule;
    friend bool operator==(const NegatedRuleClaim& a, const NegatedRuleClaim& b) { return a.rule == b.rule; }
};
/// not(σ): the premise must not be used.
struct NegatedPremiseClaim {
    Formula premise;
    friend bool operator==(const NegatedPremiseClaim& a, const NegatedPremiseClaim& b) { return a.premise == b.premise; }
};

using Conclusion = std::variant<Formula, Falsum, NegatedRuleClaim, NegatedPremiseClaim>;

inline std::string conclusion_key(const Conclusion& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Formula>) return v.key();
            else if constexpr (std::is_same_v<T, Falsum>) return "#bottom";
            else if constexpr (std::is_same_v<T, NegatedRuleClaim>) return "#not-rule:" + v.rule.key();
            else return "#not-premise:" + v.premise.key();
        },
        c);
}

inline std::string render_conclusion(const Conclusion& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Formula>) return render_formula(v);
            else if constexpr (std::is_same_v<T, Falsum>) return "false";
            else if constexpr (std::is_same_v<T, NegatedRuleClaim>) return "not(" + v.rule.text + ")";
            else return "not(" + render_formula(v.premise) + ")";
        },
        c);
}

/// A couple (support, conclusion).
struct Argument {
    Support support;
    Conclusion conclusion;

    bool concludes_falsum() const { return std::holds_alternative<Falsum>(conclusion); }
    bool is_undercutter() const
    {
        return std::holds_alternative<NegatedRuleClaim>(conclusion) || std::holds_alternative<NegatedPremiseClaim>(conclusion);
    }
    const Formula* formula_conclusion() const { return std::get_if<Formula>(&conclusion); }

    std::string key() const { return support.key() + "=>" + conclusion_key(conclusion); }

    friend bool operator==(const Argument& a, const Argument& b) { return a.key() == b.key(); }
    friend bool operator<(const Argument& a, const Argument& b) { return a.key() < b.key(); }
};

/// Equality treating supports as sets at every nesting level.
inline bool equal_modulo_support_order(const Argument& a, const Argument& b) { return a == b; }

/// Derived views of an argument: premises, rules, last rules, conclusion and
/// supporting propositions.
struct ArgumentViews {
    std::set<Formula> premises;
    std::set<GroundRuleInstance> rules;
    std::set<GroundRuleInstance> last_rules;
    Conclusion conclusion = Falsum{};
    std::set<Formula> supporting_props;
};

namespace detail {

inline void accumulate_views(const Support& s, ArgumentViews& v)
{
    for (const auto& e : s) {
        switch (e.kind()) {
        case SupportElement::Kind::Premise:
            v.premises.insert(e.formula());
            v.supporting_props.insert(e.formula());
            break;
        case SupportElement::Kind::Test:
            v.supporting_props.insert(e.formula());
            break;
        case SupportElement::Kind::RuleApplication: {
            ArgumentViews inner;
            accumulate_views(e.inner(), inner);
            v.premises.insert(inner.premises.begin(), inner.premises.end());
            v.rules.insert(inner.rules.begin(), inner.rules.end());
            v.rules.insert(e.rule());
            v.last_rules.insert(e.rule());
            if (auto p = e.proposition()) v.supporting_props.insert(*p);
            break;
        }
        }
    }
}

} // namespace detail

inline ArgumentViews views_of_support(const Support& s)
{
    ArgumentViews v;
    detail::accumulate_views(s, v);
    return v;
}

inline ArgumentViews views(const Argument& a)
{
    ArgumentViews v = views_of_support(a.support);
    v.conclusion = a.conclusion;
    return v;
}

/// Decides premises ⊢ goal; a goal of `false` asks for unsatisfiability.
using EntailmentOracle = std::function<bool(const std::vector<Formula>& premises, const Formula& goal)>;

/// Removes supporting elements until the support is minimal for `goal`,
/// after recursively minimizing nested rule applications against their
/// antecedents.
inline Support minimize_support(const Support& s, const Formula& goal, const EntailmentOracle& entails)
{
    std::vector<SupportElement> nested;
    nested.reserve(s.size());
    for (const auto& e : s) {
        if (e.is_rule_application())
            nested.push_back(SupportElement::rule_application(minimize_support(e.inner(), e.rule().antecedent(), entails), e.rule()));
        else
            nested.push_back(e);
    }
    Support current(std::move(nested));
    for (const auto& e : std::vector<SupportElement>(current.elements())) {
        Support candidate = current.without(e);
        if (entails(candidate.propositions(), goal)) current = std::move(candidate);
    }
    return current;
}

/// Minimal argument with the same conclusion. Undercutting conclusions are
/// returned unchanged since they are not propositions of the language.
inline Argument minimize(const Argument& a, const EntailmentOracle& entails)
{
    if (const auto* f = a.formula_conclusion()) return {minimize_support(a.support, *f, entails), a.conclusion};
    if (a.concludes_falsum()) return {minimize_support(a.support, Formula::bottom(), entails), a.conclusion};
    return a;
}

std::string render_support(const Support& s);

inline std::string render_element(const SupportElement& e)
{
    switch (e.kind()) {
    case SupportElement::Kind::Premise: return render_formula(e.formula());
    case SupportElement::Kind::Test: return render_formula(e.formula()) + "?";
    case SupportElement::Kind::RuleApplication: return "(" + render_support(e.inner()) + ", " + e.rule().text() + ")";
    }
    return {};
}

/// Set notation, e.g. `{({p | q, ~q}, p ~> r)}`.
inline std::string render_support(const Support& s)
{
    std::string out = "{";
    bool first = true;
    for (const auto& e : s) {
        if (!first) out += ", ";
        first = false;
        out += render_element(e);
    }
    return out + "}";
}

inline std::string render_argument(const Argument& a)
{
    return "(" + render_support(a.support) + ", " + render_conclusion(a.conclusion) + ")";
}

} // namespace argtab
