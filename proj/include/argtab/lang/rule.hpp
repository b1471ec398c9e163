#pragma once

#include "argtab/lang/formula.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace argtab {

/// Variable bindings, sorted by variable name.
using Substitution = std::vector<std::pair<std::string, Term>>;

inline Formula substitute_all(const Formula& f, const Substitution& s)
{
    Formula out = f;
    for (const auto& [var, value] : s) out = out.substitute(var, value);
    return out;
}

inline std::string render_substitution(const Substitution& s)
{
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += s[i].first + "=" + s[i].second.render();
    }
    return out;
}

/// Identity of one ground instance of a rule: schema id plus bindings.
struct RuleRef {
    std::string origin;
    Substitution bindings;
    /// Human readable `antecedent ~> consequent` of the instance.
    std::string text;

    std::string key() const
    {
        return bindings.empty() ? origin : origin + "[" + render_substitution(bindings) + "]";
    }

    friend bool operator==(const RuleRef& a, const RuleRef& b) { return a.key() == b.key(); }
    friend bool operator<(const RuleRef& a, const RuleRef& b) { return a.key() < b.key(); }
};

/// `not(target)` on the right-hand side of an undercutting defeater.
struct NegatedRule {
    std::string target;
    Formula target_antecedent;
    /// Empty when the target is itself a defeater.
    std::optional<Formula> target_consequent;
    std::vector<std::string> target_variables;
};

/// φ ~> ψ with an identifier. Free variables make it a schema over ground
/// terms.
class DefeasibleRule {
public:
    using Consequent = std::variant<Formula, NegatedRule>;

    DefeasibleRule(std::string id, Formula antecedent, Consequent consequent)
        : id_(std::move(id)), antecedent_(std::move(antecedent)), consequent_(std::move(consequent))
    {
        std::set<std::string> vars = antecedent_.free_variables();
        if (const auto* f = std::get_if<Formula>(&consequent_))
            vars.insert(f->free_variables().begin(), f->free_variables().end());
        else
            for (const auto& v : std::get<NegatedRule>(consequent_).target_variables) vars.insert(v);
        free_vars_.assign(vars.begin(), vars.end());
    }

    const std::string& id() const { return id_; }
    const Formula& antecedent() const { return antecedent_; }
    const Consequent& consequent() const { return consequent_; }
    bool is_defeater() const { return std::holds_alternative<NegatedRule>(consequent_); }
    const std::vector<std::string>& free_variables() const { return free_vars_; }

private:
    std::string id_;
    Formula antecedent_;
    Consequent consequent_;
    std::vector<std::string> free_vars_;
};

inline std::string render_rule_text(const Formula& antecedent, const std::string& consequent)
{
    return render_formula(antecedent) + " ~> " + consequent;
}

/// A rule with all free variables bound.
class GroundRuleInstance {
public:
    using Consequent = std::variant<Formula, RuleRef>;

    GroundRuleInstance(const DefeasibleRule& rule, Substitution bindings)
    {
        auto d = std::make_shared<Data>();
        d->antecedent = substitute_all(rule.antecedent(), bindings);
        if (const auto* f = std::get_if<Formula>(&rule.consequent())) {
            d->consequent = substitute_all(*f, bindings);
        } else {
            const auto& neg = std::get<NegatedRule>(rule.consequent());
            RuleRef target;
            target.origin = neg.target;
            for (const auto& b : bindings)
                for (const auto& v : neg.target_variables)
                    if (v == b.first) target.bindings.push_back(b);
            const Formula ta = substitute_all(neg.target_antecedent, target.bindings);
            target.text = neg.target_consequent
                              ? render_rule_text(ta, render_formula(substitute_all(*neg.target_consequent, target.bindings)))
                              : render_rule_text(ta, "not(...)");
            d->consequent = std::move(target);
        }
        d->ref.origin = rule.id();
        d->ref.bindings = std::move(bindings);
        d->ref.text = render_rule_text(d->antecedent, consequent_text(d->consequent));
        d->key = d->ref.key();
        data_ = std::move(d);
    }

    const RuleRef& ref() const { return data_->ref; }
    const std::string& origin() const { return data_->ref.origin; }
    const Substitution& bindings() const { return data_->ref.bindings; }
    const Formula& antecedent() const { return data_->antecedent; }
    const Consequent& consequent() const { return data_->consequent; }
    bool is_defeater() const { return std::holds_alternative<RuleRef>(data_->consequent); }
    const std::string& key() const { return data_->key; }
    const std::string& text() const { return data_->ref.text; }

    friend bool operator==(const GroundRuleInstance& a, const GroundRuleInstance& b)
    {
        return a.data_ == b.data_ || a.key() == b.key();
    }
    friend bool operator<(const GroundRuleInstance& a, const GroundRuleInstance& b) { return a.key() < b.key(); }

    static std::string consequent_text(const Consequent& c)
    {
        if (const auto* f = std::get_if<Formula>(&c)) return render_formula(*f);
        return "not(" + std::get<RuleRef>(c).text + ")";
    }

private:
    struct Data {
        RuleRef ref;
        Formula antecedent = Formula::top();
        Consequent consequent = Formula::top();
        std::string key;
    };
    std::shared_ptr<const Data> data_;
};

/// All instances of `rule` obtained by mapping its free variables into
/// `terms`; |terms|^n of them for n variables. A rule without variables
/// yields itself.
inline std::vector<GroundRuleInstance> ground_instances(const DefeasibleRule& rule, const std::vector<Term>& terms)
{
    const auto& vars = rule.free_variables();
    if (vars.empty()) return {GroundRuleInstance(rule, {})};
    if (terms.empty()) return {};

    std::vector<GroundRuleInstance> out;
    std::vector<std::size_t> odometer(vars.size(), 0);
    for (;;) {
        Substitution s;
        s.reserve(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) s.emplace_back(vars[i], terms[odometer[i]]);
        out.emplace_back(rule, std::move(s));

        std::size_t pos = vars.size();
        while (pos > 0) {
            --pos;
            if (++odometer[pos] < terms.size()) break;
            odometer[pos] = 0;
            if (pos == 0) return out;
        }
    }
}

} // namespace argtab
