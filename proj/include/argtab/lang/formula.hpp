#pragma once

#include "argtab/lang/term.hpp"

#include <cassert>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace argtab {

/// Proposition of the object language: propositional connectives plus
/// first-order quantifiers. A propositional atom is a predicate with no
/// arguments.
class Formula {
public:
    enum class Kind { True, False, Atom, Not, And, Or, Implies, Iff, ForAll, Exists };

    static Formula top() { return Formula(make(Kind::True, {}, {}, {})); }
    static Formula bottom() { return Formula(make(Kind::False, {}, {}, {})); }
    static Formula atom(std::string predicate, std::vector<Term> args = {})
    {
        return Formula(make(Kind::Atom, std::move(predicate), std::move(args), {}));
    }
    static Formula negation(Formula f) { return Formula(make(Kind::Not, {}, {}, {std::move(f)})); }
    static Formula conjunction(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
    static Formula disjunction(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }
    static Formula implication(Formula a, Formula b) { return binary(Kind::Implies, std::move(a), std::move(b)); }
    static Formula equivalence(Formula a, Formula b) { return binary(Kind::Iff, std::move(a), std::move(b)); }
    static Formula forall(std::string var, Formula body)
    {
        return Formula(make(Kind::ForAll, std::move(var), {}, {std::move(body)}));
    }
    static Formula exists(std::string var, Formula body)
    {
        return Formula(make(Kind::Exists, std::move(var), {}, {std::move(body)}));
    }

    Kind kind() const { return node_->kind; }
    /// Predicate name for atoms, bound variable for quantifiers.
    const std::string& symbol() const { return node_->symbol; }
    const std::vector<Term>& args() const { return node_->args; }
    const Formula& operand() const { return node_->children.at(0); }
    const Formula& left() const { return node_->children.at(0); }
    const Formula& right() const { return node_->children.at(1); }
    const std::string& key() const { return node_->key; }

    bool is(Kind k) const { return kind() == k; }
    bool is_binary() const
    {
        return is(Kind::And) || is(Kind::Or) || is(Kind::Implies) || is(Kind::Iff);
    }
    bool is_quantifier() const { return is(Kind::ForAll) || is(Kind::Exists); }

    /// Atoms, ⊤, ⊥ and their negations.
    bool is_literal() const
    {
        const Formula& f = is(Kind::Not) ? operand() : *this;
        return f.is(Kind::Atom) || f.is(Kind::True) || f.is(Kind::False);
    }

    bool is_closed() const { return node_->free_vars.empty(); }
    const std::set<std::string>& free_variables() const { return node_->free_vars; }

    /// True when the formula uses no quantifiers and only 0-ary predicates.
    bool is_propositional() const { return node_->propositional; }

    /// φ[var/value] for free occurrences of `var`.
    Formula substitute(const std::string& var, const Term& value) const
    {
        if (!node_->free_vars.count(var)) return *this;
        switch (kind()) {
        case Kind::Atom: {
            std::vector<Term> out;
            out.reserve(args().size());
            for (const auto& a : args()) out.push_back(a.substitute(var, value));
            return atom(symbol(), std::move(out));
        }
        case Kind::Not:
            return negation(operand().substitute(var, value));
        case Kind::ForAll:
        case Kind::Exists:
            if (symbol() == var) return *this;
            return Formula(make(kind(), symbol(), {}, {operand().substitute(var, value)}));
        default:
            if (is_binary())
                return binary(kind(), left().substitute(var, value), right().substitute(var, value));
            return *this;
        }
    }

    void collect_ground_terms(std::set<Term>& out) const
    {
        for (const auto& a : args()) a.collect_ground_subterms(out);
        for (const auto& c : node_->children) c.collect_ground_terms(out);
    }

    /// Collects (symbol, arity) of every predicate occurrence.
    void collect_predicates(std::set<std::pair<std::string, std::size_t>>& out) const
    {
        if (is(Kind::Atom)) out.emplace(symbol(), args().size());
        for (const auto& c : node_->children) c.collect_predicates(out);
    }

    void collect_atoms(std::set<Formula>& out) const
    {
        if (is(Kind::Atom)) out.insert(*this);
        for (const auto& c : node_->children) c.collect_atoms(out);
    }

    friend bool operator==(const Formula& a, const Formula& b)
    {
        return a.node_ == b.node_ || a.node_->key == b.node_->key;
    }
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
    friend bool operator<(const Formula& a, const Formula& b) { return a.node_->key < b.node_->key; }

private:
    struct Node {
        Kind kind;
        std::string symbol;
        std::vector<Term> args;
        std::vector<Formula> children;
        std::string key;
        std::set<std::string> free_vars;
        bool propositional = true;
    };

    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Formula binary(Kind k, Formula a, Formula b)
    {
        return Formula(make(k, {}, {}, {std::move(a), std::move(b)}));
    }

    static std::shared_ptr<const Node> make(Kind kind, std::string symbol, std::vector<Term> args,
                                            std::vector<Formula> children)
    {
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->symbol = std::move(symbol);
        n->args = std::move(args);
        n->children = std::move(children);
        switch (kind) {
        case Kind::True: n->key = "T"; break;
        case Kind::False: n->key = "F"; break;
        case Kind::Atom:
            n->key = n->symbol;
            if (!n->args.empty()) {
                n->propositional = false;
                n->key += "(";
                for (std::size_t i = 0; i < n->args.size(); ++i) {
                    if (i) n->key += ",";
                    n->key += n->args[i].key();
                    n->args[i].collect_variables(n->free_vars);
                }
                n->key += ")";
            }
            break;
        case Kind::Not:
            n->key = "(~ " + n->children[0].key() + ")";
            break;
        case Kind::ForAll:
        case Kind::Exists:
            n->propositional = false;
            n->key = std::string(kind == Kind::ForAll ? "(A " : "(E ") + n->symbol + " " +
                     n->children[0].key() + ")";
            break;
        default: {
            const char* op = kind == Kind::And ? "&" : kind == Kind::Or ? "|" : kind == Kind::Implies ? "->" : "<->";
            n->key = std::string("(") + op + " " + n->children[0].key() + " " + n->children[1].key() + ")";
        }
        }
        for (const auto& c : n->children) {
            n->propositional = n->propositional && c.is_propositional();
            n->free_vars.insert(c.free_variables().begin(), c.free_variables().end());
        }
        if (kind == Kind::ForAll || kind == Kind::Exists) n->free_vars.erase(n->symbol);
        return n;
    }

    std::shared_ptr<const Node> node_;
};

namespace detail {

inline int precedence(const Formula& f)
{
    switch (f.kind()) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    default: return 5;
    }
}

inline void render_into(const Formula& f, int context, std::string& out)
{
    const int prec = precedence(f);
    const bool parens = prec < context;
    if (parens) out += "(";
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::True: out += "true"; break;
    case K::False: out += "false"; break;
    case K::Atom:
        out += f.symbol();
        if (!f.args().empty()) {
            out += "(";
            for (std::size_t i = 0; i < f.args().size(); ++i) {
                if (i) out += ",";
                out += f.args()[i].render();
            }
            out += ")";
        }
        break;
    case K::Not:
        out += "~";
        render_into(f.operand(), 5, out);
        break;
    case K::ForAll:
    case K::Exists:
        out += f.is(K::ForAll) ? "forall " : "exists ";
        out += f.symbol();
        out += ". ";
        render_into(f.operand(), 5, out);
        break;
    default: {
        // -> associates right, the rest left.
        const bool right_assoc = f.is(K::Implies);
        const char* op = f.is(K::And) ? " & " : f.is(K::Or) ? " | " : f.is(K::Implies) ? " -> " : " <-> ";
        render_into(f.left(), right_assoc ? prec + 1 : prec, out);
        out += op;
        render_into(f.right(), right_assoc ? prec : prec + 1, out);
    }
    }
    if (parens) out += ")";
}

} // namespace detail

/// Concrete syntax accepted by the knowledge-base parser, with minimal
/// parentheses.
inline std::string render_formula(const Formula& f)
{
    std::string out;
    detail::render_into(f, 0, out);
    return out;
}

} // namespace argtab
