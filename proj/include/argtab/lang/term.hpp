#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace argtab {

/// First-order term: variable, constant or function application.
///
/// Terms are immutable handles; equality and ordering go through a
/// canonical key computed once at construction.
class Term {
public:
    enum class Kind { Variable, Constant, Function };

    static Term variable(std::string name) { return Term(Kind::Variable, std::move(name), {}); }
    static Term constant(std::string name) { return Term(Kind::Constant, std::move(name), {}); }
    static Term function(std::string name, std::vector<Term> args)
    {
        if (args.empty()) return constant(std::move(name));
        return Term(Kind::Function, std::move(name), std::move(args));
    }

    Kind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    const std::vector<Term>& args() const { return node_->args; }
    const std::string& key() const { return node_->key; }

    bool is_variable() const { return kind() == Kind::Variable; }
    bool is_ground() const { return node_->ground; }

    /// Replace every occurrence of variable `var` by `value`.
    Term substitute(const std::string& var, const Term& value) const
    {
        switch (kind()) {
        case Kind::Variable:
            return name() == var ? value : *this;
        case Kind::Constant:
            return *this;
        case Kind::Function: {
            if (is_ground()) return *this;
            std::vector<Term> out;
            out.reserve(args().size());
            for (const auto& a : args()) out.push_back(a.substitute(var, value));
            return function(name(), std::move(out));
        }
        }
        return *this;
    }

    void collect_variables(std::set<std::string>& out) const
    {
        if (is_variable()) {
            out.insert(name());
            return;
        }
        for (const auto& a : args()) a.collect_variables(out);
    }

    /// Adds this term and all of its ground subterms.
    void collect_ground_subterms(std::set<Term>& out) const
    {
        if (!is_ground()) {
            for (const auto& a : args()) a.collect_ground_subterms(out);
            return;
        }
        out.insert(*this);
        for (const auto& a : args()) a.collect_ground_subterms(out);
    }

    std::string render() const
    {
        if (kind() != Kind::Function) return name();
        std::string s = name() + "(";
        for (std::size_t i = 0; i < args().size(); ++i) {
            if (i) s += ",";
            s += args()[i].render();
        }
        return s + ")";
    }

    friend bool operator==(const Term& a, const Term& b)
    {
        return a.node_ == b.node_ || a.node_->key == b.node_->key;
    }
    friend bool operator<(const Term& a, const Term& b) { return a.node_->key < b.node_->key; }

private:
    struct Node {
        Kind kind;
        std::string name;
        std::vector<Term> args;
        std::string key;
        bool ground;
    };

    Term(Kind kind, std::string name, std::vector<Term> args)
    {
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->name = std::move(name);
        n->args = std::move(args);
        n->ground = kind != Kind::Variable;
        for (const auto& a : n->args) n->ground = n->ground && a.is_ground();
        // Variables and constants live in disjoint namespaces of the key.
        n->key = (kind == Kind::Variable ? "?" : "") + n->name;
        if (kind == Kind::Function) {
            n->key += "(";
            for (std::size_t i = 0; i < n->args.size(); ++i) {
                if (i) n->key += ",";
                n->key += n->args[i].key();
            }
            n->key += ")";
        }
        node_ = std::move(n);
    }

    std::shared_ptr<const Node> node_;
};

} // namespace argtab
