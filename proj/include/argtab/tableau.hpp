#pragma once

#include "argtab/arguments.hpp"
#include "argtab/lang/knowledge_base.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace argtab {

struct Budget {
    int gamma_rounds = 3;
    int fresh_constants = 8;
    std::size_t max_entries = 100000;
    int depth_cap = 16;
    std::size_t combination_cap = 10000;
};

/// A supported proposition (S, φ) on a tableau node. Entries for ⊥ use the
/// formula `false`.
class Entry {
public:
    Entry(Support support, Formula formula)
        : support_(std::move(support)), formula_(std::move(formula)), key_(support_.key() + "|" + formula_.key())
    {
    }
    const Support& support() const { return support_; }
    const Formula& formula() const { return formula_; }
    const std::string& key() const { return key_; }

    friend bool operator==(const Entry& a, const Entry& b) { return a.key_ == b.key_; }

private:
    Support support_;
    Formula formula_;
    std::string key_;
};

inline std::string render_entry(const Entry& e)
{
    return "(" + render_support(e.support()) + ", " + render_formula(e.formula()) + ")";
}

enum class RuleClass { None, Alpha, Delta, Beta, Gamma };

/// Tableau rule class of a formula; literals (including ⊤, ⊥ and their
/// negations) are not rewritable.
inline RuleClass classify(const Formula& f)
{
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::And: return RuleClass::Alpha;
    case K::Or:
    case K::Implies:
    case K::Iff: return RuleClass::Beta;
    case K::ForAll: return RuleClass::Gamma;
    case K::Exists: return RuleClass::Delta;
    case K::Not: {
        const Formula& g = f.operand();
        switch (g.kind()) {
        case K::Not:
        case K::Or:
        case K::Implies: return RuleClass::Alpha;
        case K::And:
        case K::Iff: return RuleClass::Beta;
        case K::ForAll: return RuleClass::Delta;
        case K::Exists: return RuleClass::Gamma;
        default: return RuleClass::None;
        }
    }
    default: return RuleClass::None;
    }
}

inline Formula conj(const Formula& a, const Formula& b) { return Formula::conjunction(a, b); }
inline Formula neg(const Formula& a) { return Formula::negation(a); }

/// The three mutually exclusive cases for ∨, → and ¬∧; nullopt for any
/// other formula.
inline std::optional<std::vector<Formula>> exclusive_split(const Formula& f)
{
    using K = Formula::Kind;
    if (f.is(K::Or)) {
        const auto &a = f.left(), &b = f.right();
        return std::vector<Formula>{conj(a, neg(b)), conj(a, b), conj(neg(a), b)};
    }
    if (f.is(K::Implies)) {
        const auto &a = f.left(), &b = f.right();
        return std::vector<Formula>{conj(neg(a), neg(b)), conj(neg(a), b), conj(a, b)};
    }
    if (f.is(K::Not) && f.operand().is(K::And)) {
        const auto &a = f.operand().left(), &b = f.operand().right();
        return std::vector<Formula>{conj(neg(a), b), conj(neg(a), neg(b)), conj(a, neg(b))};
    }
    return std::nullopt;
}

/// Products of a propositional rewrite: one formula list per child. Empty
/// for literals and quantified formulas.
inline std::vector<std::vector<Formula>> expansion(const Formula& f, bool exclusive = false)
{
    using K = Formula::Kind;
    if (exclusive) {
        if (auto parts = exclusive_split(f)) {
            std::vector<std::vector<Formula>> out;
            for (auto& p : *parts) out.push_back({std::move(p)});
            return out;
        }
    }
    switch (f.kind()) {
    case K::And: return {{f.left(), f.right()}};
    case K::Or: return {{f.left()}, {f.right()}};
    case K::Implies: return {{neg(f.left())}, {f.right()}};
    case K::Iff: return {{f.left(), f.right()}, {neg(f.left()), neg(f.right())}};
    case K::Not: {
        const Formula& g = f.operand();
        switch (g.kind()) {
        case K::Not: return {{g.operand()}};
        case K::Or: return {{neg(g.left()), neg(g.right())}};
        case K::Implies: return {{g.left(), neg(g.right())}};
        case K::And: return {{neg(g.left())}, {neg(g.right())}};
        case K::Iff: return {{g.left(), neg(g.right())}, {neg(g.left()), g.right()}};
        default: return {};
        }
    }
    default: return {};
    }
}

/// How a node's children were produced.
struct RewriteRecord {
    Entry entry;
    RuleClass rule;
    bool exclusive = false;
    std::vector<Term> gamma_terms;
    std::optional<Term> fresh;
};

struct TableauNode {
    int parent = -1;
    std::vector<int> children;
    /// Entries introduced at this node; the node's full content is the
    /// union along the path from the root.
    std::vector<Entry> added;
    std::optional<RewriteRecord> rewrite;
    /// Entries found redundant on this branch (their products are already
    /// present); treated as rewritten.
    std::vector<std::string> settled;
    /// Supports of ⊥ derived at this leaf.
    std::vector<Support> closures;
    bool saturated = false;
};

/// Everything visible on the branch from the root to a node.
struct BranchView {
    std::vector<Entry> entries;
    std::unordered_set<std::string> keys;
    std::unordered_set<std::string> rewritten;
    std::unordered_map<std::string, std::pair<std::set<Term>, int>> gamma;
    std::set<Term> terms;
};

struct ClosureOptions {
    /// Supports with more tests are dropped; negative means no limit.
    int max_tests = -1;
    /// Keep only ⊆-minimal supports.
    bool minimal_only = false;
};

/// Keeps the ⊆-minimal supports; ties are removed by deduplication.
inline std::vector<Support> minimal_supports(std::vector<Support> in)
{
    std::sort(in.begin(), in.end(), [](const Support& a, const Support& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    in.erase(std::unique(in.begin(), in.end()), in.end());
    std::vector<Support> out;
    for (auto& s : in) {
        const bool dominated = std::any_of(out.begin(), out.end(), [&](const Support& m) { return s.includes(m); });
        if (!dominated) out.push_back(std::move(s));
    }
    return out;
}

class Tableau {
public:
    explicit Tableau(Budget budget = {}) : budget_(budget) { nodes_.emplace_back(); }

    const Budget& budget() const { return budget_; }
    const std::vector<TableauNode>& nodes() const { return nodes_; }
    const TableauNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }

    /// Splits ∨, → and ¬∧ three ways into mutually exclusive cases.
    void set_exclusive(bool on) { exclusive_ = on; }
    bool exclusive() const { return exclusive_; }

    bool incomplete() const { return !incomplete_reasons_.empty(); }
    const std::set<std::string>& incomplete_reasons() const { return incomplete_reasons_; }
    void mark_incomplete(const std::string& why) { incomplete_reasons_.insert(why); }

    int next_test_id() { return ++test_counter_; }

    /// Adds ({σ}, σ) to the root.
    void add_premise(const Formula& f) { add_entry(0, Entry(Support{SupportElement::premise(f)}, f)); }

    /// Adds the test ({¬φ?}, ¬φ) to `node` and returns its element.
    SupportElement add_test(int node, const Formula& goal)
    {
        const Formula negated = Formula::negation(goal);
        SupportElement t = SupportElement::test(negated, next_test_id());
        add_entry(node, Entry(Support{t}, negated));
        return t;
    }

    /// Adds an entry to `node`; every branch through the node inherits it
    /// and has to be saturated again.
    void add_entry(int node, Entry e)
    {
        note_terms(e.formula());
        entry_count_ += 1;
        nodes_.at(static_cast<std::size_t>(node)).added.push_back(std::move(e));
        for (int leaf : leaves(node)) {
            auto& n = nodes_[static_cast<std::size_t>(leaf)];
            n.saturated = false;
            n.closures.clear();
        }
    }

    bool is_leaf(int i) const { return node(i).children.empty(); }

    std::vector<int> leaves(int from = 0) const
    {
        std::vector<int> out;
        std::vector<int> stack{from};
        while (!stack.empty()) {
            const int n = stack.back();
            stack.pop_back();
            const auto& ch = node(n).children;
            if (ch.empty()) out.push_back(n);
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
        }
        return out;
    }

    std::vector<int> path_to(int n) const
    {
        std::vector<int> path;
        for (int i = n; i >= 0; i = node(i).parent) path.push_back(i);
        std::reverse(path.begin(), path.end());
        return path;
    }

    BranchView branch(int n) const
    {
        BranchView v;
        for (int i : path_to(n)) {
            const auto& nd = node(i);
            for (const auto& e : nd.added) {
                if (v.keys.insert(e.key()).second) {
                    v.entries.push_back(e);
                    e.formula().collect_ground_terms(v.terms);
                }
            }
            for (const auto& k : nd.settled) v.rewritten.insert(k);
            if (nd.rewrite) {
                const auto& rw = *nd.rewrite;
                if (rw.rule == RuleClass::Gamma) {
                    auto& g = v.gamma[rw.entry.key()];
                    g.first.insert(rw.gamma_terms.begin(), rw.gamma_terms.end());
                    g.second += 1;
                } else {
                    v.rewritten.insert(rw.entry.key());
                }
            }
        }
        return v;
    }

    /// Expands every unsaturated leaf below `from` until no rule applies or
    /// the budget runs out, then records the closures of those leaves.
    void saturate(int from = 0)
    {
        std::vector<int> stack;
        const auto start = leaves(from);
        for (auto it = start.rbegin(); it != start.rend(); ++it)
            if (!node(*it).saturated) stack.push_back(*it);
        while (!stack.empty()) {
            const int leaf = stack.back();
            stack.pop_back();
            if (!expand_leaf(leaf)) {
                finish_leaf(leaf);
                continue;
            }
            const auto& ch = node(leaf).children;
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
        }
    }

    /// Every leaf has at least one ⊥ record.
    bool closed(int from = 0) const
    {
        for (int l : leaves(from))
            if (node(l).closures.empty()) return false;
        return true;
    }

    /// Unions of one ⊥ record per leaf below `from`; empty when some leaf
    /// is open.
    std::vector<Support> closure_supports(ClosureOptions opts = {}, int from = 0)
    {
        return closure_supports_over(leaves(from), opts);
    }

    /// Same over an explicit list of leaves.
    std::vector<Support> closure_supports_over(const std::vector<int>& leaf_list, ClosureOptions opts = {})
    {
        std::vector<Support> partial{Support{}};
        const auto fits = [&](const Support& s) {
            return opts.max_tests < 0 || s.test_count() <= static_cast<std::size_t>(opts.max_tests);
        };
        for (int leaf : leaf_list) {
            std::vector<Support> records;
            for (const auto& r : node(leaf).closures)
                if (fits(r)) records.push_back(r);
            if (records.empty()) return {};
            if (opts.minimal_only) records = minimal_supports(std::move(records));

            std::vector<Support> next;
            for (const auto& u : partial) {
                if (opts.minimal_only &&
                    std::any_of(records.begin(), records.end(), [&](const Support& r) { return u.includes(r); })) {
                    next.push_back(u);
                    continue;
                }
                for (const auto& r : records) {
                    Support joined = u.unite(r);
                    if (fits(joined)) next.push_back(std::move(joined));
                }
                if (next.size() > budget_.combination_cap) break;
            }
            if (opts.minimal_only) {
                next = minimal_supports(std::move(next));
            } else {
                std::sort(next.begin(), next.end());
                next.erase(std::unique(next.begin(), next.end()), next.end());
            }
            if (next.size() > budget_.combination_cap) {
                next.resize(budget_.combination_cap);
                mark_incomplete("closure combination cap reached");
            }
            partial = std::move(next);
            if (partial.empty()) return {};
        }
        std::sort(partial.begin(), partial.end());
        return partial;
    }

    /// Snapshot for trial expansions below some leaves; restore drops every
    /// node created since and resets those leaves.
    struct Snapshot {
        std::size_t node_count;
        std::vector<std::pair<int, TableauNode>> saved;
        std::size_t entry_count;
        int fresh_counter;
        std::set<std::string> incomplete;
    };
    Snapshot snapshot(const std::vector<int>& leaf_list) const
    {
        Snapshot s{nodes_.size(), {}, entry_count_, fresh_counter_, incomplete_reasons_};
        for (int l : leaf_list) s.saved.emplace_back(l, node(l));
        return s;
    }
    void restore(const Snapshot& s)
    {
        nodes_.resize(s.node_count);
        for (const auto& [l, n] : s.saved) nodes_[static_cast<std::size_t>(l)] = n;
        entry_count_ = s.entry_count;
        fresh_counter_ = s.fresh_counter;
        incomplete_reasons_ = s.incomplete;
    }

    /// Indented text tree, one node per line.
    std::string dump_text() const
    {
        std::ostringstream out;
        dump_node(out, 0, 0);
        return out.str();
    }

    /// Graph description for Graphviz.
    std::string dump_dot() const
    {
        std::ostringstream out;
        out << "digraph tableau {\n  node [shape=box, fontname=\"monospace\"];\n";
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            std::string label;
            for (const auto& e : nodes_[i].added) label += render_entry(e) + "\\l";
            for (const auto& c : nodes_[i].closures) label += "(" + render_support(c) + ", false)\\l";
            out << "  n" << i << " [label=\"" << escape(label) << "\"];\n";
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            for (int c : nodes_[i].children) out << "  n" << i << " -> n" << c << ";\n";
        out << "}\n";
        return out.str();
    }

private:
    static std::string escape(const std::string& s)
    {
        std::string out;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') out += "\\\"";
            else if (s[i] == '\\' && (i + 1 >= s.size() || s[i + 1] != 'l')) out += "\\\\";
            else out += s[i];
        }
        return out;
    }

    void dump_node(std::ostringstream& out, int n, int depth) const
    {
        const auto& nd = node(n);
        out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "n" << n << ":";
        for (const auto& e : nd.added) out << " " << render_entry(e);
        if (nd.children.empty()) {
            if (nd.closures.empty()) out << " [open]";
            for (const auto& c : nd.closures) out << " [closed by " << render_support(c) << "]";
        }
        out << "\n";
        for (int c : nd.children) dump_node(out, c, depth + 1);
    }

    void note_terms(const Formula& f)
    {
        std::set<Term> ts;
        f.collect_ground_terms(ts);
        for (const auto& t : ts) names_.insert(t.name());
    }

    Term fresh_constant()
    {
        for (;;) {
            std::string name = "c" + std::to_string(++fresh_counter_);
            if (!names_.count(name)) {
                names_.insert(name);
                return Term::constant(name);
            }
        }
    }

    int add_child(int parent, std::vector<Entry> entries)
    {
        TableauNode child;
        child.parent = parent;
        for (auto& e : entries) {
            note_terms(e.formula());
            entry_count_ += 1;
        }
        child.added = std::move(entries);
        nodes_.push_back(std::move(child));
        const int id = static_cast<int>(nodes_.size()) - 1;
        nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
        return id;
    }

    /// Applies one rewrite at `leaf`. Returns false when the leaf is
    /// saturated (or the budget is spent); true when children were created.
    bool expand_leaf(int leaf)
    {
        for (;;) {
            if (entry_count_ >= budget_.max_entries) {
                mark_incomplete("entry budget exhausted");
                return false;
            }
            const BranchView view = branch(leaf);
            const Entry* best = nullptr;
            RuleClass best_class = RuleClass::None;
            for (const auto& e : view.entries) {
                const RuleClass c = classify(e.formula());
                if (c == RuleClass::None || view.rewritten.count(e.key())) continue;
                if (c == RuleClass::Gamma && !gamma_applicable(view, e)) continue;
                if (c == RuleClass::Delta && fresh_counter_ >= budget_.fresh_constants) {
                    mark_incomplete("fresh constant budget exhausted");
                    continue;
                }
                if (!best || static_cast<int>(c) < static_cast<int>(best_class)) {
                    best = &e;
                    best_class = c;
                }
            }
            if (!best) return false;
            const Entry entry = *best;
            const Support& s = entry.support();
            const Formula& f = entry.formula();
            auto& nd = nodes_[static_cast<std::size_t>(leaf)];

            if (best_class == RuleClass::Alpha || best_class == RuleClass::Beta) {
                const bool split3 = exclusive_ && exclusive_split(f).has_value();
                auto products = expansion(f, exclusive_);
                // Regularity: a child whose products are all on the branch
                // already adds nothing, and neither does the split.
                if (!split3) {
                    const bool redundant = std::any_of(products.begin(), products.end(), [&](const auto& child) {
                        return std::all_of(child.begin(), child.end(),
                                           [&](const Formula& g) { return view.keys.count(Entry(s, g).key()); });
                    });
                    if (redundant) {
                        nd.settled.push_back(entry.key());
                        continue;
                    }
                }
                nd.rewrite = RewriteRecord{entry, best_class, split3, {}, std::nullopt};
                for (const auto& child : products) {
                    std::vector<Entry> es;
                    for (const auto& g : child) es.emplace_back(s, g);
                    add_child(leaf, std::move(es));
                }
                return true;
            }

            const bool negated = f.is(Formula::Kind::Not);
            const Formula& q = negated ? f.operand() : f;
            const auto instance = [&](const Term& t) {
                Formula body = q.operand().substitute(q.symbol(), t);
                return negated ? Formula::negation(body) : body;
            };

            if (best_class == RuleClass::Delta) {
                Term c = fresh_constant();
                nd.rewrite = RewriteRecord{entry, best_class, false, {}, c};
                add_child(leaf, {Entry(s, instance(c))});
                return true;
            }

            // γ: instantiate with every term of the branch not used yet.
            const auto it = view.gamma.find(entry.key());
            std::vector<Term> terms;
            for (const auto& t : view.terms)
                if (it == view.gamma.end() || !it->second.first.count(t)) terms.push_back(t);
            std::optional<Term> fresh;
            if (view.terms.empty()) {
                fresh = fresh_constant();
                terms.push_back(*fresh);
            }
            nd.rewrite = RewriteRecord{entry, best_class, false, terms, fresh};
            std::vector<Entry> es;
            for (const auto& t : terms) es.emplace_back(s, instance(t));
            add_child(leaf, std::move(es));
            return true;
        }
    }

    bool gamma_applicable(const BranchView& view, const Entry& e)
    {
        const auto it = view.gamma.find(e.key());
        const int rounds = it == view.gamma.end() ? 0 : it->second.second;
        bool unused = view.terms.empty() && rounds == 0;
        for (const auto& t : view.terms)
            if (it == view.gamma.end() || !it->second.first.count(t)) unused = true;
        if (!unused) return false;
        if (rounds >= budget_.gamma_rounds) {
            mark_incomplete("gamma rounds exhausted");
            return false;
        }
        if (view.terms.empty() && fresh_counter_ >= budget_.fresh_constants) {
            mark_incomplete("fresh constant budget exhausted");
            return false;
        }
        return true;
    }

    void finish_leaf(int leaf)
    {
        const BranchView view = branch(leaf);
        std::unordered_map<std::string, std::vector<const Entry*>> by_formula;
        for (const auto& e : view.entries) by_formula[e.formula().key()].push_back(&e);
        std::vector<Support> records;
        for (const auto& e : view.entries) {
            const Formula& f = e.formula();
            if (f.is(Formula::Kind::False) || (f.is(Formula::Kind::Not) && f.operand().is(Formula::Kind::True))) {
                records.push_back(e.support());
                continue;
            }
            if (!f.is(Formula::Kind::Not)) continue;
            const auto it = by_formula.find(f.operand().key());
            if (it == by_formula.end()) continue;
            for (const Entry* pos : it->second) records.push_back(pos->support().unite(e.support()));
        }
        std::sort(records.begin(), records.end());
        records.erase(std::unique(records.begin(), records.end()), records.end());
        auto& nd = nodes_[static_cast<std::size_t>(leaf)];
        nd.closures = std::move(records);
        nd.saturated = true;
    }

    Budget budget_;
    std::vector<TableauNode> nodes_;
    bool exclusive_ = false;
    int test_counter_ = 0;
    int fresh_counter_ = 0;
    std::size_t entry_count_ = 0;
    std::set<std::string> names_;
    std::set<std::string> incomplete_reasons_;
};

/// Σ ⊢ goal decided by a plain tableau (goal `false` checks
/// unsatisfiability). Undecided first-order cases count as not entailed.
inline bool tableau_entails(const std::vector<Formula>& premises, const Formula& goal, const Budget& budget = {})
{
    Tableau t(budget);
    for (const auto& p : premises) t.add_premise(p);
    if (!goal.is(Formula::Kind::False)) t.add_test(0, goal);
    t.saturate();
    return t.closed();
}

inline EntailmentOracle tableau_oracle(Budget budget = {})
{
    return [budget](const std::vector<Formula>& premises, const Formula& goal) {
        return tableau_entails(premises, goal, budget);
    };
}

struct ProofResult {
    /// (S, goal) for each minimal closure support whose only test is the
    /// goal's.
    std::vector<Argument> arguments;
    /// (S, ⊥) for each minimal test-free closure support.
    std::vector<Argument> inconsistencies;
    bool incomplete = false;
    Tableau tableau;
};

inline ProofResult prove(const KnowledgeBase& kb, const Formula& goal, const Budget& budget = {})
{
    ProofResult r{{}, {}, false, Tableau(budget)};
    Tableau& t = r.tableau;
    for (const auto& s : kb.sigma) t.add_premise(s);
    const SupportElement test = t.add_test(0, goal);
    t.saturate();
    for (const auto& s : t.closure_supports({1, true})) {
        if (s.contains(test)) r.arguments.push_back({s.without(test), goal});
        else if (s.test_count() == 0) r.inconsistencies.push_back({s, Falsum{}});
    }
    r.incomplete = t.incomplete();
    return r;
}

} // namespace argtab
