#pragma once

#include "argtab/lang/formula.hpp"
#include "argtab/lang/knowledge_base.hpp"
#include "argtab/lang/rule.hpp"

#include <cctype>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace argtab {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column)
    {
    }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

namespace detail {

struct Token {
    enum class Kind { Lower, Upper, Punct, End };
    Kind kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            if (pos_ >= src_.size()) {
                out.push_back({Token::Kind::End, "", line_, col_});
                return out;
            }
            const std::size_t line = line_, col = col_;
            const char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::string word;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    word += advance();
                out.push_back({std::isupper(static_cast<unsigned char>(c)) ? Token::Kind::Upper : Token::Kind::Lower,
                               std::move(word), line, col});
                continue;
            }
            static constexpr std::string_view puncts[] = {"<->", "~>", "->", ":", ".", ",", "(", ")",
                                                          "[",   "]",  "~",  "&", "|", "<"};
            bool matched = false;
            for (auto p : puncts) {
                if (src_.substr(pos_, p.size()) == p) {
                    for (std::size_t i = 0; i < p.size(); ++i) advance();
                    out.push_back({Token::Kind::Punct, std::string(p), line, col});
                    matched = true;
                    break;
                }
            }
            if (!matched) throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
    }

private:
    char advance()
    {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space()
    {
        while (pos_ < src_.size()) {
            if (src_[pos_] == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                advance();
            } else {
                return;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : tokens_(Lexer(src).run()) {}

    KnowledgeBase knowledge_base()
    {
        struct PendingRule {
            std::string id;
            Formula antecedent;
            std::optional<Formula> consequent;
            std::string target;
            Token where;
        };
        struct PendingPref {
            PrefAtom lhs, rhs;
            Token where;
        };
        std::vector<PendingRule> rules;
        std::vector<PendingPref> prefs;
        KnowledgeBase kb;

        while (peek().kind != Token::Kind::End) {
            const Token start = peek();
            if (accept_word("sigma")) {
                expect(":");
                kb.add_sigma(closed_formula());
            } else if (accept_word("rule")) {
                PendingRule r{identifier(), Formula::top(), std::nullopt, "", start};
                expect(":");
                r.antecedent = formula();
                expect("~>");
                if (peek().kind == Token::Kind::Lower && peek().text == "not" && peek(1).text == "(" &&
                    peek(2).kind == Token::Kind::Lower && peek(3).text == ")") {
                    next();
                    next();
                    r.target = identifier();
                    expect(")");
                } else {
                    r.consequent = formula();
                }
                for (const auto& other : rules)
                    if (other.id == r.id) throw ParseError(start.line, start.column, "duplicate rule id '" + r.id + "'");
                rules.push_back(std::move(r));
            } else if (accept_word("pref")) {
                PrefAtom lhs = pref_atom();
                expect("<");
                PrefAtom rhs = pref_atom();
                prefs.push_back({std::move(lhs), std::move(rhs), start});
            } else if (accept_word("query")) {
                kb.queries.push_back(closed_formula());
            } else {
                fail(peek(), "expected 'sigma:', 'rule', 'pref' or 'query'");
            }
            expect(".");
        }

        for (const auto& r : rules) {
            if (r.consequent) {
                kb.rules.emplace_back(r.id, r.antecedent, *r.consequent);
                continue;
            }
            auto target = std::find_if(rules.begin(), rules.end(), [&](const PendingRule& t) { return t.id == r.target; });
            if (target == rules.end())
                throw ParseError(r.where.line, r.where.column, "undercut target '" + r.target + "' is not declared");
            NegatedRule neg{target->id, target->antecedent, target->consequent, {}};
            std::set<std::string> vars = target->antecedent.free_variables();
            if (target->consequent) vars.insert(target->consequent->free_variables().begin(), target->consequent->free_variables().end());
            neg.target_variables.assign(vars.begin(), vars.end());
            kb.rules.emplace_back(r.id, r.antecedent, std::move(neg));
        }

        std::vector<std::pair<PrefAtom, PrefAtom>> pairs;
        for (const auto& p : prefs) {
            if (p.lhs.index() != p.rhs.index())
                throw ParseError(p.where.line, p.where.column, "preference relates a formula to a rule");
            pairs.emplace_back(p.lhs, p.rhs);
        }
        try {
            kb.preferences = PreferenceOrder(pairs);
        } catch (const std::invalid_argument& e) {
            const Token& where = prefs.back().where;
            throw ParseError(where.line, where.column, e.what());
        }
        for (const auto& p : prefs) {
            for (const auto* side : {&p.lhs, &p.rhs}) {
                if (const auto* id = std::get_if<std::string>(side)) {
                    if (!kb.find_rule(*id))
                        throw ParseError(p.where.line, p.where.column, "preference names unknown rule '" + *id + "'");
                } else if (!kb.in_sigma(std::get<Formula>(*side))) {
                    throw ParseError(p.where.line, p.where.column,
                                     "preference formula is not in sigma: " + render_formula(std::get<Formula>(*side)));
                }
            }
        }
        kb.preference_pairs = std::move(pairs);
        return kb;
    }

    Formula standalone_formula()
    {
        Formula f = closed_formula();
        if (peek().kind != Token::Kind::End) fail(peek(), "trailing input after formula");
        return f;
    }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] static void fail(const Token& t, const std::string& what)
    {
        throw ParseError(t.line, t.column, what + (t.kind == Token::Kind::End ? " (at end of input)" : " near '" + t.text + "'"));
    }

    bool accept(std::string_view punct)
    {
        if (peek().kind == Token::Kind::Punct && peek().text == punct) {
            next();
            return true;
        }
        return false;
    }
    void expect(std::string_view punct)
    {
        if (!accept(punct)) fail(peek(), "expected '" + std::string(punct) + "'");
    }
    bool accept_word(std::string_view word)
    {
        if (peek().kind == Token::Kind::Lower && peek().text == word) {
            next();
            return true;
        }
        return false;
    }
    std::string identifier()
    {
        if (peek().kind != Token::Kind::Lower) fail(peek(), "expected identifier");
        return next().text;
    }

    PrefAtom pref_atom()
    {
        if (accept("[")) {
            Formula f = closed_formula();
            expect("]");
            return f;
        }
        return identifier();
    }

    Formula closed_formula()
    {
        const Token start = peek();
        Formula f = formula();
        if (!f.is_closed())
            throw ParseError(start.line, start.column,
                             "free variable " + *f.free_variables().begin() + " outside a rule");
        return f;
    }

    Formula formula()
    {
        Formula f = implication();
        while (accept("<->")) f = Formula::equivalence(f, implication());
        return f;
    }
    Formula implication()
    {
        Formula f = disjunction();
        if (accept("->")) return Formula::implication(f, implication());
        return f;
    }
    Formula disjunction()
    {
        Formula f = conjunction();
        while (accept("|")) f = Formula::disjunction(f, conjunction());
        return f;
    }
    Formula conjunction()
    {
        Formula f = unary();
        while (accept("&")) f = Formula::conjunction(f, unary());
        return f;
    }
    Formula unary()
    {
        if (accept("~")) return Formula::negation(unary());
        for (const char* q : {"forall", "exists"}) {
            if (accept_word(q)) {
                if (peek().kind != Token::Kind::Upper) fail(peek(), "expected variable after quantifier");
                std::string var = next().text;
                expect(".");
                Formula body = unary();
                return q[0] == 'f' ? Formula::forall(std::move(var), std::move(body))
                                   : Formula::exists(std::move(var), std::move(body));
            }
        }
        return atom();
    }
    Formula atom()
    {
        if (accept("(")) {
            Formula f = formula();
            expect(")");
            return f;
        }
        if (accept_word("true")) return Formula::top();
        if (accept_word("false")) return Formula::bottom();
        const Token& t = peek();
        // Predicates may start with either case; an uppercase name needs an
        // argument list since bare uppercase names are variables.
        const bool pred = t.kind == Token::Kind::Lower ||
                          (t.kind == Token::Kind::Upper && peek(1).kind == Token::Kind::Punct && peek(1).text == "(");
        if (!pred) fail(t, "expected formula");
        const Token name = next();
        std::vector<Term> args;
        if (accept("(")) {
            do args.push_back(term());
            while (accept(","));
            expect(")");
        }
        check_arity(predicate_arity_, name, args.size(), "predicate");
        return Formula::atom(name.text, std::move(args));
    }
    Term term()
    {
        const Token t = next();
        if (t.kind == Token::Kind::Upper) return Term::variable(t.text);
        if (t.kind != Token::Kind::Lower) fail(t, "expected term");
        std::vector<Term> args;
        if (accept("(")) {
            do args.push_back(term());
            while (accept(","));
            expect(")");
        }
        check_arity(function_arity_, t, args.size(), "function");
        return Term::function(t.text, std::move(args));
    }

    static void check_arity(std::map<std::string, std::size_t>& table, const Token& t, std::size_t arity, const char* what)
    {
        auto [it, inserted] = table.emplace(t.text, arity);
        if (!inserted && it->second != arity)
            throw ParseError(t.line, t.column,
                             std::string("arity mismatch for ") + what + " '" + t.text + "': " + std::to_string(arity) +
                                 " vs " + std::to_string(it->second));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::map<std::string, std::size_t> predicate_arity_;
    std::map<std::string, std::size_t> function_arity_;
};

} // namespace detail

inline KnowledgeBase parse_knowledge_base(std::string_view text) { return detail::Parser(text).knowledge_base(); }

inline KnowledgeBase parse_knowledge_base(std::istream& in)
{
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_knowledge_base(text);
}

/// Parses a single closed formula, e.g. a `--query` argument.
inline Formula parse_formula(std::string_view text) { return detail::Parser(text).standalone_formula(); }

} // namespace argtab
