#include "argtab/lang/parser.hpp"
#include "argtab/tableau.hpp"
#include "support/oracle.hpp"

#include <gtest/gtest.h>

using namespace argtab;

namespace {

Formula f(std::string_view s) { return parse_formula(s); }
SupportElement prem(std::string_view s) { return SupportElement::premise(f(s)); }

std::set<std::string> rendered(const std::vector<Support>& ss)
{
    std::set<std::string> out;
    for (const auto& s : ss) out.insert(render_support(s));
    return out;
}

std::vector<Formula> branch_formulas(const Tableau& t, int n)
{
    std::vector<Formula> out;
    for (const auto& e : t.branch(n).entries) out.push_back(e.formula());
    return out;
}

} // namespace

TEST(Root, PremisesAndTests)
{
    Tableau t;
    t.add_premise(f("p | q"));
    t.add_premise(f("~q"));
    const auto test = t.add_test(0, f("s"));
    EXPECT_TRUE(test.is_test());
    EXPECT_EQ(render_element(test), "~s?");
    std::set<std::string> entries;
    for (const auto& e : t.node(0).added) entries.insert(render_entry(e));
    EXPECT_EQ(entries, (std::set<std::string>{"({p | q}, p | q)", "({~q}, ~q)", "({~s?}, ~s)"}));
    EXPECT_NE(t.add_test(0, f("p")).test_id(), test.test_id());
    EXPECT_TRUE(Tableau().node(0).added.empty());
}

TEST(Expansion, RuleShapes)
{
    EXPECT_EQ(expansion(f("p | q")), (std::vector<std::vector<Formula>>{{f("p")}, {f("q")}}));
    EXPECT_EQ(expansion(f("~~p")), (std::vector<std::vector<Formula>>{{f("p")}}));
    EXPECT_EQ(expansion(f("p & q")), (std::vector<std::vector<Formula>>{{f("p"), f("q")}}));
    EXPECT_EQ(expansion(f("~(p | q)")), (std::vector<std::vector<Formula>>{{f("~p"), f("~q")}}));
    EXPECT_EQ(expansion(f("p -> q")), (std::vector<std::vector<Formula>>{{f("~p")}, {f("q")}}));
    EXPECT_EQ(expansion(f("~(p -> q)")), (std::vector<std::vector<Formula>>{{f("p"), f("~q")}}));
    EXPECT_EQ(expansion(f("~(p & q)")), (std::vector<std::vector<Formula>>{{f("~p")}, {f("~q")}}));
    EXPECT_EQ(classify(f("p <-> q")), RuleClass::Beta);
    EXPECT_EQ(classify(f("~(p <-> q)")), RuleClass::Beta);
    EXPECT_EQ(classify(f("forall X. p(X)")), RuleClass::Gamma);
    EXPECT_EQ(classify(f("~exists X. p(X)")), RuleClass::Gamma);
    EXPECT_EQ(classify(f("exists X. p(X)")), RuleClass::Delta);
    EXPECT_EQ(classify(f("~p")), RuleClass::None);
}

TEST(Expansion, SupportsCarriedUnchanged)
{
    Tableau t;
    t.add_premise(f("p | q"));
    t.saturate();
    ASSERT_EQ(t.node(0).children.size(), 2u);
    std::set<std::string> kids;
    for (int c : t.node(0).children)
        for (const auto& e : t.node(c).added) kids.insert(render_entry(e));
    EXPECT_EQ(kids, (std::set<std::string>{"({p | q}, p)", "({p | q}, q)"}));
}

TEST(Expansion, DeltaUsesFreshConstant)
{
    Tableau t;
    t.add_entry(0, Entry(Support{prem("s")}, f("exists X. p(X)")));
    t.add_premise(f("q(a)"));
    t.saturate();
    bool found = false;
    for (const auto& e : t.branch(t.leaves().front()).entries)
        if (e.formula().is(Formula::Kind::Atom) && e.formula().symbol() == "p") {
            found = true;
            EXPECT_EQ(e.support(), Support{prem("s")});
            EXPECT_NE(e.formula().args().front(), Term::constant("a"));
        }
    EXPECT_TRUE(found);
}

TEST(Closure, RecordsEveryComplementaryPair)
{
    Tableau t;
    t.add_entry(0, Entry(Support{prem("a")}, f("q")));
    t.add_entry(0, Entry(Support{prem("b")}, f("~q")));
    t.add_entry(0, Entry(Support{prem("c")}, f("~q")));
    t.saturate();
    EXPECT_EQ(rendered(t.node(0).closures), (std::set<std::string>{"{a, b}", "{a, c}"}));
    EXPECT_EQ(t.closure_supports().size(), 2u);

    Tableau g;
    g.add_entry(0, Entry(Support{prem("a")}, Formula::bottom()));
    g.saturate();
    EXPECT_EQ(rendered(g.closure_supports()), (std::set<std::string>{"{a}"}));
    Tableau h;
    h.add_premise(f("~true"));
    h.saturate();
    EXPECT_TRUE(h.closed());
}

TEST(Closure, DisjunctionWithTests)
{
    Tableau t;
    t.add_premise(f("p | q"));
    t.add_premise(f("~q"));
    t.add_test(0, f("p"));
    t.saturate();
    EXPECT_TRUE(t.closed());
    EXPECT_TRUE(rendered(t.closure_supports()).count("{p | q, ~q, ~p?}"));
    EXPECT_EQ(rendered(t.closure_supports({1, true})), (std::set<std::string>{"{p | q, ~q, ~p?}"}));
}

TEST(Closure, OpenTableauHasNoSupports)
{
    Tableau t;
    t.add_premise(f("p"));
    t.saturate();
    EXPECT_FALSE(t.closed());
    EXPECT_TRUE(t.closure_supports().empty());
    EXPECT_EQ(t.nodes().size(), 1u);
}

TEST(Saturate, UniversalInstantiatedWithExistingTerm)
{
    Tableau t;
    t.add_premise(f("forall X. p(X)"));
    t.add_premise(f("~p(a)"));
    t.saturate();
    EXPECT_TRUE(t.closed());
    EXPECT_EQ(rendered(t.closure_supports()), (std::set<std::string>{"{forall X. p(X), ~p(a)}"}));
}

TEST(Saturate, BudgetExhaustionIsReported)
{
    Budget b;
    b.gamma_rounds = 50;
    b.fresh_constants = 2;
    Tableau t(b);
    t.add_premise(f("forall X. exists Y. r(X, Y)"));
    t.add_premise(f("r(a, a)"));
    t.saturate();
    EXPECT_FALSE(t.closed());
    EXPECT_TRUE(t.incomplete());
}

TEST(Prove, Examples)
{
    const auto a = prove(parse_knowledge_base("sigma: p | q. sigma: ~q."), f("p"));
    ASSERT_EQ(a.arguments.size(), 1u);
    EXPECT_EQ(render_argument(a.arguments[0]), "({p | q, ~q}, p)");

    const auto b = prove(KnowledgeBase{}, f("p | ~p"));
    ASSERT_EQ(b.arguments.size(), 1u);
    EXPECT_TRUE(b.arguments[0].support.empty());

    const auto c = prove(parse_knowledge_base("sigma: p. sigma: ~p."), f("q"));
    EXPECT_TRUE(c.arguments.empty());
    ASSERT_EQ(c.inconsistencies.size(), 1u);
    EXPECT_EQ(render_support(c.inconsistencies[0].support), "{~p, p}");
}

TEST(Prove, ZeroTestSupportsAreInconsistent)
{
    oracle::Random rnd(101);
    for (int i = 0; i < 150; ++i) {
        const auto kb = rnd.kb(5, 5, 0);
        const auto r = prove(kb, rnd.formula(5, 2));
        for (const auto& a : r.inconsistencies) {
            for (const auto& e : a.support) EXPECT_TRUE(e.is_premise() && kb.in_sigma(e.formula()));
            EXPECT_FALSE(oracle::satisfiable(a.support.propositions()));
        }
    }
}

TEST(Prove, EveryMinimalInconsistentSubsetIsAClosureSupport)
{
    oracle::Random rnd(202);
    int checked = 0;
    for (int i = 0; i < 150; ++i) {
        const auto kb = rnd.kb(4, 6, 0);
        std::vector<SupportElement> els;
        for (const auto& s : kb.sigma) els.push_back(SupportElement::premise(s));
        Tableau t;
        for (const auto& s : kb.sigma) t.add_premise(s);
        t.saturate();
        std::set<std::string> found;
        for (const auto& s : t.closure_supports({0, true})) found.insert(s.key());
        for (const auto& m : oracle::minimal_inconsistent(els)) {
            ++checked;
            EXPECT_TRUE(found.count(m.key())) << render_support(m);
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(Prove, EntailmentCorrespondence)
{
    oracle::Random rnd(303);
    for (int i = 0; i < 200; ++i) {
        const auto kb = rnd.kb(5, 4, 0);
        const Formula goal = rnd.formula(5, 2);
        const auto r = prove(kb, goal);
        const bool entailed = oracle::entails(kb.sigma, goal);
        if (oracle::satisfiable(kb.sigma)) {
            EXPECT_EQ(!r.arguments.empty(), entailed) << render_formula(goal);
        } else {
            EXPECT_FALSE(r.inconsistencies.empty());
        }
        for (const auto& a : r.arguments) EXPECT_TRUE(oracle::entails(a.support.propositions(), goal));
    }
}

TEST(Invariant, NodeSatisfiedIffSomeChildIs)
{
    oracle::Random rnd(404);
    for (int i = 0; i < 60; ++i) {
        const auto kb = rnd.kb(4, 4, 0);
        for (bool exclusive : {false, true}) {
            Tableau t;
            t.set_exclusive(exclusive);
            for (const auto& s : kb.sigma) t.add_premise(s);
            t.saturate();
            for (int n = 0; n < static_cast<int>(t.nodes().size()); ++n) {
                const auto& kids = t.node(n).children;
                if (kids.empty()) continue;
                EXPECT_LE(kids.size(), exclusive ? 3u : 2u);
                const auto here = branch_formulas(t, n);
                oracle::for_each_model(here, [&](const std::map<std::string, bool>& v) {
                    auto holds = [&](const std::vector<Formula>& fs) {
                        return std::all_of(fs.begin(), fs.end(), [&](const Formula& g) { return oracle::eval(g, v); });
                    };
                    const bool any = std::any_of(kids.begin(), kids.end(), [&](int c) { return holds(branch_formulas(t, c)); });
                    EXPECT_EQ(holds(here), any);
                    return true;
                });
            }
        }
    }
}

TEST(Invariant, FreshConstantsAreNew)
{
    for (const char* text : {"sigma: exists X. p(X). sigma: exists Y. q(Y). sigma: ~exists Z. (p(Z) & q(Z)).",
                             "sigma: forall X. exists Y. r(X, Y). sigma: r(a, b).",
                             "sigma: ~forall X. p(X). sigma: p(c1) | exists X. ~q(X)."}) {
        Tableau t;
        for (const auto& s : parse_knowledge_base(text).sigma) t.add_premise(s);
        t.saturate();
        std::set<Term> introduced;
        for (int n = 0; n < static_cast<int>(t.nodes().size()); ++n) {
            const auto& rw = t.node(n).rewrite;
            if (!rw || !rw->fresh) continue;
            EXPECT_TRUE(introduced.insert(*rw->fresh).second) << text;
            std::set<Term> before;
            for (const auto& e : t.branch(n).entries) e.formula().collect_ground_terms(before);
            EXPECT_FALSE(before.count(*rw->fresh)) << text;
        }
        EXPECT_FALSE(introduced.empty());
    }
}

TEST(Snapshot, RestoreIsExact)
{
    Tableau t;
    t.add_premise(f("p | q"));
    t.add_premise(f("r -> s"));
    t.saturate();
    const std::string before = t.dump_text();
    const auto leaves = t.leaves();
    const auto snap = t.snapshot(leaves);
    for (int l : leaves) t.add_test(l, f("s"));
    t.saturate();
    EXPECT_NE(t.dump_text(), before);
    t.restore(snap);
    EXPECT_EQ(t.dump_text(), before);
}
