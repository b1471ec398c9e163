#include "argtab/report.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

using namespace argtab;

namespace {

Formula f(std::string_view s) { return parse_formula(s); }

const char* chain_kb = "sigma: p | q. sigma: ~q. rule r1: p ~> r. rule r2: r ~> s. query s.";

Argument chain_argument()
{
    return derive(parse_knowledge_base(chain_kb)).arguments_for(f("s"))->front();
}

int cli(const std::string& args)
{
    const std::string cmd = std::string(ARGTAB_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string sample(const char* name) { return std::string(ARGTAB_SAMPLES) + "/" + name; }

} // namespace

TEST(Text, NestedTree)
{
    EXPECT_EQ(render_argument_text(chain_argument()),
              "      p | q\n"
              "      ~q\n"
              "    |- p ~> r => r\n"
              "  |- r ~> s => s\n"
              "|- s");
}

TEST(Text, ConstraintViolationTree)
{
    const auto st = derive(parse_knowledge_base(R"(
        sigma: p | q. sigma: ~q. sigma: s. sigma: v. sigma: ~(u & w).
        rule r1: p ~> r. rule r2: s ~> t. rule r3: r & t ~> u. rule r4: v ~> w.)"));
    EXPECT_EQ(render_argument_text(st.inconsistencies.front()),
              "  ~(u & w)\n"
              "      p | q\n"
              "      ~q\n"
              "    |- p ~> r => r\n"
              "      s\n"
              "    |- s ~> t => t\n"
              "  |- r & t ~> u => u\n"
              "    v\n"
              "  |- v ~> w => w\n"
              "|- false");
}

TEST(Text, PremiseOnlyFitsOnOneLine)
{
    const Argument a{{SupportElement::premise(f("p | q")), SupportElement::premise(f("~q"))}, f("p")};
    EXPECT_EQ(render_argument_text(a), "p | q, ~q |- p");
    EXPECT_EQ(render_argument_text({{}, f("p | ~p")}), "|- p | ~p");
}

TEST(Text, IndentGrowsWithDepth)
{
    const auto st = derive(parse_knowledge_base("sigma: a. rule r1: a ~> b. rule r2: b ~> c. rule r3: c ~> d. rule r4: d ~> e. query e."));
    const std::string text = render_argument_text(st.arguments_for(f("e"))->front());
    std::vector<std::size_t> indents;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) indents.push_back(line.find_first_not_of(' '));
    ASSERT_EQ(indents.size(), 6u);
    for (std::size_t i = 1; i < indents.size(); ++i) EXPECT_LT(indents[i], indents[i - 1]);
}

TEST(Json, ArgumentSchema)
{
    EXPECT_EQ(argument_to_json(chain_argument()).dump(),
              R"({"conclusion":{"formula":"s"},"support":[{"rule":"r2","instance":"r ~> s","antecedent_support":)"
              R"([{"rule":"r1","instance":"p ~> r","antecedent_support":[{"premise":"p | q"},{"premise":"~q"}]}]}],)"
              R"x("text":"({({({p | q, ~q}, p ~> r)}, r ~> s)}, s)"})x");
}

TEST(Json, ReportIsVersionedAndDeterministic)
{
    const auto kb = parse_knowledge_base(chain_kb);
    RunConfig cfg;
    const Report a = run(kb, cfg), b = run(kb, cfg);
    EXPECT_EQ(a.data["schema"], 1);
    EXPECT_EQ(a.data.dump(), b.data.dump());
    EXPECT_EQ(report_text(a), report_text(b));
    EXPECT_EQ(a.exit_status, 0);
    EXPECT_EQ(a.data["queries"][0]["arguments"][0]["text"], "({({({p | q, ~q}, p ~> r)}, r ~> s)}, s)");
    EXPECT_EQ(a.data["framework"]["statuses"][0]["status"], "justified");

    cfg.mode = Mode::Cases;
    EXPECT_EQ(run(kb, cfg).data.dump(), run(kb, cfg).data.dump());
}

TEST(Run, CasesReportListsLocalClosureAndUndercutters)
{
    const auto kb = parse_knowledge_base("sigma: ~(p & q). sigma: r | s. sigma: t. rule r1: r ~> p. rule r2: t ~> q.");
    RunConfig cfg;
    cfg.mode = Mode::Cases;
    const Report r = run(kb, cfg);
    ASSERT_EQ(r.data["local_closures"].size(), 1u);
    EXPECT_EQ(r.data["local_closures"][0]["text"], "({~(p & q), ({r | s}, r ~> p), ({t}, t ~> q)}, false)");
    std::set<std::string> us;
    for (const auto& u : r.data["merged"]["undercutters"]) us.insert(u["text"].get<std::string>());
    EXPECT_EQ(us, (std::set<std::string>{"({~(p & q), ({t}, t ~> q)}, not(r ~> p))",
                                         "({~(p & q), ({r | s}, r ~> p)}, not(t ~> q))"}));
}

TEST(Run, ClassicModeWithoutQueriesReportsInconsistencies)
{
    RunConfig cfg;
    cfg.mode = Mode::Classic;
    const Report r = run(parse_knowledge_base("sigma: p. sigma: ~p."), cfg);
    EXPECT_EQ(r.data["framework"]["conflicts"].size(), 1u);
    EXPECT_EQ(r.data["framework"]["undercutters"].size(), 2u);
}

TEST(Budget, Overrides)
{
    const Budget b = parse_budget("gamma_rounds=5,depth_cap=4");
    EXPECT_EQ(b.gamma_rounds, 5);
    EXPECT_EQ(b.depth_cap, 4);
    EXPECT_EQ(b.fresh_constants, Budget{}.fresh_constants);
    EXPECT_THROW(parse_budget("depth_cap=0"), std::invalid_argument);
    EXPECT_THROW(parse_budget("speed=3"), std::invalid_argument);
    EXPECT_THROW(parse_budget("depth_cap"), std::invalid_argument);
}

TEST(Cli, ExitStatuses)
{
    EXPECT_EQ(cli(sample("chain.kb")), 0);
    EXPECT_EQ(cli(sample("chain.kb") + " --mode classic --query 'p'"), 0);
    EXPECT_EQ(cli(sample("conflict.kb")), 1);
    EXPECT_EQ(cli(sample("either_way.kb")), 1);
    EXPECT_EQ(cli(sample("either_way.kb") + " --mode cases"), 0);
    EXPECT_EQ(cli(sample("party.kb") + " --mode cases"), 1);
    EXPECT_EQ(cli(sample("duel.kb") + " --mode cases --semantics preferred"), 1);
    EXPECT_EQ(cli(sample("missing.kb")), 2);
    EXPECT_EQ(cli(sample("chain.kb") + " --mode bogus"), 2);
    EXPECT_EQ(cli(sample("chain.kb") + " --budget depth_cap=x"), 2);

    const std::string bad = ::testing::TempDir() + "argtab_bad.kb";
    std::ofstream(bad) << "sigma: p &.\n";
    EXPECT_EQ(cli(bad), 2);

    const std::string endless = ::testing::TempDir() + "argtab_endless.kb";
    std::ofstream(endless) << "sigma: forall X. exists Y. r(X, Y).\nquery s(c).\n";
    EXPECT_EQ(cli(endless + " --budget fresh_constants=2"), 3);
    ::setenv("ARGTAB_BUDGET", "fresh_constants=2", 1);
    EXPECT_EQ(cli(endless), 3);
    ::unsetenv("ARGTAB_BUDGET");
}

TEST(Cli, EmitFormats)
{
    for (const char* emit : {"text", "json", "dot", "apx"})
        EXPECT_EQ(cli(sample("conflict.kb") + " --emit " + emit), 1) << emit;
}
