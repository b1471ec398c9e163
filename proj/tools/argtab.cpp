#include "argtab/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    CLI::App app{"Argumentation tableau reasoner"};
    std::string path;
    std::string mode = "defeasible";
    std::string semantics = "grounded";
    std::string emit = "text";
    std::string budget;
    std::vector<std::string> queries;

    app.add_option("file", path, "knowledge base file")->required();
    app.add_option("--mode", mode, "classic, defeasible or cases")
        ->check(CLI::IsMember({"classic", "defeasible", "cases"}));
    app.add_option("--semantics", semantics, "grounded, stable or preferred")
        ->check(CLI::IsMember({"grounded", "stable", "preferred"}));
    app.add_option("--query", queries, "formula to evaluate (repeatable)");
    app.add_option("--emit", emit, "text, json, dot or apx")->check(CLI::IsMember({"text", "json", "dot", "apx"}));
    app.add_option("--budget", budget,
                   "overrides such as gamma_rounds=3,fresh_constants=8,max_entries=100000,depth_cap=16,combination_cap=10000");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        argtab::RunConfig cfg;
        static const std::map<std::string, argtab::Mode> modes{
            {"classic", argtab::Mode::Classic}, {"defeasible", argtab::Mode::Defeasible}, {"cases", argtab::Mode::Cases}};
        static const std::map<std::string, argtab::Semantics> sems{{"grounded", argtab::Semantics::Grounded},
                                                                   {"stable", argtab::Semantics::Stable},
                                                                   {"preferred", argtab::Semantics::Preferred}};
        cfg.mode = modes.at(mode);
        cfg.semantics = sems.at(semantics);
        if (const char* env = std::getenv("ARGTAB_BUDGET")) cfg.budget = argtab::parse_budget(env, cfg.budget);
        cfg.budget = argtab::parse_budget(budget, cfg.budget);
        for (const auto& q : queries) cfg.queries.push_back(argtab::parse_formula(q));

        std::ifstream in(path);
        if (!in) {
            std::cerr << "argtab: cannot open " << path << "\n";
            return 2;
        }
        const argtab::KnowledgeBase kb = argtab::parse_knowledge_base(in);
        const argtab::Report report = argtab::run(kb, cfg);

        if (emit == "json") std::cout << report.data.dump(2) << "\n";
        else if (emit == "dot") std::cout << report.tableau_dot;
        else if (emit == "apx") std::cout << report.apx;
        else std::cout << argtab::report_text(report);
        return report.exit_status;
    } catch (const argtab::ParseError& e) {
        std::cerr << path << ":" << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "argtab: " << e.what() << "\n";
        return 2;
    }
}
