// Copyright 2026 The qhlplus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <doctest.h>

#include <filesystem>

#include "qhl/error.hpp"
#include "qhl/harness/qft.hpp"
#include "qhl/prover/proof.hpp"
#include "qhl/semantics/semantics.hpp"

using namespace qhl::prover;
using namespace qhl::linalg;
using qhl::io::json;

namespace {

    const std::string corpus = QHL_CORPUS_DIR;

    Script load(const std::string& text) { return load_script(json::parse(text), corpus); }

    NodeVerdict verdict_of(const std::string& text) {
        auto s = load(text);
        return check_script(*s.root, *s.interp).verdict;
    }

    std::vector<std::string> corpus_scripts() {
        std::vector<std::string> out;
        for (const auto& e : std::filesystem::directory_iterator(corpus))
            if (e.path().extension() == ".json" && e.path().filename() != "interp.json") out.push_back(e.path().string());
        std::sort(out.begin(), out.end());
        return out;
    }

    void collect(const NodePtr& n, std::vector<NodePtr>& out) {
        out.push_back(n);
        for (const auto& p : n->premises) collect(p, out);
    }

    ComplexMatrix pauli_x() {
        ComplexMatrix m(2, 2);
        m << 0, 1, 1, 0;
        return m;
    }

    const char* kMeasTemplate = R"({
      "interpretation": "interp.json",
      "proof": {"rule": "Meas", "witnesses": {"y": "y"},
        "conclusion": {"pre": {"phi": "PRE", "A": "F_M.M(y)[q]{[|y>_q]}"},
                       "program": "x := M[q]",
                       "post": {"phi": "POST", "A": "[|x>_q]"}}}})";

    std::string meas_script(const std::string& pre, const std::string& post) {
        std::string s = kMeasTemplate;
        s.replace(s.find("PRE"), 3, pre);
        s.replace(s.find("POST"), 4, post);
        return s;
    }

}  // namespace

TEST_CASE("Skip") {
    CHECK(verdict_of(R"({"proof": {"rule": "Skip", "conclusion":
        {"pre": {"phi": "true", "A": "I"}, "program": "skip", "post": {"phi": "true", "A": "I"}}}})") ==
          NodeVerdict::Accepted);
    CHECK(verdict_of(R"({"proof": {"rule": "Skip", "conclusion":
        {"pre": {"phi": "true", "A": "I"}, "program": "skip", "post": {"phi": "true", "A": "O"}}}})") ==
          NodeVerdict::Rejected);
    CHECK(verdict_of(R"({"proof": {"rule": "Skip", "conclusion":
        {"pre": {"phi": "true", "A": "I"}, "program": "skip; skip", "post": {"phi": "true", "A": "I"}}}})") ==
          NodeVerdict::Rejected);
}

TEST_CASE("Meas requires a fresh ghost variable") {
    CHECK(verdict_of(meas_script("true", "x = y")) == NodeVerdict::Accepted);
    CHECK(verdict_of(meas_script("y <= 1", "y <= 1 && x = y")) == NodeVerdict::Rejected);
    CHECK(verdict_of(meas_script("k = 0", "k = 0 && x = y")) == NodeVerdict::Accepted);
    // the pre-condition must be the substitution instance of the post-condition
    CHECK(verdict_of(meas_script("k = 1", "k = 0 && x = y")) == NodeVerdict::Rejected);
}

TEST_CASE("proportionality of Kraus operators") {
    ComplexMatrix half = identity(2) / 2.0;
    CHECK(proportional_ops({half, half}, {identity(2)}, 64, 1).verdict == qhl::assertions::Verdict::Holds);
    auto f = proportional_ops({pauli_x()}, {half}, 64, 1);
    CHECK(f.verdict == qhl::assertions::Verdict::Fails);
    CHECK(proportional_ops({pauli_x()}, {pauli_x()}, 64, 1).verdict == qhl::assertions::Verdict::Holds);
    // independent check of the refutation: X|0><0|X = |1><1| is not below |0><0|/4
    ComplexMatrix rho = outer(basis_vector(2, 0), basis_vector(2, 0));
    CHECK_FALSE(loewner_leq(pauli_x() * rho * pauli_x(), half * rho * half));
    CHECK(proportional_ops({identity(2) * 1.5}, {identity(2)}, 64, 1).verdict == qhl::assertions::Verdict::Fails);
    CHECK_THROWS_AS(proportional_ops({half}, {half, half}, 64, 1), qhl::Error);

    auto s = load(R"({"interpretation": "interp.json", "proof": {"rule": "Skip", "conclusion":
        {"pre": {"phi": "true", "A": "I"}, "program": "skip", "post": {"phi": "true", "A": "I"}}}})");
    std::vector<qhl::syntax::SubscriptedVar> r{qhl::syntax::parse_qvar("r")};
    auto ok = check_proportional(*s.interp, "Halves", "Half", {}, r, qhl::classical::truth(), {}, 32, 1);
    CHECK(ok.verdict == qhl::assertions::Verdict::Holds);
    auto bad = check_proportional(*s.interp, "F_U.X", "Half", {}, r, qhl::classical::truth(), {}, 32, 1);
    CHECK(bad.verdict == qhl::assertions::Verdict::Fails);
    auto same = check_proportional(*s.interp, "Half", "Half", {}, r, qhl::classical::truth(), {}, 32, 1);
    CHECK(same.verdict == qhl::assertions::Verdict::Holds);
}

TEST_CASE("Halves against Half by hand") {
    // (I/2)^dag rho (I/2) = rho/4 is exactly the Half image, so each branch is bounded
    ComplexMatrix half = identity(2) / 2.0;
    CHECK(proportional_ops({half, half}, {half}, 64, 1).verdict == qhl::assertions::Verdict::Holds);
}

TEST_CASE("generated QFT scripts") {
    for (int n = 1; n <= 3; ++n) {
        auto ex = qhl::harness::generate_qft(n);
        auto s = load_script(ex.script, ".");
        CHECK(check_script(*s.root, *s.interp).verdict == NodeVerdict::Accepted);
        auto bad = qhl::harness::generate_qft(n, {false, true});
        auto sb = load_script(bad.script, ".");
        CHECK(check_script(*sb.root, *sb.interp).verdict == NodeVerdict::Rejected);
    }
    auto one = qhl::harness::generate_qft(1);
    CHECK(one.program_text == "H[q[1]]");
    auto s1 = load_script(one.script, ".");
    CHECK(s1.root->rule == Rule::Conseq);
    REQUIRE(s1.root->premises.size() == 1);
    CHECK(s1.root->premises[0]->rule == Rule::Uni);
    CHECK_THROWS_AS(qhl::harness::generate_qft(0), qhl::Error);
    CHECK_THROWS_AS(qhl::harness::generate_qft(7), qhl::Error);
}

TEST_CASE("the corpus covers every rule and is accepted") {
    std::set<Rule> rules;
    auto files = corpus_scripts();
    CHECK(files.size() >= 12);
    for (const auto& f : files) {
        auto s = load_script_file(f);
        CHECK_MESSAGE(check_script(*s.root, *s.interp).verdict == NodeVerdict::Accepted, f);
        std::vector<NodePtr> nodes;
        collect(s.root, nodes);
        for (const auto& n : nodes) rules.insert(n->rule);
    }
    CHECK(rules.size() == 14);
}

TEST_CASE("mutants are rejected") {
    for (const auto& e : std::filesystem::directory_iterator(corpus + "/mutants")) {
        if (e.path().extension() != ".json") continue;
        auto s = load_script_file(e.path().string());
        CHECK_MESSAGE(check_script(*s.root, *s.interp).verdict == NodeVerdict::Rejected, e.path().string());
    }
}

TEST_CASE("verdicts are local to a node") {
    for (const auto& f : corpus_scripts()) {
        auto s = load_script_file(f);
        std::vector<NodePtr> nodes;
        collect(s.root, nodes);
        for (const auto& n : nodes) {
            if (n->premises.empty()) continue;
            auto orig = check_node(*n, *s.interp);
            // same conclusions, bogus derivations underneath
            auto copy = std::make_shared<ProofNode>(*n);
            for (auto& p : copy->premises) {
                auto stub = std::make_shared<ProofNode>();
                stub->rule = Rule::Skip;
                stub->conclusion = p->conclusion;
                p = stub;
            }
            auto again = check_node(*copy, *s.interp);
            CHECK(again.verdict == orig.verdict);
            CHECK(to_json(again).dump() == to_json(orig).dump());
        }
    }
}

TEST_CASE("loop rules") {
    auto total = load_script_file(corpus + "/loop_total.json");
    CHECK(check_script(*total.root, *total.interp).verdict == NodeVerdict::Accepted);

    // partial-correctness loop rule is not sound for total correctness
    auto j = qhl::io::read_json_file(corpus + "/loop_partial.json");
    j["mode"] = "total";
    auto s = load_script(j, corpus);
    CHECK(check_script(*s.root, *s.interp).verdict == NodeVerdict::Rejected);

    // ranking variable occurring in the program is not fresh
    auto t = qhl::io::read_json_file(corpus + "/loop_total.json");
    t["proof"]["witnesses"]["z"] = "k";
    auto st = load_script(t, corpus);
    CHECK(check_script(*st.root, *st.interp).verdict == NodeVerdict::Rejected);

    // the variant must be bounded below by the invariant
    auto u = qhl::io::read_json_file(corpus + "/loop_total.json");
    u["proof"]["witnesses"]["t"] = "k - 1";
    auto su = load_script(u, corpus);
    CHECK(check_script(*su.root, *su.interp).verdict == NodeVerdict::Rejected);
}

TEST_CASE("accepted total loops terminate empirically") {
    auto s = load_script_file(corpus + "/loop_total.json");
    const auto& t = s.root->conclusion;
    auto layout = s.interp->full_layout();
    std::mt19937_64 rng(5);
    for (std::int64_t k = 0; k <= 3; ++k) {
        qhl::classical::ClassicalState sigma({{"k", qhl::classical::Value(k)}, {"x", qhl::classical::Value(std::int64_t{0})}});
        if (!qhl::classical::satisfies(sigma, *t.pre.phi)) continue;
        qhl::semantics::CqState in{sigma, DensityOperator(layout, random_ginibre_density(layout.dimension(), rng))};
        double prev = 2;
        for (std::size_t fuel = 0; fuel <= 5; ++fuel) {
            double nt = qhl::semantics::nt_lower_bound(*s.interp, t.program, in, {fuel});
            CHECK(nt <= prev + 1e-12);
            prev = nt;
        }
        CHECK(prev < 1e-12);
    }
}

TEST_CASE("structural mismatches are rejected") {
    // Cond premises must carry the guard
    auto c = qhl::io::read_json_file(corpus + "/cond.json");
    c["proof"]["premises"][0]["conclusion"]["pre"]["phi"] = "true";
    auto sc = load_script(c, corpus);
    CHECK(check_script(*sc.root, *sc.interp).verdict == NodeVerdict::Rejected);

    // Init needs the F_B pre-condition
    auto i = qhl::io::read_json_file(corpus + "/init.json");
    i["proof"]["premises"][0]["conclusion"]["pre"]["A"] = "I";
    auto si = load_script(i, corpus);
    CHECK(check_script(*si.root, *si.interp).verdict == NodeVerdict::Rejected);

    // a Conseq weakening the pre-condition is unsound
    CHECK(verdict_of(R"({"interpretation": "interp.json", "proof": {"rule": "Conseq",
        "conclusion": {"pre": {"phi": "true", "A": "I"}, "program": "skip", "post": {"phi": "true", "A": "[|0>_q]"}},
        "premises": [{"rule": "Skip", "conclusion":
          {"pre": {"phi": "true", "A": "[|0>_q]"}, "program": "skip", "post": {"phi": "true", "A": "[|0>_q]"}}}]}})") ==
          NodeVerdict::Rejected);

    // wrong premise count
    auto arity = load(R"({"proof": {"rule": "Seq", "conclusion":
        {"pre": {"phi": "true", "A": "I"}, "program": "skip; skip", "post": {"phi": "true", "A": "I"}}}})");
    CHECK(check_script(*arity.root, *arity.interp).verdict == NodeVerdict::Rejected);
}

TEST_CASE("semantic side conditions over real variables are inconclusive without a grid") {
    std::string text = R"({"interpretation": {"classical_vars": {"p": "Real"}, "quantum_vars": [{"name": "q", "dim": 2}]},
      "proof": {"rule": "Conseq", GRID
        "conclusion": {"pre": {"phi": "p >= 0", "A": "[|0>_q]"}, "program": "skip", "post": {"phi": "true", "A": "[|0>_q]"}},
        "premises": [{"rule": "Skip", "conclusion":
          {"pre": {"phi": "p >= 0", "A": "[|0>_q]"}, "program": "skip", "post": {"phi": "p >= 0", "A": "[|0>_q]"}}}]}})";
    std::string none = text, grid = text;
    none.replace(none.find("GRID"), 4, "");
    grid.replace(grid.find("GRID"), 4, R"("witnesses": {"grids": {"p": [0, 0.5, 1]}},)");
    CHECK(verdict_of(none) == NodeVerdict::Inconclusive);
    CHECK(verdict_of(grid) == NodeVerdict::Accepted);
}

TEST_CASE("checking is deterministic") {
    for (const auto& f : {corpus + "/accum1_meas.json", corpus + "/mutants/meas_y_free.json"}) {
        auto a = load_script_file(f), b = load_script_file(f);
        CHECK(to_json(check_script(*a.root, *a.interp)).dump() == to_json(check_script(*b.root, *b.interp)).dump());
    }
}

TEST_CASE("scripts round trip through JSON") {
    for (const auto& f : corpus_scripts()) {
        auto s = load_script_file(f);
        json again = {{"mode", mode_name(s.mode)}, {"proof", node_to_json(*s.root)}};
        auto back = load_script(again, corpus);
        back.interp = s.interp;
        CHECK(node_to_json(*back.root).dump() == node_to_json(*s.root).dump());
    }
}

TEST_CASE("rule names") {
    for (int r = 0; r < 14; ++r) CHECK(rule_from_name(rule_name(Rule(r))) == Rule(r));
    CHECK_THROWS_AS(rule_from_name("Magic"), qhl::Error);
    CHECK(mode_from_name("tot") == Mode::Total);
}
