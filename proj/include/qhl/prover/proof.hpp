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
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qhl/assertions/eval.hpp"
#include "qhl/syntax/program.hpp"

namespace qhl::prover {

    using assertions::CqAssertion;
    using assertions::Grids;
    using assertions::Verdict;
    using structures::Interpretation;
    using syntax::ProgramPtr;

    enum class Mode { Partial, Total };
    const char* mode_name(Mode m);
    Mode mode_from_name(const std::string& s);

    struct HoareTriple {
        CqAssertion pre;
        ProgramPtr program;
        CqAssertion post;
        Mode mode = Mode::Partial;
    };

    std::string to_string(const HoareTriple& t);
    io::json to_json(const HoareTriple& t);

    enum class Rule {
        Skip,
        Ass,
        Init,
        Uni,
        Meas,
        Seq,
        Cond,
        LoopPar,
        LoopTot,
        Conseq,
        Accum1,
        Accum2,
        Convex1,
        Convex2,
    };
    const char* rule_name(Rule r);
    Rule rule_from_name(const std::string& s);
    // Number of triple premises; LoopTot's validity premise is a side condition.
    std::optional<std::size_t> rule_arity(Rule r);

    struct Witnesses {
        std::optional<std::string> y;  // Meas
        classical::ExprPtr t;          // LoopTot variant
        std::optional<std::string> z;  // LoopTot ranking variable
        Grids grids;                   // entailment domains for Real variables
        std::size_t samples = 64;      // random states for the proportionality refutation
        std::uint64_t seed = 1;
    };

    struct ProofNode;
    using NodePtr = std::shared_ptr<const ProofNode>;

    struct ProofNode {
        Rule rule = Rule::Skip;
        HoareTriple conclusion;
        std::vector<NodePtr> premises;
        Witnesses witnesses;
        std::string label;
    };

    enum class NodeVerdict { Accepted, Rejected, Inconclusive };
    const char* node_verdict_name(NodeVerdict v);

    struct SideCondition {
        std::string name;
        Verdict verdict = Verdict::Holds;
        std::string detail;
    };

    struct NodeReport {
        std::string path;  // "root", "root.0", ...
        std::string label;
        Rule rule = Rule::Skip;
        NodeVerdict verdict = NodeVerdict::Accepted;
        std::string reason;
        std::vector<SideCondition> conditions;
    };

    struct CheckReport {
        NodeVerdict verdict = NodeVerdict::Accepted;
        std::vector<NodeReport> nodes;  // post-order
    };

    io::json to_json(const NodeReport& r);
    io::json to_json(const CheckReport& r);

    // Verdict of one node from its conclusion, its premises' conclusions and its witnesses.
    NodeReport check_node(const ProofNode& node, const Interpretation& in);
    CheckReport check_script(const ProofNode& root, const Interpretation& in);

    struct ProportionalResult {
        Verdict verdict = Verdict::Holds;
        std::string reason;
        std::optional<classical::ClassicalState> witness;
    };

    // F_i^dag rho F_i <= F'^dag rho F' for every i and density operator rho, with F' a single operator.
    ProportionalResult proportional_ops(const std::vector<linalg::ComplexMatrix>& f,
                                        const std::vector<linalg::ComplexMatrix>& fp, std::size_t samples,
                                        std::uint64_t seed, const linalg::Tolerances& tol = {});

    // The same relation for the instantiated symbols at every sigma satisfying `context`.
    ProportionalResult check_proportional(const Interpretation& in, const std::string& f, const std::string& fp,
                                          const std::vector<classical::ExprPtr>& params,
                                          const std::vector<syntax::SubscriptedVar>& targets,
                                          const classical::ExprPtr& context, const Grids& grids,
                                          std::size_t samples, std::uint64_t seed);

    // A loaded proof script. The interpretation is owned so parsed symbols stay valid.
    struct Script {
        std::shared_ptr<Interpretation> interp;
        Mode mode = Mode::Partial;
        std::map<std::string, ProgramPtr> programs;
        std::map<std::string, CqAssertion> assertions;
        NodePtr root;
    };

    // `base_dir` resolves relative interpretation and program file paths.
    Script load_script(const io::json& j, const std::string& base_dir = ".");
    Script load_script_file(const std::string& path);
    // A standalone triple document: {interpretation, mode, pre, program, post}.
    std::pair<std::shared_ptr<Interpretation>, HoareTriple> load_triple(const io::json& j,
                                                                         const std::string& base_dir = ".");

    io::json node_to_json(const ProofNode& n);

}  // namespace qhl::prover
