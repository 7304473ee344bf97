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

#include <optional>
#include <string>
#include <vector>

#include "qhl/classical/value.hpp"
#include "qhl/linalg.hpp"
#include "qhl/structures/interpretation.hpp"
#include "qhl/syntax/program.hpp"

namespace qhl::semantics {

    using classical::ClassicalState;
    using linalg::DensityOperator;
    using structures::Interpretation;
    using syntax::ProgramPtr;

    struct CqState {
        ClassicalState sigma;
        DensityOperator rho;

        double trace() const { return rho.trace(); }
    };

    // A null program is the terminated configuration.
    struct Configuration {
        ProgramPtr program;
        CqState state;
        std::size_t fuel = 0;  // loop entries still allowed on this path

        bool terminated() const { return !program; }
    };

    struct StepResult {
        std::vector<Configuration> next;
        bool blocked = false;  // a distinctness premise failed
    };

    // One transition. Entering a loop body consumes one unit of fuel.
    StepResult step(const Interpretation& in, const Configuration& c);

    struct RunOptions {
        std::size_t fuel = 100;
        std::size_t branch_cap = 1000000;
        double prune = 1e-14;
    };

    struct OutcomeMultiset {
        std::vector<CqState> items;
        std::vector<Configuration> residual;  // out of fuel
        double pruned_trace = 0.0;
        double blocked_trace = 0.0;

        double item_trace() const;
        double residual_trace() const;
    };

    // Breadth-first closure of step.
    OutcomeMultiset run(const Interpretation& in, const ProgramPtr& p, const CqState& s, const RunOptions& opt = {});
    // Recursive evaluator over the program structure; an independent oracle for run.
    OutcomeMultiset structural_sem(const Interpretation& in, const ProgramPtr& p, const CqState& s,
                                   const RunOptions& opt = {});

    // tr(rho) minus the terminated trace; residual, blocked and pruned mass all count.
    double nt_lower_bound(const OutcomeMultiset& out, const CqState& input);
    double nt_lower_bound(const Interpretation& in, const ProgramPtr& p, const CqState& s, const RunOptions& opt = {});

    // Sum of the items at sigma; zero operator when absent.
    DensityOperator theta_of(const OutcomeMultiset& out, const ClassicalState& sigma, const linalg::RegisterLayout& layout);
    // One entry per classical state, sorted; entries with trace below `prune` dropped.
    std::vector<std::pair<ClassicalState, DensityOperator>> normalize(const OutcomeMultiset& out,
                                                                        const linalg::RegisterLayout& layout,
                                                                        double prune = 1e-14);

    // Items equal up to permutation: classical states exact, operators within tol elementwise.
    bool same_multiset(const std::vector<CqState>& a, const std::vector<CqState>& b, double tol = 1e-12);

    // Total trace of items and residual does not exceed the input trace plus tol.
    bool trace_non_increasing(const OutcomeMultiset& out, const CqState& input, double tol = 1e-12);

    enum class Equivalence { Equivalent, Different, Inconclusive };
    const char* equivalence_name(Equivalence e);

    struct EquivalenceResult {
        Equivalence verdict = Equivalence::Equivalent;
        std::optional<std::size_t> input;   // witness input index
        std::optional<ClassicalState> sigma;  // witness output state
        std::string reason;
    };

    EquivalenceResult equivalent(const Interpretation& in, const ProgramPtr& p1, const ProgramPtr& p2,
                                 const std::vector<CqState>& inputs, const RunOptions& opt = {}, double tol = 1e-9);

}  // namespace qhl::semantics
