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

#include <string>

#include "qhl/harness/fuzz.hpp"
#include "qhl/prover/proof.hpp"

namespace qhl::harness {

    struct QftOptions {
        bool recursive = false;    // section-recursive form with constant guards
        bool wrong_phase = false;  // perturb the postcondition (extra pi/2 phase on q[n])
    };

    struct QftExample {
        int n = 0;
        io::json interpretation;
        std::string program_text;
        std::string pre_text;   // A(j, 1:n)
        std::string post_text;  // B(j, 1:n)
        io::json script;        // loadable by prover::load_script
    };

    // 1 <= n <= 6.
    QftExample generate_qft(int n, const QftOptions& opt = {});

    struct QftOutcome {
        prover::CheckReport check;
        FuzzReport fuzz;
        std::size_t inputs = 0;       // basis inputs |j> simulated
        double max_deviation = 0;     // max |tr(sigma'(B) rho') - 1| over them
        bool trace_preserved = true;  // trace non-increase on every simulated run
        bool ok(double tol = 1e-9) const;
    };

    // Checks the script, fuzzes its root triple and simulates every basis input (sigma_j, |j><j|).
    QftOutcome run_qft_example(const QftExample& ex, const RunConfig& cfg = {});
    io::json to_json(const QftExample& ex, const QftOutcome& out);

}  // namespace qhl::harness
