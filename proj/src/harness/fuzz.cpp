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
#include "qhl/harness/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qhl/error.hpp"
#include "qhl/version.hpp"

namespace qhl::harness {

    using linalg::ComplexMatrix;
    using linalg::DensityOperator;
    using linalg::RegisterLayout;
    using semantics::CqState;

    io::json to_json(const RunConfig& c) {
        return io::json{{"fuel", c.fuel},
                        {"branch_cap", c.branch_cap},
                        {"samples", c.samples},
                        {"seed", c.seed},
                        {"eps", c.eps},
                        {"residual_eps", c.residual_eps},
                        {"exhaustive_sigma", c.exhaustive_sigma}};
    }

    const char* input_verdict_name(InputVerdict v) {
        switch (v) {
            case InputVerdict::Consistent: return "consistent";
            case InputVerdict::Violation: return "violation";
            case InputVerdict::Inconclusive: return "inconclusive-input";
            case InputVerdict::Skipped: return "skipped";
        }
        return "?";
    }

    const char* fuzz_verdict_name(FuzzVerdict v) {
        switch (v) {
            case FuzzVerdict::Consistent: return "consistent";
            case FuzzVerdict::Inconsistent: return "inconsistent";
            case FuzzVerdict::Inconclusive: return "inconclusive";
            case FuzzVerdict::Vacuous: return "vacuous";
        }
        return "?";
    }

    std::uint64_t input_seed(std::uint64_t seed, std::size_t index) {
        // splitmix64 of the pair
        std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index) + 1;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    io::json to_json(const FuzzReport& r) {
        io::json recs = io::json::array();
        for (const auto& x : r.records) {
            io::json j{{"index", x.index},
                       {"sigma", io::state_to_json(x.sigma)},
                       {"rho", x.rho_kind},
                       {"rho_seed", x.rho_seed},
                       {"verdict", input_verdict_name(x.verdict)}};
            if (x.verdict != InputVerdict::Skipped) {
                j["lhs"] = x.lhs;
                j["rhs"] = x.rhs;
                j["nt"] = x.nt;
                j["residual"] = x.residual;
                j["margin"] = x.margin;
            }
            if (!x.note.empty()) j["note"] = x.note;
            recs.push_back(std::move(j));
        }
        io::json j{{"tool", kToolName},
                   {"version", kVersion},
                   {"triple", prover::to_json(r.triple)},
                   {"mode", prover::mode_name(r.triple.mode)},
                   {"config", to_json(r.config)},
                   {"seed", r.config.seed},
                   {"sigma_mode", r.sigma_mode},
                   {"sigma_count", r.sigma_count},
                   {"inputs", r.records.size()},
                   {"consistent", r.consistent},
                   {"violations", r.violations},
                   {"inconclusive", r.inconclusive},
                   {"skipped", r.skipped},
                   {"worst_trace_excess", r.worst_trace_excess},
                   {"verdict", fuzz_verdict_name(r.verdict)}};
        j["worst_margin"] = r.has_margin ? io::json(r.worst_margin) : io::json(nullptr);
        if (r.config.keep_records) j["records"] = std::move(recs);
        return j;
    }

    namespace {

        std::set<std::string> triple_vars(const HoareTriple& t) {
            std::set<std::string> v;
            classical::collect_free_vars(*t.pre.phi, v);
            classical::collect_free_vars(*t.post.phi, v);
            auto a = assertions::cv(*t.pre.a);
            auto b = assertions::cv(*t.post.a);
            auto p = syntax::classical_vars(*t.program);
            v.insert(a.begin(), a.end());
            v.insert(b.begin(), b.end());
            v.insert(p.begin(), p.end());
            return v;
        }

        RegisterLayout triple_layout(const HoareTriple& t, const Interpretation& in) {
            std::set<std::string> bases;
            for (const auto& r : syntax::quantum_vars(*t.program)) bases.insert(r.base);
            for (const auto& q : assertions::sig(*t.pre.a)) bases.insert(q.base);
            for (const auto& q : assertions::sig(*t.post.a)) bases.insert(q.base);
            return in.layout_for(bases);
        }

        double evaluate(const Interpretation& in, const classical::ClassicalState& s, const assertions::Predicate& a,
                        const DensityOperator& rho, bool& defined, std::string& why) {
            auto r = assertions::eval_predicate(in, s, a);
            defined = r.defined;
            if (!r.defined) {
                why = r.reason;
                return 0;
            }
            return linalg::trace_product(r.op, r.layout, rho, in.tolerances().herm);
        }

    }  // namespace

    FuzzReport fuzz_triple(const HoareTriple& t, const Interpretation& in, const RunConfig& cfg) {
        FuzzReport rep;
        rep.triple = t;
        rep.config = cfg;

        auto domain = classical::Domain::over(triple_vars(t), in.types());
        if (!domain.enumerable()) fail(ErrorKind::DomainTooLarge, "fuzz domain: " + domain.reason());

        constexpr std::uint64_t kScanLimit = 1000000;
        std::vector<std::uint64_t> sat;
        bool exhaustive = false;
        if (domain.size() <= kScanLimit) {
            for (std::uint64_t i = 0; i < domain.size(); ++i)
                if (classical::satisfies(domain.state(i), *t.pre.phi)) sat.push_back(i);
            rep.sigma_count = sat.size();
            exhaustive = sat.size() <= cfg.exhaustive_sigma;
            if (sat.empty()) {
                rep.sigma_mode = "exhaustive";
                rep.verdict = FuzzVerdict::Vacuous;
                return rep;
            }
        }
        rep.sigma_mode = exhaustive ? "exhaustive" : "sampled";

        RegisterLayout layout = triple_layout(t, in);
        std::size_t dim = layout.dimension();
        semantics::RunOptions opt{cfg.fuel, cfg.branch_cap, in.tolerances().prune};

        for (std::size_t i = 0; i < cfg.samples; ++i) {
            FuzzRecord rec;
            rec.index = i;
            rec.rho_seed = input_seed(cfg.seed, i);
            std::mt19937_64 rng(rec.rho_seed);

            std::size_t s = 0, round = i;
            if (exhaustive) {
                s = i % sat.size();
                round = i / sat.size();
                rec.sigma = domain.state(sat[s]);
            } else if (!sat.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, sat.size() - 1);
                rec.sigma = domain.state(sat[pick(rng)]);
            } else {
                bool found = false;
                for (int tries = 0; tries < 10000 && !found; ++tries) {
                    rec.sigma = domain.sample(rng);
                    found = classical::satisfies(rec.sigma, *t.pre.phi);
                }
                if (!found) {
                    rec.verdict = InputVerdict::Skipped;
                    rec.note = "no satisfying classical state sampled";
                    rep.records.push_back(std::move(rec));
                    continue;
                }
            }

            ComplexMatrix m;
            switch ((round + s) % 3) {
                case 0: {
                    std::size_t k = (round / 3 + s) % dim;
                    auto e = linalg::basis_vector(dim, k);
                    m = linalg::outer(e, e);
                    rec.rho_kind = "basis " + std::to_string(k);
                    break;
                }
                case 1: {
                    auto v = linalg::random_unit_vector(dim, rng);
                    m = linalg::outer(v, v);
                    rec.rho_kind = "pure";
                    break;
                }
                default: {
                    std::size_t rank = 1 + static_cast<std::size_t>(rng() % dim);
                    m = linalg::random_ginibre_density(dim, rng, rank);
                    rec.rho_kind = "mixed rank " + std::to_string(rank);
                }
            }
            CqState input{rec.sigma, DensityOperator(layout, m)};

            bool defined = false;
            std::string why;
            rec.lhs = evaluate(in, rec.sigma, *t.pre.a, input.rho, defined, why);
            if (!defined) {
                rec.verdict = InputVerdict::Skipped;
                rec.note = "precondition not well-defined: " + why;
                rep.records.push_back(std::move(rec));
                continue;
            }

            semantics::OutcomeMultiset out;
            try {
                out = semantics::run(in, t.program, input, opt);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::BranchExplosion) throw;
                rec.verdict = InputVerdict::Inconclusive;
                rec.note = e.what();
                rep.records.push_back(std::move(rec));
                continue;
            }
            rep.worst_trace_excess =
                std::max(rep.worst_trace_excess, out.item_trace() + out.residual_trace() - input.trace());

            double sum = 0;
            for (const auto& item : out.items) {
                if (!classical::satisfies(item.sigma, *t.post.phi)) continue;
                bool ok = false;
                std::string ignored;
                double v = evaluate(in, item.sigma, *t.post.a, item.rho, ok, ignored);
                if (ok) sum += v;
            }
            rec.nt = semantics::nt_lower_bound(out, input);
            rec.residual = out.residual_trace();
            rec.rhs = t.mode == Mode::Partial ? sum + rec.nt : sum;
            rec.margin = rec.rhs - rec.lhs;

            // In partial mode unfinished mass already counts as non-termination.
            if (t.mode == Mode::Total && rec.residual > cfg.residual_eps) {
                rec.verdict = InputVerdict::Inconclusive;
                rec.note = "termination not confirmed within fuel";
            } else {
                rec.verdict = rec.margin >= -cfg.eps ? InputVerdict::Consistent : InputVerdict::Violation;
            }

            if (!rep.has_margin || rec.margin < rep.worst_margin) rep.worst_margin = rec.margin;
            rep.has_margin = true;
            rep.records.push_back(std::move(rec));
        }

        for (const auto& r : rep.records) {
            switch (r.verdict) {
                case InputVerdict::Consistent: ++rep.consistent; break;
                case InputVerdict::Violation: ++rep.violations; break;
                case InputVerdict::Inconclusive: ++rep.inconclusive; break;
                case InputVerdict::Skipped: ++rep.skipped; break;
            }
        }
        if (rep.violations > 0) {
            rep.verdict = FuzzVerdict::Inconsistent;
        } else if (rep.inconclusive > 0) {
            rep.verdict = FuzzVerdict::Inconclusive;
        } else if (rep.consistent > 0) {
            rep.verdict = FuzzVerdict::Consistent;
        } else {
            rep.verdict = FuzzVerdict::Vacuous;
        }
        return rep;
    }

    CqState load_cq_state(const io::json& j, const Interpretation& in) {
        if (!j.is_object()) fail(ErrorKind::Schema, "state file must be a JSON object");
        CqState s;
        if (j.contains("sigma")) s.sigma = io::state_from_json(j.at("sigma"), in.types());
        RegisterLayout full = in.full_layout();
        RegisterLayout layout = full;
        if (j.contains("layout")) {
            std::vector<linalg::SystemSpec> systems;
            for (const auto& id : j.at("layout")) {
                auto p = full.position(id.get<std::string>());
                if (!p) fail(ErrorKind::UnknownSystem, "unknown system " + id.get<std::string>());
                systems.push_back(full.systems()[*p]);
            }
            layout = RegisterLayout(systems, in.limits().dimension_cap);
        }
        const auto& rho = io::require(j, "rho", "state file");
        if (rho.contains("pure")) {
            auto v = io::vector_from_json(rho.at("pure"));
            if (static_cast<std::size_t>(v.size()) != layout.dimension())
                fail(ErrorKind::DimensionMismatch, "pure state has " + std::to_string(v.size()) +
                                                       " entries, layout dimension is " +
                                                       std::to_string(layout.dimension()));
            s.rho = DensityOperator::pure(layout, v);
        } else if (rho.contains("matrix")) {
            s.rho = DensityOperator(layout, io::matrix_from_json(rho.at("matrix")));
        } else {
            fail(ErrorKind::Schema, "rho needs 'pure' or 'matrix'");
        }
        s.rho.validate(in.tolerances());
        return s;
    }

    io::json cq_state_to_json(const CqState& s) {
        return io::json{{"sigma", io::state_to_json(s.sigma)},
                        {"layout", s.rho.layout().ids()},
                        {"trace", s.rho.trace()},
                        {"rho", {{"matrix", io::matrix_to_json(s.rho.matrix())}}}};
    }

}  // namespace qhl::harness
