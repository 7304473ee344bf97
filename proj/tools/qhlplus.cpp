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
#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qhl/assertions/eval.hpp"
#include "qhl/error.hpp"
#include "qhl/harness/fuzz.hpp"
#include "qhl/harness/qft.hpp"
#include "qhl/prover/proof.hpp"
#include "qhl/semantics/semantics.hpp"
#include "qhl/structures/loader.hpp"
#include "qhl/syntax/parser.hpp"
#include "qhl/version.hpp"

namespace fs = std::filesystem;
using qhl::io::json;

namespace {

    constexpr int kOk = 0, kNegative = 1, kInconclusive = 2, kUsage = 3;

    bool is_file(const std::string& s) {
        std::error_code ec;
        return s.size() < 4096 && fs::is_regular_file(s, ec);
    }

    std::string slurp(const std::string& path) {
        std::ifstream f(path);
        if (!f) qhl::fail(qhl::ErrorKind::Io, "cannot read " + path);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    std::string dir_of(const std::string& path) {
        auto p = fs::path(path).parent_path().string();
        return p.empty() ? "." : p;
    }

    // A file path or inline JSON.
    json json_arg(const std::string& arg) {
        if (is_file(arg)) return qhl::io::read_json_file(arg);
        try {
            return json::parse(arg);
        } catch (const json::parse_error& e) {
            qhl::fail(qhl::ErrorKind::Usage, "'" + arg + "' is neither a file nor valid JSON");
        }
    }

    struct Context {
        std::string interp_path;
        std::shared_ptr<qhl::structures::Interpretation> interp;

        // --interp wins, then an embedded "interpretation" in any of the given documents.
        const qhl::structures::Interpretation& resolve(std::initializer_list<std::pair<const json*, std::string>> docs) {
            if (interp) return *interp;
            if (!interp_path.empty()) {
                interp = std::make_shared<qhl::structures::Interpretation>(
                    qhl::structures::load_interpretation_file(interp_path));
                return *interp;
            }
            for (const auto& [doc, base] : docs) {
                if (!doc || !doc->is_object() || !doc->contains("interpretation")) continue;
                const json& v = doc->at("interpretation");
                interp = std::make_shared<qhl::structures::Interpretation>(
                    v.is_string() ? qhl::structures::load_interpretation_file((fs::path(base) / v.get<std::string>()).string())
                                  : qhl::structures::load_interpretation(v));
                return *interp;
            }
            interp = std::make_shared<qhl::structures::Interpretation>(qhl::structures::Interpretation::with_builtins());
            return *interp;
        }
    };

    // Program given as text, a text file, or a JSON file with "program" (and maybe "interpretation").
    struct ProgramSource {
        std::string text;
        json doc;
        std::string base = ".";
    };

    ProgramSource program_source(const std::string& arg) {
        ProgramSource s;
        if (is_file(arg)) {
            s.base = dir_of(arg);
            std::string raw = slurp(arg);
            if (fs::path(arg).extension() == ".json") {
                s.doc = json::parse(raw);
                s.text = qhl::io::require(s.doc, "program", arg).get<std::string>();
            } else {
                s.text = raw;
            }
        } else {
            s.text = arg;
        }
        return s;
    }

    void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

    std::uint64_t effective_seed(std::uint64_t seed) {
        if (const char* env = std::getenv("QHL_SEED")) {
            try {
                return std::stoull(env);
            } catch (...) {
                qhl::fail(qhl::ErrorKind::Usage, "QHL_SEED must be an unsigned integer");
            }
        }
        return seed;
    }

    int verdict_exit(qhl::prover::NodeVerdict v) {
        switch (v) {
            case qhl::prover::NodeVerdict::Accepted: return kOk;
            case qhl::prover::NodeVerdict::Rejected: return kNegative;
            default: return kInconclusive;
        }
    }

    int fuzz_exit(qhl::harness::FuzzVerdict v) {
        switch (v) {
            case qhl::harness::FuzzVerdict::Consistent: return kOk;
            case qhl::harness::FuzzVerdict::Inconsistent: return kNegative;
            default: return kInconclusive;
        }
    }

    int worst(int a, int b) {
        // rejected dominates inconclusive, which dominates success
        if (a == kNegative || b == kNegative) return kNegative;
        return std::max(a, b);
    }

    json multiset_json(const qhl::semantics::OutcomeMultiset& out, const qhl::semantics::CqState& input) {
        json items = json::array();
        for (const auto& it : out.items) items.push_back(qhl::harness::cq_state_to_json(it));
        return json{{"items", std::move(items)},
                    {"item_trace", out.item_trace()},
                    {"residual_configurations", out.residual.size()},
                    {"residual_trace", out.residual_trace()},
                    {"blocked_trace", out.blocked_trace},
                    {"pruned_trace", out.pruned_trace},
                    {"nt_lower_bound", qhl::semantics::nt_lower_bound(out, input)}};
    }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification toolkit for quantum while-programs with classical variables"};
    app.set_version_flag("--version", std::string(qhl::kToolName) + " " + qhl::kVersion);
    app.require_subcommand(1);

    Context ctx;
    app.add_option("--interp", ctx.interp_path, "interpretation JSON")->check(CLI::ExistingFile);

    std::string prog_arg, state_arg, assert_arg, pre_arg, post_arg, domain_arg, script_arg;
    std::size_t fuel = 100, samples = 100;
    std::uint64_t seed = 1;
    int qft_n = 2;
    bool recursive = false, wrong_phase = false, all_nodes = false, no_records = false;
    std::string emit_dir, mode_override;

    auto* parse = app.add_subcommand("parse", "parse and pretty-print a program");
    parse->add_option("prog", prog_arg, "program text or file")->required();

    auto* run = app.add_subcommand("run", "execute a program on a cq-state");
    run->add_option("prog", prog_arg, "program text or file")->required();
    run->add_option("--state", state_arg, "state file")->required()->check(CLI::ExistingFile);
    run->add_option("--fuel", fuel, "loop entries allowed per path");

    auto* eval = app.add_subcommand("eval-assert", "evaluate a cq-assertion on a cq-state");
    eval->add_option("assertion", assert_arg, "assertion JSON or file")->required();
    eval->add_option("--state", state_arg, "state file")->required()->check(CLI::ExistingFile);

    auto* entail = app.add_subcommand("entail", "decide (phi, A) |= (psi, B)");
    entail->add_option("pre", pre_arg, "assertion JSON or file")->required();
    entail->add_option("post", post_arg, "assertion JSON or file")->required();
    entail->add_option("--domain", domain_arg, "domain file with grids")->check(CLI::ExistingFile);

    auto* check = app.add_subcommand("check", "check a proof script");
    check->add_option("script", script_arg, "proof script")->required()->check(CLI::ExistingFile);

    auto* fuzz = app.add_subcommand("fuzz", "fuzz a triple or the triples of a proof script");
    fuzz->add_option("input", script_arg, "proof script or triple file")->required()->check(CLI::ExistingFile);
    fuzz->add_option("--samples", samples, "inputs per triple");
    fuzz->add_option("--seed", seed, "RNG seed");
    fuzz->add_option("--fuel", fuel, "loop entries allowed per path");
    fuzz->add_option("--mode", mode_override, "override the mode (partial|total)");
    fuzz->add_flag("--all-nodes", all_nodes, "fuzz every node of a script, not only the root");
    fuzz->add_flag("--no-records", no_records, "omit per-input records");

    auto* examples = app.add_subcommand("examples", "bundled examples");
    examples->require_subcommand(1);
    auto* qft = examples->add_subcommand("qft", "quantum Fourier transform: program, proof, check and fuzz");
    qft->add_option("--n", qft_n, "number of qubits")->check(CLI::Range(1, 6));
    qft->add_flag("--recursive", recursive, "recursive program form");
    qft->add_flag("--wrong-phase", wrong_phase, "perturb the postcondition");
    qft->add_option("--emit", emit_dir, "also write program and script into this directory");
    qft->add_option("--samples", samples, "fuzz inputs");
    qft->add_option("--seed", seed, "RNG seed");
    qft->add_flag("--no-records", no_records, "omit per-input fuzz records");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    auto t0 = std::chrono::steady_clock::now();
    int code = kOk;
    try {
        if (parse->parsed()) {
            auto src = program_source(prog_arg);
            const auto& in = ctx.resolve({{&src.doc, src.base}});
            auto p = qhl::syntax::parse_program(src.text, &in);
            json qv = json::array();
            for (const auto& r : qhl::syntax::quantum_vars(*p)) qv.push_back(r.base);
            emit({{"program", qhl::syntax::to_string(*p)},
                  {"commands", qhl::syntax::command_count(*p)},
                  {"quantum_vars", qv},
                  {"classical_vars", qhl::syntax::classical_vars(*p)},
                  {"modified_vars", qhl::syntax::modified_vars(*p)}});
            std::cerr << "parsed " << qhl::syntax::command_count(*p) << " commands\n";
        } else if (run->parsed()) {
            auto src = program_source(prog_arg);
            json sdoc = qhl::io::read_json_file(state_arg);
            const auto& in = ctx.resolve({{&src.doc, src.base}, {&sdoc, dir_of(state_arg)}});
            auto p = qhl::syntax::parse_program(src.text, &in);
            auto input = qhl::harness::load_cq_state(sdoc, in);
            qhl::semantics::RunOptions opt{fuel, in.limits().branch_cap, in.tolerances().prune};
            auto out = qhl::semantics::run(in, p, input, opt);
            json j = multiset_json(out, input);
            j["program"] = qhl::syntax::to_string(*p);
            j["fuel"] = fuel;
            emit(j);
            std::cerr << out.items.size() << " outcomes, terminated trace " << out.item_trace()
                      << ", residual trace " << out.residual_trace() << "\n";
        } else if (eval->parsed()) {
            json adoc = json_arg(assert_arg);
            json sdoc = qhl::io::read_json_file(state_arg);
            const auto& in = ctx.resolve({{&adoc, "."}, {&sdoc, dir_of(state_arg)}});
            auto a = qhl::assertions::assertion_from_json(adoc, &in);
            auto s = qhl::harness::load_cq_state(sdoc, in);
            bool sat = qhl::classical::satisfies(s.sigma, *a.phi);
            auto r = qhl::assertions::eval_predicate(in, s.sigma, *a.a);
            json j{{"assertion", qhl::assertions::to_json(a)}, {"phi", sat}, {"defined", r.defined}};
            if (r.defined) {
                j["value"] = qhl::linalg::trace_product(r.op, r.layout, s.rho);
                j["layout"] = r.layout.ids();
            } else {
                j["reason"] = r.reason;
            }
            emit(j);
            std::cerr << "phi " << (sat ? "holds" : "fails") << "; A "
                      << (r.defined ? "value " + std::to_string(j["value"].get<double>()) : "not well-defined") << "\n";
        } else if (entail->parsed()) {
            json a = json_arg(pre_arg), b = json_arg(post_arg), d;
            if (!domain_arg.empty()) d = qhl::io::read_json_file(domain_arg);
            const auto& in = ctx.resolve({{&d, dir_of(domain_arg)}, {&a, "."}});
            auto pre = qhl::assertions::assertion_from_json(a, &in);
            auto post = qhl::assertions::assertion_from_json(b, &in);
            qhl::assertions::Grids grids;
            if (d.is_object() && d.contains("grids"))
                for (const auto& [name, vals] : d.at("grids").items()) {
                    const auto* type = in.types().find(name);
                    for (const auto& v : vals) grids[name].push_back(qhl::io::value_from_json(v, type));
                }
            auto r = qhl::assertions::cq_entails(in, pre, post, grids);
            json j{{"verdict", qhl::assertions::verdict_name(r.verdict)},
                   {"states_checked", r.states_checked},
                   {"grid_assumed", r.grid_assumed}};
            if (!r.reason.empty()) j["reason"] = r.reason;
            if (r.witness) j["witness"] = qhl::io::state_to_json(*r.witness);
            emit(j);
            std::cerr << "entailment " << qhl::assertions::verdict_name(r.verdict) << " over " << r.states_checked
                      << " classical states\n";
            code = r.verdict == qhl::assertions::Verdict::Holds   ? kOk
                   : r.verdict == qhl::assertions::Verdict::Fails ? kNegative
                                                                  : kInconclusive;
        } else if (check->parsed()) {
            auto script = qhl::prover::load_script_file(script_arg);
            auto rep = qhl::prover::check_script(*script.root, *script.interp);
            json j = qhl::prover::to_json(rep);
            j["tool"] = qhl::kToolName;
            j["version"] = qhl::kVersion;
            j["script"] = script_arg;
            j["mode"] = qhl::prover::mode_name(script.mode);
            j["root"] = qhl::prover::to_json(script.root->conclusion);
            emit(j);
            for (const auto& n : rep.nodes)
                if (n.verdict != qhl::prover::NodeVerdict::Accepted)
                    std::cerr << n.path << " " << qhl::prover::rule_name(n.rule) << ": "
                              << qhl::prover::node_verdict_name(n.verdict) << " (" << n.reason << ")\n";
            std::cerr << "script " << qhl::prover::node_verdict_name(rep.verdict) << " (" << rep.nodes.size()
                      << " nodes)\n";
            code = verdict_exit(rep.verdict);
        } else if (fuzz->parsed()) {
            json doc = qhl::io::read_json_file(script_arg);
            qhl::harness::RunConfig cfg;
            cfg.samples = samples;
            cfg.seed = effective_seed(seed);
            cfg.fuel = fuel;
            cfg.keep_records = !no_records;
            std::vector<std::pair<std::string, qhl::prover::HoareTriple>> triples;
            std::shared_ptr<qhl::structures::Interpretation> in;
            if (doc.contains("proof")) {
                auto script = qhl::prover::load_script(doc, dir_of(script_arg));
                in = script.interp;
                std::function<void(const qhl::prover::ProofNode&, const std::string&)> walk =
                    [&](const qhl::prover::ProofNode& n, const std::string& path) {
                        triples.emplace_back(path, n.conclusion);
                        if (!all_nodes) return;
                        for (std::size_t i = 0; i < n.premises.size(); ++i)
                            walk(*n.premises[i], path + "." + std::to_string(i));
                    };
                walk(*script.root, "root");
            } else {
                auto [interp, t] = qhl::prover::load_triple(doc, dir_of(script_arg));
                in = interp;
                triples.emplace_back("triple", t);
            }
            if (ctx.interp_path.size()) in = std::make_shared<qhl::structures::Interpretation>(ctx.resolve({}));
            json reports = json::array();
            code = kOk;
            bool any_vacuous = false;
            for (auto& [path, t] : triples) {
                if (!mode_override.empty()) t.mode = qhl::prover::mode_from_name(mode_override);
                auto rep = qhl::harness::fuzz_triple(t, *in, cfg);
                json j = qhl::harness::to_json(rep);
                j["node"] = path;
                reports.push_back(std::move(j));
                std::cerr << path << ": " << qhl::harness::fuzz_verdict_name(rep.verdict) << ", worst margin "
                          << (rep.has_margin ? std::to_string(rep.worst_margin) : "n/a") << "\n";
                if (rep.verdict == qhl::harness::FuzzVerdict::Vacuous) {
                    any_vacuous = true;
                    continue;
                }
                code = worst(code, fuzz_exit(rep.verdict));
            }
            if (!all_nodes) {
                emit(reports.at(0));
                if (any_vacuous) code = kInconclusive;
            } else {
                emit(json{{"tool", qhl::kToolName}, {"version", qhl::kVersion}, {"seed", cfg.seed}, {"reports", reports}});
            }
        } else if (qft->parsed()) {
            qhl::harness::QftOptions opt{recursive, wrong_phase};
            auto ex = qhl::harness::generate_qft(qft_n, opt);
            qhl::harness::RunConfig cfg;
            cfg.samples = samples;
            cfg.seed = effective_seed(seed);
            cfg.keep_records = !no_records;
            auto out = qhl::harness::run_qft_example(ex, cfg);
            json j = qhl::harness::to_json(ex, out);
            j["tool"] = qhl::kToolName;
            j["version"] = qhl::kVersion;
            j["form"] = recursive ? "recursive" : "flat";
            j["script"] = ex.script;
            if (!emit_dir.empty()) {
                fs::create_directories(emit_dir);
                std::string stem = "qft_n" + std::to_string(qft_n) + (recursive ? "_recursive" : "") +
                                   (wrong_phase ? "_wrong_phase" : "");
                std::ofstream((fs::path(emit_dir) / (stem + ".qw")).string()) << ex.program_text << "\n";
                std::ofstream((fs::path(emit_dir) / (stem + ".json")).string()) << ex.script.dump(2) << "\n";
            }
            emit(j);
            std::cerr << "QFT n=" << qft_n << ": script " << qhl::prover::node_verdict_name(out.check.verdict)
                      << ", fuzz " << qhl::harness::fuzz_verdict_name(out.fuzz.verdict) << ", max |tr - 1| "
                      << out.max_deviation << " over " << out.inputs << " basis inputs\n";
            if (!out.ok()) {
                code = worst(verdict_exit(out.check.verdict), fuzz_exit(out.fuzz.verdict));
                if (code == kOk) code = kNegative;  // simulation disagreement
            }
        }
    } catch (const qhl::Error& e) {
        emit(json{{"error", qhl::error_kind_name(e.kind())}, {"message", e.what()}});
        std::cerr << "error: " << qhl::error_kind_name(e.kind()) << ": " << e.what() << "\n";
        code = e.kind() == qhl::ErrorKind::DomainTooLarge ? kInconclusive : kUsage;
    } catch (const json::exception& e) {
        emit(json{{"error", "Schema"}, {"message", e.what()}});
        std::cerr << "error: " << e.what() << "\n";
        code = kUsage;
    }
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "elapsed " << ms << " ms\n";
    return code;
}
