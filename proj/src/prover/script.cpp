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
#include <filesystem>

#include "qhl/error.hpp"
#include "qhl/prover/proof.hpp"
#include "qhl/structures/loader.hpp"
#include "qhl/syntax/parser.hpp"

namespace qhl::prover {

    namespace fs = std::filesystem;
    using io::json;

    namespace {

        std::string resolve_path(const std::string& base, const std::string& p) {
            fs::path path(p);
            if (path.is_relative()) path = fs::path(base) / path;
            return path.string();
        }

        std::shared_ptr<Interpretation> interpretation_of(const json& j, const std::string& base) {
            if (!j.contains("interpretation")) return std::make_shared<Interpretation>(Interpretation::with_builtins());
            const json& v = j.at("interpretation");
            if (v.is_string())
                return std::make_shared<Interpretation>(
                    structures::load_interpretation_file(resolve_path(base, v.get<std::string>())));
            return std::make_shared<Interpretation>(structures::load_interpretation(v));
        }

        struct Loader {
            Script& s;
            std::string base;

            const Interpretation& in() const { return *s.interp; }

            ProgramPtr program(const json& j) const {
                if (!j.is_string()) fail(ErrorKind::Schema, "program must be text or an @reference");
                auto t = j.get<std::string>();
                if (!t.empty() && t[0] == '@') {
                    auto it = s.programs.find(t.substr(1));
                    if (it == s.programs.end()) fail(ErrorKind::Schema, "unknown program reference " + t);
                    return it->second;
                }
                return syntax::parse_program(t, &in());
            }

            CqAssertion assertion(const json& j) const {
                if (j.is_string()) {
                    auto t = j.get<std::string>();
                    if (t.empty() || t[0] != '@') fail(ErrorKind::Schema, "assertion must be an object or an @reference");
                    auto it = s.assertions.find(t.substr(1));
                    if (it == s.assertions.end()) fail(ErrorKind::Schema, "unknown assertion reference " + t);
                    return it->second;
                }
                return assertions::assertion_from_json(j, &in());
            }

            HoareTriple triple(const json& j) const {
                HoareTriple t;
                t.pre = assertion(io::require(j, "pre", "conclusion"));
                t.program = program(io::require(j, "program", "conclusion"));
                t.post = assertion(io::require(j, "post", "conclusion"));
                t.mode = s.mode;
                return t;
            }

            Witnesses witnesses(const json& j) const {
                Witnesses w;
                if (!j.is_object()) fail(ErrorKind::MalformedWitness, "witnesses must be an object");
                if (j.contains("y")) w.y = j.at("y").get<std::string>();
                if (j.contains("z")) w.z = j.at("z").get<std::string>();
                if (j.contains("t")) w.t = syntax::parse_expr(j.at("t").get<std::string>(), &in());
                if (j.contains("samples")) w.samples = j.at("samples").get<std::size_t>();
                if (j.contains("seed")) w.seed = j.at("seed").get<std::uint64_t>();
                if (j.contains("grids")) {
                    for (const auto& [name, vals] : j.at("grids").items()) {
                        const auto* type = in().types().find(name);
                        if (!type) fail(ErrorKind::MalformedWitness, "grid for undeclared variable " + name);
                        std::vector<classical::Value> g;
                        for (const auto& v : vals) g.push_back(io::value_from_json(v, type));
                        w.grids[name] = std::move(g);
                    }
                }
                return w;
            }

            NodePtr node(const json& j) const {
                if (!j.is_object()) fail(ErrorKind::Schema, "proof node must be an object");
                auto n = std::make_shared<ProofNode>();
                n->rule = rule_from_name(io::require(j, "rule", "proof node").get<std::string>());
                n->conclusion = triple(io::require(j, "conclusion", "proof node"));
                if (j.contains("label")) n->label = j.at("label").get<std::string>();
                if (j.contains("witnesses")) n->witnesses = witnesses(j.at("witnesses"));
                if (j.contains("premises"))
                    for (const auto& p : j.at("premises")) n->premises.push_back(node(p));
                return n;
            }
        };

    }  // namespace

    Script load_script(const json& j, const std::string& base_dir) {
        if (!j.is_object()) fail(ErrorKind::Schema, "proof script must be a JSON object");
        Script s;
        s.interp = interpretation_of(j, base_dir);
        if (j.contains("mode")) s.mode = mode_from_name(j.at("mode").get<std::string>());
        Loader ld{s, base_dir};

        if (j.contains("program_files")) {
            for (const auto& f : j.at("program_files")) {
                json progs = io::read_json_file(resolve_path(base_dir, f.get<std::string>()));
                for (const auto& [name, text] : progs.items())
                    s.programs[name] = syntax::parse_program(text.get<std::string>(), s.interp.get());
            }
        }
        if (j.contains("programs"))
            for (const auto& [name, text] : j.at("programs").items()) s.programs[name] = ld.program(text);
        if (j.contains("assertions"))
            for (const auto& [name, a] : j.at("assertions").items()) s.assertions[name] = ld.assertion(a);

        s.root = ld.node(io::require(j, "proof", "proof script"));
        return s;
    }

    Script load_script_file(const std::string& path) {
        return load_script(io::read_json_file(path), fs::path(path).parent_path().string());
    }

    std::pair<std::shared_ptr<Interpretation>, HoareTriple> load_triple(const json& j, const std::string& base_dir) {
        Script s;
        s.interp = interpretation_of(j, base_dir);
        if (j.contains("mode")) s.mode = mode_from_name(j.at("mode").get<std::string>());
        Loader ld{s, base_dir};
        return {s.interp, ld.triple(j)};
    }

    json node_to_json(const ProofNode& n) {
        json j{{"rule", rule_name(n.rule)}};
        if (!n.label.empty()) j["label"] = n.label;
        json c = to_json(n.conclusion);
        c.erase("mode");
        j["conclusion"] = std::move(c);
        const auto& w = n.witnesses;
        json wj = json::object();
        if (w.y) wj["y"] = *w.y;
        if (w.z) wj["z"] = *w.z;
        if (w.t) wj["t"] = classical::to_string(*w.t);
        if (!w.grids.empty()) {
            json g = json::object();
            for (const auto& [name, vals] : w.grids) {
                json arr = json::array();
                for (const auto& v : vals) arr.push_back(io::value_to_json(v));
                g[name] = std::move(arr);
            }
            wj["grids"] = std::move(g);
        }
        if (!wj.empty()) j["witnesses"] = std::move(wj);
        if (!n.premises.empty()) {
            json ps = json::array();
            for (const auto& p : n.premises) ps.push_back(node_to_json(*p));
            j["premises"] = std::move(ps);
        }
        return j;
    }

}  // namespace qhl::prover
