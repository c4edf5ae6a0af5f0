// cak: command-line front end. Every invocation prints one JSON report on stdout.
// Exit codes: 0 ok, 1 domain error, 2 cap or truncation instability, 3 usage, 4 selftest failure.

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cak/acceptance.hpp"
#include "cak/constructions.hpp"
#include "cak/monotone.hpp"
#include "cak/uniform.hpp"

using namespace cak;

namespace {

constexpr int kDomain = 1, kCap = 2, kUsage = 3, kSelftest = 4;

const char* kGrammar = R"(Formula grammars (whitespace separated tokens, identifiers [A-Za-z_][A-Za-z0-9_]*):
  mu:    f ::= p | not p | top | bot | f or f | f and f | lift NAME(f, ...) | mu x . f | nu x . f
             | global_all(f) | global_some(f)
  mso:   f ::= sr(p) | p sub q | lift NAME(p, q, ...) | em(p) | sing(p) | eq(p, q) | top | bot
             | not f | f or f | f and f | exists p . f | forall p . f
  mmso:  f ::= sr(p) | p sub q | box(p, q) | top | bot | not f | f or f | f and f | exists p . f | forall p . f
  one-step (automaton transitions): SO1 uses the mso shape with a sub b and lift NAME(a, ...);
             ML1 uses lift NAME(t, ...) over terms t ::= a | t or t | t and t
Files: models and automata are JSON (see README); formulas are UTF-8 text.
Environment: CAK_CAPS="quantifier=10,moves=500000,..." raises enumeration caps.)";

std::string sha256(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

Caps caps_from_env(std::vector<std::string>& warnings) {
    Caps c;
    const char* env = std::getenv("CAK_CAPS");
    if (!env || !*env) return c;
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("CAK_CAPS entry '" + item + "' is not key=value");
        std::string key = item.substr(0, eq);
        long long v = std::stoll(item.substr(eq + 1));
        if (key == "support_enum") c.support_enum = static_cast<int>(v);
        else if (key == "quantifier") c.quantifier = static_cast<int>(v);
        else if (key == "ef_carrier") c.ef_carrier = static_cast<int>(v);
        else if (key == "ef_depth") c.ef_depth = static_cast<int>(v);
        else if (key == "moves") c.moves = static_cast<std::size_t>(v);
        else if (key == "valuation_bits") c.valuation_bits = static_cast<int>(v);
        else if (key == "game_positions") c.game_positions = static_cast<std::size_t>(v);
        else throw Error("CAK_CAPS: unknown cap '" + key + "'");
    }
    warnings.push_back(std::string("caps taken from CAK_CAPS: ") + env);
    return c;
}

Functor parse_functor(const std::string& s) {
    if (!s.empty() && s[0] == '{') return functor_from_json(Json::parse(s));
    return functor_from_json(Json(s));
}

struct Context {
    Json report = Json::object();
    std::vector<std::string> warnings;
    Caps caps;

    std::string load(const std::string& role, const std::string& path) {
        std::string text = read_file(path);
        report["inputs"][role] = {{"path", path}, {"sha256", sha256(text)}};
        return text;
    }
    TModel model(const std::string& role, const std::string& path) {
        auto m = model_from_json(Json::parse(load(role, path)));
        return m;
    }
    Automaton automaton(const std::string& role, const std::string& path) {
        return automaton_from_json(Json::parse(load(role, path)));
    }
    void emit(const std::string& out, const Json& j, const std::string& key) {
        if (out.empty()) {
            report[key] = j;
            return;
        }
        std::ofstream f(out);
        if (!f) throw Error("cannot write " + out);
        f << j.dump(2) << "\n";
        report["outputs"][key] = out;
    }
    void emit_text(const std::string& out, const std::string& text, const std::string& key) {
        if (out.empty()) {
            report[key] = text;
            return;
        }
        std::ofstream f(out);
        if (!f) throw Error("cannot write " + out);
        f << text;
        report["outputs"][key] = out;
    }
};

std::uint32_t point_of(const TModel& m, const std::string& name) {
    for (std::uint32_t s = 0; s < m.size(); ++s)
        if (m.carrier->atoms[s] == name) return s;
    throw Error("no point '" + name + "' in the model");
}

int max_depth(const Automaton& a) {
    int k = 0;
    if (a.flavor == Flavor::SO1)
        for (auto& row : a.so)
            for (auto& f : row) k = std::max(k, f->depth);
    return k;
}

ConstructionParams params_for(const Functor& f, const std::string& construction, int k, std::size_t m) {
    ConstructionParams p;
    p.kind = construction.empty() ? default_construction(*f) : construction_from_string(construction);
    if (!construction_applies(p.kind, *f))
        throw Error("construction " + to_string(p.kind) + " does not apply to " + to_string(*f));
    p.k = k;
    p.m = m;
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coalgebraic MSO and mu-calculus toolkit"};
    app.footer(kGrammar);
    app.require_subcommand(1);
    Context ctx;
    std::uint64_t seed = 1;
    int jobs = 1;
    bool timings = false;
    app.add_option("--seed", seed, "seed for sampled checks");
    app.add_option("--jobs", jobs, "worker threads for independent samples");
    app.add_flag("--timings", timings, "include wall-clock timings in the report");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a formula at a point of a model");
    std::string model_path, formula_path, expr, point = "", logic = "mu";
    eval->add_option("--model", model_path, "model JSON")->required();
    eval->add_option("--formula", formula_path, "formula text file");
    eval->add_option("--expr", expr, "formula text given inline");
    eval->add_option("--point", point, "point name (all points when omitted)");
    eval->add_option("--logic", logic, "mu | mso | mmso")->check(CLI::IsMember({"mu", "mso", "mmso"}));

    // compile
    auto* compile = app.add_subcommand("compile", "compile a formula to a parity automaton");
    std::string flavor = "mu", functor_text = "powerset", out;
    compile->add_option("--flavor", flavor, "mu | mso")->check(CLI::IsMember({"mu", "mso"}));
    compile->add_option("--formula", formula_path, "formula text file");
    compile->add_option("--expr", expr, "formula text given inline");
    compile->add_option("--functor", functor_text, "functor name or JSON (for the liftings)");
    compile->add_option("--out", out, "automaton output file");

    // accept
    auto* accept = app.add_subcommand("accept", "decide acceptance by the parity game");
    std::string aut_path, mode = "full", dump_game;
    accept->add_option("--automaton", aut_path, "automaton JSON")->required();
    accept->add_option("--model", model_path, "model JSON")->required();
    accept->add_option("--point", point, "start point")->required();
    accept->add_option("--mode", mode, "full | tree")->check(CLI::IsMember({"full", "tree"}));
    accept->add_option("--dump-game", dump_game, "write the game graph as DOT to this file ('-' for the report)");
    bool accept_translate = false;
    std::string construction;
    int k = -1;
    std::size_t m = 2;
    accept->add_flag("--so-to-ml", accept_translate, "translate the SO1 automaton first and play the full game");
    accept->add_option("--construction", construction, "construction for --so-to-ml");
    accept->add_option("--k", k, "quantifier depth for --so-to-ml");
    accept->add_option("--m", m, "copies kept for --so-to-ml");

    // construct
    auto* construct = app.add_subcommand("construct", "automaton constructions");
    std::string op, var;
    std::vector<std::string> inputs;
    construct->add_option("--op", op, "union | intersect | complement | monotonize | project | simulate")
        ->required()
        ->check(CLI::IsMember({"union", "intersect", "complement", "monotonize", "project", "simulate"}));
    construct->add_option("--automaton", inputs, "input automaton file(s)")->required();
    construct->add_option("--var", var, "variable removed by project");
    construct->add_option("--functor", functor_text, "functor name or JSON (for the liftings)");
    construct->add_option("--out", out, "automaton output file");

    // translate
    auto* translate = app.add_subcommand("translate", "translate an SO1 automaton to an ML1 automaton");
    bool so_to_ml = false;
    translate->add_flag("--so-to-ml", so_to_ml, "replace every transition by its one-step lifting")->required();
    translate->add_option("--automaton", aut_path, "SO1 automaton JSON")->required();
    translate->add_option("--functor", functor_text, "functor name or JSON");
    translate->add_option("--construction", construction, "powerset | bag | polynomial | monstar | naive-mon");
    translate->add_option("--k", k, "quantifier depth (default: deepest transition)");
    translate->add_option("--m", m, "copies kept by truncated constructions");
    translate->add_option("--out", out, "automaton output file");

    // unravel
    auto* unravel_cmd = app.add_subcommand("unravel", "unravel a model into a tree model");
    int depth = 4;
    unravel_cmd->add_option("--model", model_path, "model JSON")->required();
    unravel_cmd->add_option("--point", point, "root point")->required();
    unravel_cmd->add_option("--depth", depth, "depth bound");
    unravel_cmd->add_option("--construction", construction, "construction used for the children");
    unravel_cmd->add_option("--k", k, "quantifier depth parameter");
    unravel_cmd->add_option("--m", m, "copies kept by truncated constructions");
    unravel_cmd->add_option("--out", out, "tree model output file");

    // bisim
    auto* bisim = app.add_subcommand("bisim", "neighbourhood bisimilarity of two pointed models");
    std::string model2_path, point2;
    bool global = false;
    bisim->add_option("--model1", model_path, "first model")->required();
    bisim->add_option("--model2", model2_path, "second model")->required();
    bisim->add_option("--point1", point, "point of the first model")->required();
    bisim->add_option("--point2", point2, "point of the second model")->required();
    bisim->add_flag("--global", global, "require the relation to be total in both directions");

    // demo
    auto* demo = app.add_subcommand("demo", "replay a worked example");
    std::string demo_name;
    demo->add_option("name", demo_name, "counterexample")->required()->check(CLI::IsMember({"counterexample"}));
    demo->add_option("--m", m, "copies kept by the naive construction");

    // selftest
    auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
    std::string level = "quick";
    bool parallel_games = false;
    std::vector<int> only;
    selftest->add_option("--level", level, "quick | full")->check(CLI::IsMember({"quick", "full"}));
    selftest->add_option("--criterion", only, "run only these criteria");
    selftest->add_flag("--parallel-games", parallel_games, "build acceptance games in parallel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << Json({{"error", "usage"}, {"message", e.what()}}).dump() << "\n";
        return kUsage;
    }

    auto start = std::chrono::steady_clock::now();
    int code = 0;
    try {
        ctx.caps = caps_from_env(ctx.warnings);
        auto* sub = app.get_subcommands().front();
        ctx.report["subcommand"] = sub->get_name();
        auto formula_text = [&]() -> std::string {
            if (!expr.empty()) {
                ctx.report["inputs"]["formula"] = {{"text", expr}, {"sha256", sha256(expr)}};
                return expr;
            }
            if (formula_path.empty()) throw Error("give --formula or --expr");
            return ctx.load("formula", formula_path);
        };

        if (sub == eval) {
            auto model = ctx.model("model", model_path);
            auto lifts = builtin_liftings(model.functor);
            auto text = formula_text();
            std::vector<std::uint32_t> points;
            if (point.empty())
                for (std::uint32_t s = 0; s < model.size(); ++s) points.push_back(s);
            else
                points.push_back(point_of(model, point));
            std::function<bool(std::uint32_t)> holds;
            if (logic == "mu") {
                auto f = mu::parse(text);
                ctx.report["formula"] = mu::print(f);
                holds = [&, f](std::uint32_t s) { return mu::eval_mu(f, model, s, lifts); };
            } else if (logic == "mso") {
                auto f = mso::parse(text);
                ctx.report["formula"] = mso::print(f);
                holds = [&, f](std::uint32_t s) { return mso::eval_mso(f, model, s, lifts, ctx.caps); };
            } else {
                auto f = mmso::parse(text);
                ctx.report["formula"] = mmso::print(f);
                holds = [&, f](std::uint32_t s) { return mmso::eval(f, model, s, ctx.caps); };
            }
            Json verdicts = Json::object();
            for (auto s : points) verdicts[model.carrier->atoms[s]] = holds(s);
            ctx.report["verdicts"] = verdicts;
        } else if (sub == compile) {
            auto F = parse_functor(functor_text);
            auto lifts = builtin_liftings(F);
            auto text = formula_text();
            Automaton a = flavor == "mu" ? compile_mu(mu::parse(text), lifts) : compile_mso(mso::parse(text), lifts);
            ctx.report["states"] = a.size();
            ctx.emit(out, automaton_to_json(a), "automaton");
        } else if (sub == accept) {
            auto a = ctx.automaton("automaton", aut_path);
            auto model = ctx.model("model", model_path);
            auto lifts = builtin_liftings(model.functor);
            check_liftings(a, lifts);
            if (accept_translate) {
                StarLiftingOptions so;
                so.params = params_for(model.functor, construction, k < 0 ? max_depth(a) : k, m);
                so.caps = ctx.caps;
                auto t = translate_automaton(a, model.functor, lifts, so);
                a = t.automaton;
                lifts = t.lifts;
                mode = "full";
                ctx.report["construction"] = {{"kind", to_string(so.params.kind)}, {"k", so.params.k}, {"m", so.params.m}};
            }
            GameOptions go;
            go.caps = ctx.caps;
            go.parallel = jobs > 1;
            auto gm = mode == "tree" ? GameMode::Tree : GameMode::Full;
            auto s = point_of(model, point);
            bool verdict = accepts(a, model, s, gm, lifts, go);
            ctx.report["verdicts"] = {{"accepts", verdict}};
            if (!dump_game.empty()) {
                go.labels = true;
                auto g = build_acceptance_game(a, model, s, gm, lifts, go);
                ctx.report["game_positions"] = g.game.size();
                ctx.emit_text(dump_game == "-" ? "" : dump_game, game_to_dot(g.game), "game_dot");
            }
        } else if (sub == construct) {
            auto lifts = builtin_liftings(parse_functor(functor_text));
            std::vector<Automaton> as;
            for (std::size_t i = 0; i < inputs.size(); ++i) as.push_back(ctx.automaton("automaton" + std::to_string(i + 1), inputs[i]));
            auto need = [&](std::size_t n) {
                if (as.size() != n) throw Error("--op " + op + " takes " + std::to_string(n) + " automaton file(s)");
            };
            Automaton r;
            if (op == "union" || op == "intersect") {
                need(2);
                r = op == "union" ? union_aut(as[0], as[1]) : intersect_aut(as[0], as[1]);
            } else {
                need(1);
                if (op == "complement") r = complement_aut(as[0], lifts);
                else if (op == "monotonize") r = monotonize(as[0], lifts);
                else if (op == "simulate") r = simulate(as[0], lifts);
                else {
                    if (var.empty()) throw Error("--op project needs --var");
                    r = project_aut(as[0], var);
                }
            }
            ctx.report["states"] = r.size();
            ctx.emit(out, automaton_to_json(r), "automaton");
        } else if (sub == translate) {
            auto a = ctx.automaton("automaton", aut_path);
            auto F = parse_functor(functor_text);
            auto lifts = builtin_liftings(F);
            StarLiftingOptions so;
            so.params = params_for(F, construction, k < 0 ? max_depth(a) : k, m);
            so.caps = ctx.caps;
            auto t = translate_automaton(a, F, lifts, so);
            ctx.report["construction"] = {{"kind", to_string(so.params.kind)}, {"k", so.params.k}, {"m", so.params.m}};
            ctx.report["liftings"] = t.sources;
            ctx.emit(out, automaton_to_json(t.automaton), "automaton");
        } else if (sub == unravel_cmd) {
            auto model = ctx.model("model", model_path);
            auto p = params_for(model.functor, construction, std::max(k, 0), m);
            auto u = unravel(model, point_of(model, point), p, depth);
            ctx.report["nodes"] = u.tree.size();
            ctx.report["total"] = u.total;
            Json gamma = Json::object();
            for (std::uint32_t v = 0; v < u.tree.size(); ++v) gamma[u.tree.carrier->atoms[v]] = model.carrier->atoms[u.gamma[v]];
            ctx.report["gamma"] = gamma;
            if (!u.total) ctx.warnings.push_back("depth bound cut the unravelling; frontier nodes carry the empty value");
            ctx.emit(out, model_to_json(u.tree), "tree");
        } else if (sub == bisim) {
            auto m1 = ctx.model("model1", model_path);
            auto m2 = ctx.model("model2", model2_path);
            auto s1 = point_of(m1, point), s2 = point_of(m2, point2);
            auto r = largest_nbhd_bisim(m1, m2, global);
            bool related = r && (*r)[s1][s2];
            ctx.report["verdicts"] = {{"bisimilar", related}, {"global", global}};
            if (r) ctx.report["relation"] = relation_text(m1, m2, *r);
            else ctx.report["relation"] = nullptr;
        } else if (sub == demo) {
            auto d = counterexample_demo(ConstructionKind::NaiveMon, m);
            ctx.report["demo"] = d.to_json();
            ctx.report["verdicts"] = {{"violation", d.violation}};
        } else if (sub == selftest) {
            SuiteOptions so;
            so.level = level == "full" ? SuiteLevel::Full : SuiteLevel::Quick;
            so.seed = seed;
            so.jobs = jobs;
            so.parallel_games = parallel_games;
            Json results = Json::array();
            bool all = true;
            for (auto& r : run_suite(only, so)) {
                std::cerr << result_line(r) << "\n";
                Json row = {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}};
                if (timings) row["seconds"] = r.seconds;
                results.push_back(row);
                all = all && r.pass;
            }
            ctx.report["level"] = level;
            ctx.report["seed"] = seed;
            ctx.report["verdicts"] = {{"all_pass", all}};
            ctx.report["criteria"] = results;
            if (!all) code = kSelftest;
        }
    } catch (const SyntaxError& e) {
        std::cerr << Json({{"error", "syntax"}, {"line", e.line()}, {"column", e.column()}, {"message", e.what()}}).dump() << "\n";
        return kDomain;
    } catch (const CapError& e) {
        std::cerr << Json({{"error", "cap"}, {"message", e.what()}}).dump() << "\n";
        return kCap;
    } catch (const Error& e) {
        std::cerr << Json({{"error", "domain"}, {"message", e.what()}}).dump() << "\n";
        return kDomain;
    } catch (const Json::exception& e) {
        std::cerr << Json({{"error", "domain"}, {"message", std::string("JSON: ") + e.what()}}).dump() << "\n";
        return kDomain;
    }
    ctx.report["warnings"] = ctx.warnings;
    if (timings)
        ctx.report["timings"] = {
            {"total_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()}};
    std::cout << ctx.report.dump(2) << "\n";
    return code;
}
