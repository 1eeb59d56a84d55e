#include "tcw/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "tcw/bisim.hpp"
#include "tcw/checker.hpp"
#include "tcw/distinguish.hpp"
#include "tcw/pes_text.hpp"
#include "tcw/proc.hpp"

namespace tcw {

namespace {

using nlohmann::ordered_json;

struct Globals {
    bool json = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> limit;
};

std::vector<std::string> names(const Pes& p, EventSet s)
{
    std::vector<std::string> out;
    for (EventId e : s) out.push_back(p.event(e).name);
    return out;
}

std::string brace(const std::vector<std::string>& v)
{
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s + "}";
}

ordered_json pes_json(const Pes& p)
{
    ordered_json j;
    j["name"] = p.name();
    ordered_json evs = ordered_json::array();
    for (const auto& e : p.events()) evs.push_back({{"id", e.name}, {"label", e.label}});
    j["events"] = evs;
    ordered_json cause = ordered_json::array(), conf = ordered_json::array();
    for (auto [a, b] : p.immediate_causality()) cause.push_back({p.event(a).name, p.event(b).name});
    for (auto [a, b] : p.immediate_conflicts()) conf.push_back({p.event(a).name, p.event(b).name});
    j["causality"] = cause;
    j["conflicts"] = conf;
    return j;
}

ordered_json header(const std::string& command, const Globals& g)
{
    ordered_json j;
    j["v"] = kReportVersion;
    j["command"] = command;
    if (g.seed) j["seed"] = *g.seed;
    return j;
}

Limits limits_of(const Globals& g)
{
    Limits l;
    if (g.limit) l.max_states = *g.limit;
    return l;
}

EventSet parse_ids(const Pes& p, const std::string& ids)
{
    EventSet s;
    std::stringstream ss(ids);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t{}");
        auto e = item.find_last_not_of(" \t{}");
        if (b == std::string::npos) continue;
        s.insert(p.id_of(item.substr(b, e - b + 1)));
    }
    return s;
}

int exit_for(ErrorKind k)
{
    switch (k) {
    case ErrorKind::SyntaxError:
    case ErrorKind::CycleInCausality:
    case ErrorKind::SelfConflict:
    case ErrorKind::ConflictCauseOverlap:
    case ErrorKind::UnknownEventId:
    case ErrorKind::DuplicateEventId:
    case ErrorKind::NotAConfiguration:
    case ErrorKind::ArityMismatch:
    case ErrorKind::NonPositiveOccurrence:
    case ErrorKind::FreeVarMismatch:
    case ErrorKind::PrefixNotClosed:
        return ExitInput;
    case ErrorKind::SizeLimitExceeded:
        return ExitSizeGuard;
    case ErrorKind::UnboundVariable:
    case ErrorKind::UnboundProposition:
    case ErrorKind::FormulaNotClosed:
    case ErrorKind::InvalidArgument:
        return ExitUsage;
    default:
        return ExitFailure;
    }
}

ordered_json state_json(const Pes& a, const Pes& b, const ProductState& s, bool with_map)
{
    ordered_json j;
    j["left"] = names(a, s.c1);
    j["right"] = names(b, s.c2);
    if (with_map) {
        ordered_json m = ordered_json::array();
        for (auto [x, y] : s.f) m.push_back({a.event(x).name, b.event(y).name});
        j["map"] = m;
    }
    return j;
}

class Runner {
  public:
    Runner(std::ostream& out, std::ostream& err, const Globals& g) : out_(out), err_(err), g_(g) {}

    void emit(ordered_json j, const std::string& text)
    {
        if (g_.json) {
            auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
            j["timing_ms"] = ms;
            out_ << j.dump() << "\n";
        } else {
            out_ << text;
        }
    }

    int validate(const std::string& file)
    {
        Pes p = load_pes_file(file);
        ordered_json j = header("validate", g_);
        j["valid"] = true;
        j["pes"] = pes_json(p);
        emit(j, print_pes(p));
        return ExitOk;
    }

    int compile(const std::string& term, const std::string& output, const std::string& name)
    {
        Pes p = compile_term(term, name);
        std::string text = print_pes(p);
        if (!output.empty()) {
            std::ofstream f(output);
            if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + output + "'");
            f << text;
        }
        ordered_json j = header("compile", g_);
        j["term"] = term;
        j["pes"] = pes_json(p);
        j["text"] = text;
        emit(j, output.empty() ? text : "wrote " + output + "\n");
        return ExitOk;
    }

    int configs(const std::string& file, const std::string& mode_s, std::size_t max_size)
    {
        Pes p = load_pes_file(file);
        TransitionMode mode = mode_s == "single" ? TransitionMode::Single
                              : mode_s == "step" ? TransitionMode::Step
                                                 : TransitionMode::Pomset;
        auto cs = enum_configurations(p, g_.limit.value_or(kDefaultConfigCap));
        ordered_json j = header("configs", g_);
        j["mode"] = std::string(mode_name(mode));
        ordered_json arr = ordered_json::array();
        std::string text;
        for (EventSet c : cs) {
            ordered_json cj;
            cj["events"] = names(p, c);
            cj["residual"] = names(p, p.residual(c));
            ordered_json ts = ordered_json::array();
            text += brace(names(p, c)) + "\n";
            for (const auto& t : transitions(p, c, mode, max_size)) {
                ts.push_back({{"step", names(p, t.step)}, {"target", names(p, t.target)}});
                text += "  --" + brace(names(p, t.step)) + "--> " + brace(names(p, t.target)) + "\n";
            }
            cj["transitions"] = ts;
            arr.push_back(cj);
        }
        j["count"] = cs.size();
        j["configurations"] = arr;
        emit(j, text + std::to_string(cs.size()) + " configurations\n");
        return ExitOk;
    }

    int check(const std::string& file, const std::string& phi, const std::string& config,
              const std::vector<std::string>& binds)
    {
        Pes p = load_pes_file(file);
        Formula f = parse_formula(phi);
        EventSet c = parse_ids(p, config);
        Env env;
        for (const auto& b : binds) {
            auto eq = b.find('=');
            if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--bind expects VAR=EVENT");
            env[b.substr(0, eq)] = p.id_of(b.substr(eq + 1));
        }
        bool v = satisfies(p, c, env, f);
        ordered_json j = header("check", g_);
        j["formula"] = to_string(f);
        j["config"] = names(p, c);
        ordered_json bj = ordered_json::object();
        for (const auto& [k, e] : env) bj[k] = p.event(e).name;
        j["bindings"] = bj;
        j["verdict"] = v;
        emit(j, std::string(v ? "true" : "false") + "\n");
        return ExitOk;
    }

    int equiv(const std::string& rel_s, const std::string& fa, const std::string& fb)
    {
        Pes a = load_pes_file(fa), b = load_pes_file(fb);
        auto rel = parse_equivalence(rel_s);
        if (!rel) throw Error(ErrorKind::InvalidArgument, "unknown relation '" + rel_s + "'");
        EquivReport r = check_equivalence(a, b, *rel, limits_of(g_));
        bool hist = *rel == Equivalence::HP || *rel == Equivalence::HHP;
        ordered_json j = header("equiv", g_);
        j["relation"] = std::string(equivalence_name(*rel));
        j["equivalent"] = r.equivalent;
        j["states"] = r.states.size();
        j["rounds"] = r.rounds;
        ordered_json w = ordered_json::array();
        for (std::size_t i = 0; i < r.states.size(); ++i)
            if (r.alive[i]) w.push_back(state_json(a, b, r.states[i], hist));
        j["witness"] = w;
        ordered_json tr = ordered_json::array();
        for (const auto& s : r.trace) {
            ordered_json t;
            t["round"] = s.round;
            t["state"] = state_json(a, b, r.states[s.state], hist);
            if (s.side == 0) {
                t["reason"] = "downward";
                t["restriction"] = state_json(a, b, r.states[s.pred], hist);
            } else {
                const Move& m = s.side == 1 ? r.states[s.state].moves1[s.move] : r.states[s.state].moves2[s.move];
                t["reason"] = "transfer";
                t["side"] = s.side;
                t["move"] = names(s.side == 1 ? a : b, m.step);
            }
            tr.push_back(t);
        }
        j["trace"] = tr;
        emit(j, std::string(r.equivalent ? "equivalent" : "not equivalent") + " (" +
                    std::string(equivalence_name(*rel)) + ", " + std::to_string(r.states.size()) + " states, " +
                    std::to_string(r.trace.size()) + " removed)\n");
        return ExitOk;
    }

    int spectrum_cmd(const std::string& fa, const std::string& fb)
    {
        Pes a = load_pes_file(fa), b = load_pes_file(fb);
        Spectrum s = spectrum(a, b, limits_of(g_));
        ordered_json j = header("spectrum", g_);
        j["bisim"] = s.interleaving;
        j["step"] = s.step;
        j["pomset"] = s.pomset;
        j["hp"] = s.hp;
        j["hhp"] = s.hhp;
        auto yn = [](bool v) { return v ? std::string("yes") : std::string("no"); };
        emit(j, "bisim " + yn(s.interleaving) + "\nstep " + yn(s.step) + "\npomset " + yn(s.pomset) + "\nhp " +
                    yn(s.hp) + "\nhhp " + yn(s.hhp) + "\n");
        return ExitOk;
    }

    int distinguish_cmd(const std::string& frag_s, const std::string& fa, const std::string& fb)
    {
        Pes a = load_pes_file(fa), b = load_pes_file(fb);
        auto frag = parse_fragment(frag_s);
        if (!frag) throw Error(ErrorKind::InvalidArgument, "unknown fragment '" + frag_s + "'");
        DistinguishOptions opts;
        opts.limits = limits_of(g_);
        ordered_json j = header("distinguish", g_);
        j["fragment"] = std::string(fragment_name(*frag));
        try {
            Distinction d = distinguish(a, b, *frag, opts);
            j["equivalent"] = false;
            j["formula"] = to_string(d.formula);
            j["holds_on"] = a.name();
            j["fails_on"] = b.name();
            j["verified"] = d.verified;
            emit(j, to_string(d.formula) + "\n");
            return d.verified ? ExitOk : ExitFailure;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ActuallyEquivalent) throw;
            j["equivalent"] = true;
            emit(j, "equivalent: no distinguishing formula\n");
            return ExitOk;
        }
    }

    int classify(const std::string& phi)
    {
        Formula f = parse_formula(phi);
        FragmentSet fs = classify_fragment(f);
        ordered_json j = header("classify", g_);
        j["formula"] = to_string(f);
        j["fragments"] = fs.names();
        j["free_vars"] = free_vars(f);
        j["closed"] = is_closed(f);
        std::string text;
        for (const auto& n : fs.names()) text += n + "\n";
        emit(j, text);
        return ExitOk;
    }

    int fail(const Error& e, const std::string& command)
    {
        if (g_.json) {
            ordered_json j = header(command, g_);
            ordered_json ej;
            ej["kind"] = std::string(error_kind_name(e.kind()));
            ej["message"] = e.detail();
            if (e.has_position()) {
                ej["line"] = e.position().line;
                ej["column"] = e.position().column;
            }
            j["error"] = ej;
            out_ << j.dump() << "\n";
        }
        err_ << "error: " << e.what() << "\n";
        return exit_for(e.kind());
    }

  private:
    std::ostream& out_;
    std::ostream& err_;
    const Globals& g_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"true-concurrency workbench for prime event structures", "tcw"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    std::size_t limit = 0;
    app.add_flag("--json", g.json, "machine-readable output");
    auto* seed_opt = app.add_option("--seed", seed, "seed echoed into reports");
    auto* limit_opt = app.add_option("--limit", limit, "cap on configurations and product states");

    std::string file, file2, term, output, name = "P", mode = "pomset", phi, config, rel, frag;
    std::size_t max_size = 0;
    std::vector<std::string> binds;

    auto* c_validate = app.add_subcommand("validate", "check a structure file");
    c_validate->add_option("FILE", file)->required();

    auto* c_compile = app.add_subcommand("compile", "compile a process term");
    c_compile->add_option("TERM", term)->required();
    c_compile->add_option("-o,--output", output, "write the structure here");
    c_compile->add_option("--name", name, "structure name");

    auto* c_configs = app.add_subcommand("configs", "list configurations and transitions");
    c_configs->add_option("FILE", file)->required();
    c_configs->add_option("--mode", mode)->check(CLI::IsMember({"single", "step", "pomset"}));
    c_configs->add_option("--max-size", max_size, "largest transition, 0 for no bound");

    auto* c_check = app.add_subcommand("check", "model check a formula");
    c_check->add_option("--model", file)->required();
    c_check->add_option("--formula", phi)->required();
    c_check->add_option("--config", config, "comma separated event ids");
    c_check->add_option("--bind", binds, "VAR=EVENT");

    auto* c_equiv = app.add_subcommand("equiv", "decide one equivalence");
    c_equiv->add_option("--rel", rel)->required()->check(CLI::IsMember({"bisim", "step", "pomset", "hp", "hhp"}));
    c_equiv->add_option("A", file)->required();
    c_equiv->add_option("B", file2)->required();

    auto* c_spectrum = app.add_subcommand("spectrum", "decide all five equivalences");
    c_spectrum->add_option("A", file)->required();
    c_spectrum->add_option("B", file2)->required();

    auto* c_dist = app.add_subcommand("distinguish", "synthesise a distinguishing formula");
    c_dist->add_option("--frag", frag)->required()->check(CLI::IsMember({"hm", "step", "pomset", "hp", "hhp"}));
    c_dist->add_option("A", file)->required();
    c_dist->add_option("B", file2)->required();

    auto* c_classify = app.add_subcommand("classify", "report fragment membership");
    c_classify->add_option("PHI", phi)->required();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return ExitUsage;
    }
    if (*seed_opt) g.seed = seed;
    if (*limit_opt) g.limit = limit;

    Runner run(out, err, g);
    std::string command = app.get_subcommands().front()->get_name();
    try {
        if (*c_validate) return run.validate(file);
        if (*c_compile) return run.compile(term, output, name);
        if (*c_configs) return run.configs(file, mode, max_size);
        if (*c_check) return run.check(file, phi, config, binds);
        if (*c_equiv) return run.equiv(rel, file, file2);
        if (*c_spectrum) return run.spectrum_cmd(file, file2);
        if (*c_dist) return run.distinguish_cmd(frag, file, file2);
        if (*c_classify) return run.classify(phi);
    } catch (const Error& e) {
        return run.fail(e, command);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitFailure;
    }
    return ExitUsage;
}

} // namespace tcw
