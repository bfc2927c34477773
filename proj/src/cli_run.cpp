#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jetflow/borel.hpp"
#include "jetflow/cli.hpp"
#include "jetflow/error.hpp"
#include "jetflow/fields.hpp"
#include "jetflow/jet.hpp"
#include "jetflow/recover.hpp"

namespace jetflow::cli {

namespace {

struct Settings {
    bool json = false;
    bool floating = false;
    std::string vars;
    std::string batch;

    ScalarMode mode() const { return floating ? ScalarMode::floating : ScalarMode::exact; }
};

// Output of one subcommand: aligned text lines plus the JSON result object.
struct Report {
    std::vector<std::pair<std::string, std::string>> lines;
    json result = json::object();

    void line(std::string key, std::string value) { lines.emplace_back(std::move(key), std::move(value)); }
};

std::string load(const std::string& arg) {
    if (arg.empty() || arg.front() != '@') return arg;
    std::ifstream in(arg.substr(1));
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + arg.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool looks_like_json(const std::string& s) {
    const auto at = s.find_first_not_of(" \t\r\n");
    return at != std::string::npos && (s[at] == '[' || s[at] == '{');
}

json parse_json(const std::string& s) {
    try {
        return json::parse(s);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("JSON: ") + e.what());
    }
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// Number of variables of the first term found in a JSON polynomial or map.
std::optional<std::size_t> json_nvars(const json& j) {
    if (j.is_object() && j.contains("exps")) return j.at("exps").size();
    if (j.is_array())
        for (const auto& e : j)
            if (auto n = json_nvars(e)) return n;
    return std::nullopt;
}

// A map given as JSON: a bare coordinate list or a result document.
json map_json(const json& j) {
    if (j.is_array()) return j;
    const json& r = j.contains("result") ? j.at("result") : j;
    for (const char* key : {"map", "field"})
        if (r.is_object() && r.contains(key)) return r.at(key);
    throw Error(ErrorKind::Parse, "JSON document has no \"map\" or \"field\"");
}

class Session {
public:
    explicit Session(const Settings& s) : s_(s) {
        if (!s.vars.empty()) vars_ = split_names(s.vars);
    }

    const std::vector<std::string>& vars() const { return vars_; }

    // Square map (field or diffeomorphism jet); fixes the variables.
    PolyMap map(const std::string& arg) {
        const std::string text = load(arg);
        if (looks_like_json(text)) {
            json j = map_json(parse_json(text));
            const std::size_t n = json_nvars(j).value_or(j.size());
            fix_vars(n);
            return map_from_json(j, n, s_.mode());
        }
        if (!vars_.empty()) return parse_map(text, vars_, s_.mode());
        auto guess = infer_vars({text});
        PolyMap F = parse_map(text, guess, s_.mode());
        if (F.ncoords() > guess.size()) {
            guess = infer_vars({text}, F.ncoords());
            F = parse_map(text, guess, s_.mode());
        }
        vars_ = guess;
        return F;
    }

    // Scalar polynomial in the current variables (or ones inferred from it).
    MultiPoly poly(const std::string& arg, std::size_t minimum = 1) {
        const std::string text = load(arg);
        if (looks_like_json(text)) {
            json j = parse_json(text);
            if (j.is_object() && j.contains("result")) throw Error(ErrorKind::Parse, "expected a polynomial");
            const std::size_t n = json_nvars(j).value_or(vars_.empty() ? minimum : vars_.size());
            fix_vars(n);
            return poly_from_json(j, n, s_.mode());
        }
        if (vars_.empty()) vars_ = infer_vars({text}, minimum);
        return parse_poly(text, vars_, s_.mode());
    }

    // ';'-separated polynomials.
    std::vector<MultiPoly> list(const std::string& arg, std::size_t minimum) {
        const std::string text = load(arg);
        if (vars_.empty()) vars_ = infer_vars({text}, minimum);
        return parse_list(text, vars_, ';', s_.mode());
    }

    std::string str(const MultiPoly& p) const { return to_string(p, names(p.nvars())); }
    std::string str(const PolyMap& F) const { return to_string(F, names(F.nvars)); }

private:
    void fix_vars(std::size_t n) {
        if (vars_.empty()) vars_ = default_variable_names(n);
        if (vars_.size() != n)
            throw Error(ErrorKind::DimensionMismatch, "input has " + std::to_string(n) + " variables");
    }

    std::vector<std::string> names(std::size_t n) const {
        return vars_.size() == n ? vars_ : default_variable_names(n);
    }

    const Settings& s_;
    std::vector<std::string> vars_;
};

std::optional<double> float_tol_override() {
    const char* env = std::getenv("JETFLOW_FLOAT_TOL");
    if (!env || !*env) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (*end != '\0' || !(v > 0)) throw Error(ErrorKind::InvalidArgument, "JETFLOW_FLOAT_TOL must be a positive number");
    return v;
}

json poly_list_json(const std::vector<HomogPoly>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back(to_json(p.poly()));
    return a;
}

// --- Subcommands ----------------------------------------------------------------

struct Args {
    std::string F, h, alpha, beta, g, G, L, jets, eval;
    unsigned N = 4, K = 6;
    std::optional<unsigned> fd_order;
    std::optional<double> step;
};

Report flow_jet(Session& s, const Args& a) {
    VectorFieldJet F(s.map(a.F));
    auto jet = flow_taylor_coeffs(F, a.N, a.K);
    Report r;
    json coeffs = json::array();
    for (std::size_t i = 0; i < jet.coeffs.size(); ++i) {
        r.line("v" + std::to_string(i + 1), s.str(jet.coeffs[i]));
        coeffs.push_back(to_json(jet.coeffs[i]));
    }
    r.result = {{"field", to_json(F.field())}, {"order", a.N}, {"x_order", a.K}, {"coefficients", coeffs}};
    return r;
}

Report shift(Session& s, const Args& a) {
    VectorFieldJet F(s.map(a.F));
    auto h = shift_jet(F, s.poly(a.alpha), a.K);
    Report r;
    r.line("h", s.str(h));
    r.result = {{"map", to_json(h)}, {"x_order", a.K}};
    return r;
}

Report hatted(Session& s, const Args& a) {
    VectorFieldJet F(s.map(a.F));
    auto h = s.map(a.h);
    auto out = hatted_shift_jet(F, h, s.poly(a.beta), a.K);
    Report r;
    r.line("h", s.str(out));
    r.result = {{"map", to_json(out)}, {"x_order", a.K}};
    return r;
}

Report recover(Session& s, const Args& a) {
    VectorFieldJet F(s.map(a.F));
    auto h = s.map(a.h);
    RecoverOptions opts;
    if (auto tol = float_tol_override()) {
        opts.residual_tol = *tol;
        opts.delta0_tol = *tol;
    }
    auto res = recover_shift_jet(F, h, a.K, opts);
    Report r;
    for (std::size_t l = 0; l < res.omegas.size(); ++l) r.line("omega" + std::to_string(l), s.str(res.omegas[l].poly()));
    r.line("residual_ok", res.residual_ok ? "true" : "false");
    r.result = {{"omegas", poly_list_json(res.omegas)},
                {"residual_ok", res.residual_ok},
                {"mode", res.mode == ScalarMode::exact ? "exact" : "float"}};
    return r;
}

Report star(Session& s, const Args& a) {
    VectorFieldJet F(s.map(a.F));
    auto rep = check_star(F);
    Report r;
    r.line("p", std::to_string(rep.p));
    r.line("initial", s.str(rep.initial));
    r.line("nondivisible", to_string(rep.nondivisible));
    if (rep.witness) r.line("witness", s.str(rep.witness->poly()));
    r.result = {{"p", rep.p},
                {"initial", to_json(rep.initial)},
                {"nondivisible", to_string(rep.nondivisible)},
                {"witness", rep.witness ? to_json(rep.witness->poly()) : json(nullptr)}};
    return r;
}

Report reduce_ham(Session& s, const Args& a) {
    auto g = s.poly(a.g, 2);
    auto deg = g.degree();
    auto rh = reduced_hamiltonian(HomogPoly(g, deg));
    Report r;
    r.line("D", s.str(rh.D.poly()));
    r.line("F", s.str(rh.field));
    r.line("content", rh.content.str());
    r.result = {{"D", to_json(rh.D.poly())}, {"field", to_json(rh.field)}, {"content", rh.content.str()}};
    return r;
}

Report cross(Session& s, const Args& a) {
    const std::size_t count = static_cast<std::size_t>(std::count(a.G.begin(), a.G.end(), ';')) + 1;
    auto G = s.list(a.G, count + 1);
    auto H = cross_product_field(G);
    Report r;
    r.line("H", s.str(H));
    r.result = {{"field", to_json(H)}};
    return r;
}

Report integral_rep(Session& s, const Args& a) {
    VectorFieldJet F(s.map(a.F));
    auto eta = verify_integral_representation(F, s.list(a.G, F.nvars()));
    Report r;
    r.line("eta", s.str(eta));
    r.result = {{"eta", to_json(eta)}};
    return r;
}

Report stab(Session& s, const Args& a) {
    auto basis = stabilizer_tangent(s.list(a.G, 1));
    Report r;
    r.line("dimension", std::to_string(basis.size()));
    json mats = json::array();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        r.line("V" + std::to_string(i + 1), basis[i].str());
        mats.push_back(to_json(basis[i]));
    }
    r.result = {{"dimension", basis.size()}, {"basis", mats}};
    return r;
}

Report classify(const Args& a) {
    auto cls = classify_exp_subgroup(parse_matrix(load(a.L)));
    Report r;
    r.line("class", to_string(cls.tag));
    r.line("minimal_polynomial", cls.minimal_polynomial.str("s"));
    json freqs = json::array();
    std::string ftext;
    for (const auto& c : cls.frequencies) {
        freqs.push_back(c.get_str());
        ftext += (ftext.empty() ? "" : ", ") + c.get_str();
    }
    if (!cls.frequencies.empty()) r.line("squared_frequencies", ftext);
    r.line("evidence", cls.evidence);
    r.result = {{"class", to_string(cls.tag)},
                {"minimal_polynomial", cls.minimal_polynomial.str("s")},
                {"zero_root", cls.zero_root},
                {"squared_frequencies", freqs},
                {"evidence", cls.evidence}};
    return r;
}

Report profile(Session& s, const Args& a) {
    auto g = s.poly(a.g, 2);
    auto p = binary_form_profile(HomogPoly(g, g.degree()));
    auto mults = [](const std::map<unsigned, unsigned>& m) {
        json j = json::object();
        for (auto [k, v] : m) j[std::to_string(k)] = v;
        return j;
    };
    auto mtext = [](const std::map<unsigned, unsigned>& m) {
        std::string t;
        for (auto [k, v] : m) t += (t.empty() ? "" : ", ") + std::to_string(v) + " of multiplicity " + std::to_string(k);
        return t.empty() ? std::string("none") : t;
    };
    Report r;
    r.line("l", std::to_string(p.l));
    r.line("q", std::to_string(p.q));
    r.line("degree", std::to_string(p.degree));
    r.line("squarefree_degree", std::to_string(p.squarefree_degree));
    r.line("field_degree", std::to_string(p.field_degree));
    r.line("degree_formula", p.degree_formula_holds ? "holds" : "fails");
    r.line("linear_factors", mtext(p.linear_multiplicities));
    r.line("quadratic_factors", mtext(p.quadratic_multiplicities));
    r.result = {{"l", p.l},
                {"q", p.q},
                {"degree", p.degree},
                {"squarefree_degree", p.squarefree_degree},
                {"field_degree", p.field_degree},
                {"degree_formula_holds", p.degree_formula_holds},
                {"linear_multiplicities", mults(p.linear_multiplicities)},
                {"quadratic_multiplicities", mults(p.quadratic_multiplicities)}};
    return r;
}

// Jets file: JSON list of polynomials (term lists or expression strings), or
// one expression per line; entry i is the degree-i jet.
std::vector<HomogPoly> read_jets(Session& s, const std::string& path) {
    const std::string text = load("@" + path);
    std::vector<std::string> exprs;
    std::vector<MultiPoly> polys;
    if (looks_like_json(text)) {
        json j = parse_json(text);
        if (!j.is_array()) throw Error(ErrorKind::Parse, "jets file must hold a list");
        bool strings = !j.empty() && j.front().is_string();
        if (strings) {
            for (const auto& e : j) exprs.push_back(e.get<std::string>());
        } else {
            const std::size_t n = s.vars().empty() ? json_nvars(j).value_or(1) : s.vars().size();
            for (const auto& e : j) polys.push_back(poly_from_json(e, n, ScalarMode::exact));
        }
    } else {
        std::stringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
            const auto at = line.find_first_not_of(" \t\r");
            if (at == std::string::npos || line[at] == '#') continue;
            exprs.push_back(line);
        }
    }
    if (!exprs.empty()) {
        auto vars = s.vars().empty() ? infer_vars(exprs) : s.vars();
        for (const auto& e : exprs) polys.push_back(parse_poly(e, vars));
    }
    std::vector<HomogPoly> out;
    for (std::size_t i = 0; i < polys.size(); ++i) out.emplace_back(polys[i], static_cast<unsigned>(i));
    return out;
}

Report borel(Session& s, const Args& a) {
    auto realization = realize_jet(read_jets(s, a.jets));
    Report r;
    json radii = json::array();
    std::ostringstream rt;
    rt << std::setprecision(6);
    for (std::size_t i = 0; i < realization.radii.size(); ++i) {
        radii.push_back(realization.radii[i]);
        rt << (i ? ", " : "") << realization.radii[i];
    }
    r.line("radii", rt.str());
    r.line("plateau", std::to_string(realization.plateau()));
    r.result = {{"radii", radii}, {"plateau", realization.plateau()}};
    if (!a.eval.empty()) {
        std::vector<double> pt;
        for (const auto& c : split_names(a.eval)) pt.push_back(parse_number(c, ScalarMode::floating).to_double());
        if (pt.size() != realization.nvars())
            throw Error(ErrorKind::DimensionMismatch, "evaluation point needs " + std::to_string(realization.nvars()) + " coordinates");
        const double v = realization(pt);
        std::ostringstream vt;
        vt << std::setprecision(17) << v;
        r.line("value", vt.str());
        r.result["value"] = v;
    }
    if (a.fd_order) {
        const double h = a.step.value_or(default_step(realization, *a.fd_order));
        auto est = finite_diff_jet(realization, *a.fd_order, h);
        json taylor = json::array();
        const auto names = default_variable_names(realization.nvars());
        for (const auto& e : est) {
            MultiPoly mono = MultiPoly::term(e.monomial, Scalar(1));
            std::ostringstream vt;
            vt << std::setprecision(10) << e.value;
            r.line("coef[" + to_string(mono, s.vars().size() == names.size() ? s.vars() : names) + "]", vt.str());
            taylor.push_back({{"exps", e.monomial.exponents()}, {"value", e.value}});
        }
        r.result["step"] = h;
        r.result["taylor"] = taylor;
    }
    return r;
}

void print_text(std::ostream& out, const Report& r) {
    std::size_t width = 0;
    for (const auto& [k, v] : r.lines) width = std::max(width, k.size());
    for (const auto& [k, v] : r.lines) out << std::left << std::setw(static_cast<int>(width)) << k << "  " << v << '\n';
}

int error_code(ErrorKind kind) {
    if (kind == ErrorKind::Parse) return parse_error;
    return is_mathematical(kind) ? math_error : usage;
}

void report_error(std::ostream& out, std::ostream& err, const Settings& s, const std::string& command,
                  const std::string& kind, const std::string& detail, std::optional<unsigned> order) {
    if (s.json) {
        json e = {{"kind", kind}, {"detail", detail}};
        if (order) e["order"] = *order;
        out << json{{"ok", false}, {"command", command}, {"error", e}}.dump(2) << '\n';
    } else {
        err << "error: " << kind << ": " << detail;
        if (order) err << " (order " << *order << ")";
        err << '\n';
    }
}

// Shell-style word splitting for batch lines: whitespace, single and double quotes.
std::vector<std::string> split_words(const std::string& line) {
    std::vector<std::string> words;
    std::string cur;
    bool have = false;
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quote) {
            if (c == quote) quote = 0;
            else if (c == '\\' && quote == '"' && i + 1 < line.size()) cur += line[++i];
            else cur += c;
        } else if (c == '\'' || c == '"') {
            quote = c;
            have = true;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (have) words.push_back(cur);
            cur.clear();
            have = false;
        } else {
            cur += c;
            have = true;
        }
    }
    if (quote) throw Error(ErrorKind::Parse, "unterminated quote in batch line");
    if (have) words.push_back(cur);
    return words;
}

int run_batch(const Settings& s, std::ostream& out, std::ostream& err) {
    std::ifstream in(s.batch);
    if (!in) {
        err << "error: cannot read " << s.batch << '\n';
        return usage;
    }
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        const auto at = line.find_first_not_of(" \t\r");
        if (at != std::string::npos && line[at] != '#') lines.push_back(line);
    }
    std::vector<std::string> outs(lines.size()), errs(lines.size());
    std::vector<int> codes(lines.size(), ok);
    const long count = static_cast<long>(lines.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        std::ostringstream o, e;
        try {
            auto words = split_words(lines[i]);
            if (s.json) words.insert(words.begin(), "--json");
            if (s.floating) words.insert(words.begin(), "--float");
            if (!s.vars.empty()) words.insert(words.begin(), {"--vars", s.vars});
            for (const auto& w : words)
                if (w == "--batch") throw Error(ErrorKind::InvalidArgument, "nested --batch");
            codes[i] = run(words, o, e);
        } catch (const Error& ex) {
            e << "error: " << to_string(ex.kind()) << ": " << ex.detail() << '\n';
            codes[i] = error_code(ex.kind());
        }
        outs[i] = o.str();
        errs[i] = e.str();
    }
    int worst = ok;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out << outs[i];
        err << errs[i];
        worst = std::max(worst, codes[i]);
    }
    return worst;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Jets of flows of polynomial vector fields and shift recovery", "jetflow"};
    app.set_help_flag("--help", "Print help");
    Settings s;
    Args a;
    app.add_flag("--json", s.json, "Machine-readable output");
    app.add_flag("--float", s.floating, "Float coefficients instead of exact rationals");
    app.add_option("--vars", s.vars, "Comma-separated variable names");
    app.add_option("--batch", s.batch, "File with one command line per line");
    app.require_subcommand(0, 1);

    auto sub = [&](const char* name, const char* desc) {
        auto* c = app.add_subcommand(name, desc);
        c->set_help_flag("--help", "Print help");
        return c;
    };
    auto field_opt = [&](CLI::App* c) { c->add_option("-F,--field", a.F, "Vector field, comma-separated")->required(); };
    auto order_opt = [&](CLI::App* c, bool required) {
        auto* o = c->add_option("-K,--order", a.K, "Truncation order in x");
        if (required) o->required();
    };

    auto* c_flow = sub("flow-jet", "Flow coefficients v_1..v_N truncated at order K");
    field_opt(c_flow);
    c_flow->add_option("-N", a.N, "Number of time coefficients");
    order_opt(c_flow, false);

    auto* c_shift = sub("shift-jet", "K-jet of x -> Phi(x, alpha(x))");
    field_opt(c_shift);
    c_shift->add_option("-a,--alpha", a.alpha, "Shift function")->required();
    order_opt(c_shift, true);

    auto* c_hat = sub("hatted-shift", "K-jet of x -> Phi(h(x), beta(x))");
    field_opt(c_hat);
    c_hat->add_option("-h,--map", a.h, "Map h")->required();
    c_hat->add_option("-b,--beta", a.beta, "Shift function")->required();
    order_opt(c_hat, true);

    auto* c_rec = sub("recover", "Recover the shift function of a map jet");
    field_opt(c_rec);
    c_rec->add_option("-h,--map", a.h, "Map jet")->required();
    order_opt(c_rec, true);

    auto* c_star = sub("check-star", "Non-divisibility of the initial part");
    field_opt(c_star);

    auto* c_ham = sub("reduce-ham", "Reduced Hamiltonian field of a binary form");
    c_ham->add_option("-g", a.g, "Homogeneous polynomial in x, y")->required();

    auto* c_cross = sub("cross", "Cross-product field of n-1 functions");
    c_cross->add_option("-f", a.G, "Functions separated by ';'")->required();

    auto* c_int = sub("integral-rep", "Factor eta with eta*F = cross-product field");
    field_opt(c_int);
    c_int->add_option("-f", a.G, "Functions separated by ';'")->required();

    auto* c_stab = sub("stab", "Tangent space of the linear stabilizer");
    c_stab->add_option("-f", a.G, "Functions separated by ';'")->required();

    auto* c_cls = sub("classify-exp", "Closure type of t -> exp(L t)");
    c_cls->add_option("-L", a.L, "Matrix rows separated by ';', entries by ','")->required();

    auto* c_prof = sub("profile", "Factor profile of a binary form");
    c_prof->add_option("-g", a.g, "Homogeneous polynomial in x, y")->required();

    auto* c_borel = sub("borel", "Realize prescribed jets and check them by finite differences");
    c_borel->add_option("--jets", a.jets, "File with the jets of degree 0, 1, ...")->required();
    c_borel->add_option("--eval", a.eval, "Point, comma-separated");
    c_borel->add_option("--fd-order", a.fd_order, "Finite-difference order");
    c_borel->add_option("--step", a.step, "Finite-difference step");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }

    if (!s.batch.empty()) {
        if (!app.get_subcommands().empty()) {
            err << "error: --batch takes no subcommand\n";
            return usage;
        }
        return run_batch(s, out, err);
    }
    if (app.get_subcommands().empty()) {
        err << app.help();
        return usage;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        Session session(s);
        Report r;
        if (command == "flow-jet") r = flow_jet(session, a);
        else if (command == "shift-jet") r = shift(session, a);
        else if (command == "hatted-shift") r = hatted(session, a);
        else if (command == "recover") r = recover(session, a);
        else if (command == "check-star") r = star(session, a);
        else if (command == "reduce-ham") r = reduce_ham(session, a);
        else if (command == "cross") r = cross(session, a);
        else if (command == "integral-rep") r = integral_rep(session, a);
        else if (command == "stab") r = stab(session, a);
        else if (command == "classify-exp") r = classify(a);
        else if (command == "profile") r = profile(session, a);
        else r = borel(session, a);
        if (s.json) out << json{{"ok", true}, {"command", command}, {"result", r.result}}.dump(2) << '\n';
        else print_text(out, r);
        return ok;
    } catch (const Error& e) {
        report_error(out, err, s, command, std::string(to_string(e.kind())), e.detail(), e.order());
        return error_code(e.kind());
    } catch (const json::exception& e) {
        report_error(out, err, s, command, "Parse", e.what(), std::nullopt);
        return parse_error;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace jetflow::cli
