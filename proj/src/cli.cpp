#include "whflip/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "whflip/antisym.hpp"
#include "whflip/errors.hpp"
#include "whflip/oracle.hpp"
#include "whflip/wh_factor.hpp"

namespace whflip {

using nlohmann::json;

// ---------------------------------------------------------------- symbol files

namespace {

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && *b == ' ') ++b;
    if (b < e && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail(ErrorKind::InputError, "not a number: '" + s + "'");
    return v;
}

double parse_number(const json& x) {
    if (x.is_number()) return x.get<double>();
    if (x.is_string()) {
        const std::string s = x.get<std::string>();
        const auto slash = s.find('/');
        if (slash == std::string::npos) return parse_double(s);
        const double q = parse_double(s.substr(slash + 1));
        if (q == 0.0) fail(ErrorKind::InputError, "zero denominator in '" + s + "'");
        return parse_double(s.substr(0, slash)) / q;
    }
    fail(ErrorKind::InputError, "expected a number or a \"p/q\" string, got " + x.dump());
}

LaurentPoly parse_terms(const json& terms) {
    if (!terms.is_array()) fail(ErrorKind::InputError, "monomial list must be an array");
    std::map<int, cplx> c;
    for (const auto& t : terms) {
        if (!t.is_array() || t.size() < 2 || t.size() > 3)
            fail(ErrorKind::InputError, "monomial must be [exponent, re] or [exponent, re, im], got " + t.dump());
        if (!t[0].is_number_integer()) fail(ErrorKind::InputError, "exponent must be an integer, got " + t[0].dump());
        const int k = t[0].get<int>();
        const double re = parse_number(t[1]);
        const double im = t.size() == 3 ? parse_number(t[2]) : 0.0;
        c[k] += cplx(re, im);
    }
    return LaurentPoly(std::move(c));
}

json print_terms(const LaurentPoly& p) {
    json out = json::array();
    for (const auto& [k, c] : p.coeffs()) out.push_back({k, c.real(), c.imag()});
    return out;
}

}  // namespace

SymbolFile parse_symbol(const json& doc) {
    if (!doc.is_object()) fail(ErrorKind::InputError, "symbol file must be a JSON object");
    for (const auto& [key, _] : doc.items())
        if (key != "dims" && key != "entries" && key != "den" && key != "role")
            fail(ErrorKind::InputError, "unknown key '" + key + "'");
    if (!doc.contains("dims") || !doc.contains("entries")) fail(ErrorKind::InputError, "dims and entries are required");
    const json& dims = doc["dims"];
    if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() || !dims[1].is_number_integer())
        fail(ErrorKind::InputError, "dims must be [rows, cols]");
    const int rows = dims[0].get<int>(), cols = dims[1].get<int>();
    if (rows <= 0 || cols <= 0) fail(ErrorKind::InputError, "dims must be positive");
    const json& entries = doc["entries"];
    if (!entries.is_array() || int(entries.size()) != rows) fail(ErrorKind::InputError, "entries must have dims[0] rows");
    LaurentMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = entries[std::size_t(i)];
        if (!row.is_array() || int(row.size()) != cols) fail(ErrorKind::InputError, "every row must have dims[1] entries");
        for (int j = 0; j < cols; ++j) m(i, j) = parse_terms(row[std::size_t(j)]);
    }
    LaurentPoly den(1.0);
    if (doc.contains("den")) {
        den = parse_terms(doc["den"]);
        if (den.is_zero()) fail(ErrorKind::InputError, "denominator is zero");
    }

    SymbolFile out;
    if (doc.contains("role")) {
        if (!doc["role"].is_string()) fail(ErrorKind::InputError, "role must be a string");
        const std::string r = doc["role"].get<std::string>();
        if (r != "a" && r != "b" && r != "A" && r != "B" && r != "W")
            fail(ErrorKind::InputError, "role must be one of a, b, A, B, W");
        out.role = r;
    }
    out.symbol = RationalMatrixFunction(m, den);
    if (out.role && *out.role == "W") {
        if (!out.symbol.is_laurent() || out.symbol.num().low() != 0 || out.symbol.num().high() != 0)
            fail(ErrorKind::InputError, "W must be a constant matrix");
        InvolutionMatrix check(out.symbol.evaluate(1.0), 1e-12);  // throws unless W * W = I
    }
    return out;
}

json print_symbol(const RationalMatrixFunction& s, const std::optional<std::string>& role) {
    json doc;
    doc["dims"] = {s.rows(), s.cols()};
    json entries = json::array();
    for (int i = 0; i < s.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < s.cols(); ++j) row.push_back(print_terms(s.num()(i, j)));
        entries.push_back(row);
    }
    doc["entries"] = entries;
    if (!(s.den().is_monomial() && s.den().low() == 0 && s.den().coeff(0) == cplx(1.0))) doc["den"] = print_terms(s.den());
    if (role) doc["role"] = *role;
    return doc;
}

SymbolFile load_symbol_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InputError, "cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::InputError, path + ": " + e.what());
    }
    try {
        return parse_symbol(doc);
    } catch (const Error& e) {
        fail(e.kind() == ErrorKind::NotInvertibleOnCircle ? ErrorKind::InputError : e.kind(), path + ": " + e.what());
    }
}

// ---------------------------------------------------------------- reports

namespace {

json pairs_json(const std::vector<CharPair>& pairs) {
    json out = json::array();
    for (const auto& p : pairs) out.push_back({p.rho, p.kappa});
    return out;
}

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

std::string pairs_text(const std::vector<CharPair>& pairs) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < pairs.size(); ++i)
        os << (i ? ", " : "") << "(" << (pairs[i].rho > 0 ? "+1" : "-1") << "," << pairs[i].kappa << ")";
    os << "}";
    return os.str();
}

void print_report(const FredholmReport& r, std::ostream& out) {
    out << "operator: " << to_string(r.op) << "\n";
    out << "space: " << (r.space == Space::hardy ? "hardy" : "lebesgue") << "\n";
    out << "fredholm: " << (r.fredholm ? "yes" : "no") << "\n";
    if (!r.fredholm) {
        out << "note: " << r.note << "\n";
        return;
    }
    out << "route: " << (r.route == Route::left ? "left" : "right") << "\n";
    out << "pairs: " << pairs_text(r.pairs) << "\n";
    out << "dims: (" << *r.dim_ker << ", " << *r.dim_coker << ")\n";
    out << "index: " << *r.index << "\n";
    out << "invertible: " << (r.invertible ? "yes" : "no") << "\n";
    if (r.pseudoinverse) out << "pseudoinverse: " << to_string(*r.pseudoinverse) << "\n";
    out << "window: " << r.window << "\n";
    if (!r.note.empty()) out << "note: " << r.note << "\n";
}

}  // namespace

json report_json(const FredholmReport& r) {
    json j;
    j["fredholm"] = r.fredholm;
    j["index"] = opt(r.index);
    j["dim_ker"] = opt(r.dim_ker);
    j["dim_coker"] = opt(r.dim_coker);
    j["pairs"] = pairs_json(r.pairs);
    j["invertible"] = r.invertible;
    j["pseudoinverse"] = r.pseudoinverse ? json(to_string(*r.pseudoinverse)) : json(nullptr);
    j["route"] = r.route == Route::left ? "left" : "right";
    j["op"] = r.op.valid() ? json(to_string(r.op)) : json(nullptr);
    j["space"] = r.space == Space::hardy ? "hardy" : "lebesgue";
    j["window"] = r.window;
    j["note"] = r.note;
    return j;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotInvertibleOnCircle:
        case ErrorKind::SingularSymbol:
            return exit_not_fredholm;
        case ErrorKind::FactorizationFailed:
        case ErrorKind::NotAntisymmetric:
        case ErrorKind::SignatureMismatch:
            return exit_factor_failed;
        case ErrorKind::Inconclusive:
        case ErrorKind::WindowTooSmall:
            return exit_inconclusive;
        case ErrorKind::ShapeMismatch:
        case ErrorKind::EvalAtPole:
        case ErrorKind::NotInBW:
        case ErrorKind::InputError:
            return exit_input;
    }
    return exit_input;
}

// ---------------------------------------------------------------- commands

namespace {

struct Options {
    std::vector<std::string> inputs;
    std::string kind = "th";
    std::string route = "left";
    std::string mode;
    std::string what;
    double tol_circle = default_tolerances().circle;
    double tol_rank = default_tolerances().rank;
    int window = 0;
    std::vector<int> sizes{40, 80};
    std::uint64_t seed = 7;
    int cases = 50;
    bool json_out = false;

    Tolerances tol() const {
        Tolerances t;
        t.circle = tol_circle;
        t.rank = tol_rank;
        return t;
    }
};

std::vector<RationalMatrixFunction> load_inputs(const Options& o, std::size_t min, std::size_t max,
                                                const std::string& slots) {
    if (o.inputs.size() < min || o.inputs.size() > max)
        fail(ErrorKind::InputError, "expected " + slots + " as --input files");
    std::vector<RationalMatrixFunction> out;
    for (const auto& p : o.inputs) out.push_back(load_symbol_file(p).symbol);
    return out;
}

InvolutionMatrix involution_from(const RationalMatrixFunction& w) {
    if (!w.is_laurent() || w.num().low() != 0 || w.num().high() != 0)
        fail(ErrorKind::InputError, "W must be a constant matrix");
    return InvolutionMatrix(w.evaluate(1.0), 1e-12);
}

void check_square(const RationalMatrixFunction& a, const std::string& name) {
    if (!a.is_square()) fail(ErrorKind::InputError, name + " must be square");
}

// Symbols for a kind, in slot order:
//   th: a [b]   mw, nw: A [W]   phi, psi: A   sio: A [B]
struct KindInputs {
    RationalMatrixFunction a, b;
    std::optional<InvolutionMatrix> w;
};

KindInputs kind_inputs(const Options& o) {
    KindInputs k;
    if (o.kind == "th" || o.kind == "sio") {
        auto in = load_inputs(o, 1, 2, o.kind == "th" ? "a [b]" : "A [B]");
        k.a = in[0];
        check_square(k.a, "first symbol");
        k.b = in.size() > 1 ? in[1] : RationalMatrixFunction::zero(k.a.rows(), k.a.cols());
        if (k.b.rows() != k.a.rows() || k.b.cols() != k.a.cols()) fail(ErrorKind::InputError, "symbol sizes differ");
        if (o.kind == "sio" && k.a.rows() % 2) fail(ErrorKind::InputError, "A must be 2N x 2N");
    } else if (o.kind == "mw" || o.kind == "nw") {
        auto in = load_inputs(o, 1, 2, "A [W]");
        k.a = in[0];
        check_square(k.a, "A");
        k.w = in.size() > 1 ? involution_from(in[1]) : InvolutionMatrix::identity(k.a.rows());
        if (k.w->size() != k.a.rows()) fail(ErrorKind::InputError, "A and W sizes differ");
    } else {
        auto in = load_inputs(o, 1, 1, "A");
        k.a = in[0];
        check_square(k.a, "A");
        if (k.a.rows() % 2) fail(ErrorKind::InputError, "A must be 2N x 2N");
    }
    return k;
}

FredholmReport analyze_kind(const Options& o) {
    const KindInputs k = kind_inputs(o);
    const Tolerances tol = o.tol();
    if (o.kind == "th") return analyze_toeplitz_hankel(k.a, k.b, o.route == "right" ? Route::right : Route::left, tol);
    if (o.kind == "mw") return analyze_mw(k.a, *k.w, tol);
    if (o.kind == "nw") return analyze_nw(k.a, *k.w, tol);
    if (o.kind == "phi") return analyze_phi(k.a, tol);
    if (o.kind == "psi") return analyze_psi(k.a, tol);
    return analyze_general_sio(k.a, k.b, tol);
}

// The operator built straight from the symbols, on the Hardy side.
OperatorExpr hardy_operator(const Options& o) {
    const KindInputs k = kind_inputs(o);
    const Tolerances tol = o.tol();
    if (o.kind == "th") return toeplitz(k.a, tol) + hankel(k.b, tol);
    if (o.kind == "mw") return build_mw(k.a, *k.w, tol);
    if (o.kind == "nw") return build_nw(k.a, *k.w, tol);
    if (o.kind == "phi") return xi_transport(build_phi(k.a, tol));
    if (o.kind == "psi") return xi_transport(build_psi(k.a, tol));
    return xi_transport(build_general_sio(k.a, k.b, tol));
}

int cmd_analyze(const Options& o, std::ostream& out) {
    FredholmReport r = analyze_kind(o);
    if (o.json_out) out << report_json(r).dump(2) << "\n";
    else print_report(r, out);
    return r.fredholm ? exit_ok : exit_not_fredholm;
}

json wh_json(const WHReport& r) {
    return {{"residual", r.residual}, {"minus_ok", r.minus_ok}, {"plus_ok", r.plus_ok},
            {"index_sum", r.index_sum}, {"winding", r.winding}, {"pass", r.pass}, {"issues", r.issues}};
}

int cmd_factor(const Options& o, std::ostream& out) {
    const Tolerances tol = o.tol();
    json j;
    j["mode"] = o.mode;
    bool ok = true;
    if (o.mode == "wh" || o.mode == "antisym") {
        auto in = load_inputs(o, 1, 1, "F");
        const RationalMatrixFunction& f = in[0];
        check_square(f, "F");
        if (o.mode == "wh") {
            WHFactorization wh = factor_matrix(f, tol);
            WHReport rep = verify_wh(wh, f, tol);
            j["partial_indices"] = wh.partial_indices;
            j["minus"] = print_symbol(wh.minus_factor);
            j["plus"] = print_symbol(wh.plus_factor);
            j["verification"] = wh_json(rep);
            ok = rep.pass;
        } else {
            AntisymFactorization af = antisym_factor(f, tol);
            const double res = grid_residual(af.product(), f, tol.grid);
            const bool sig = check_signatures(f, signature_counts(af.pairs), tol);
            j["pairs"] = pairs_json(af.pairs);
            j["minus"] = print_symbol(af.minus_factor);
            j["residual"] = res;
            j["signatures_ok"] = sig;
            ok = res <= tol.resid && sig;
        }
    } else {
        auto in = load_inputs(o, 1, 2, "A [W]");
        const RationalMatrixFunction& a = in[0];
        check_square(a, "A");
        const InvolutionMatrix w = in.size() > 1 ? involution_from(in[1]) : InvolutionMatrix::identity(a.rows());
        if (o.mode == "asym-left") {
            LeftAsymFactorization f = asym_factor_left(a, w, tol);
            j["pairs"] = pairs_json(f.pairs);
            j["a_minus"] = print_symbol(f.a_minus);
            j["r"] = print_symbol(f.r);
            j["a_zero"] = print_symbol(f.a_zero);
            j["residual"] = grid_residual(f.a_minus * f.r * f.a_zero, a, tol.grid);
        } else {
            RightAsymFactorization f = asym_factor_right(a, w, tol);
            j["pairs"] = pairs_json(f.pairs);
            j["a_zero"] = print_symbol(f.a_zero);
            j["r"] = print_symbol(f.r);
            j["a_plus"] = print_symbol(f.a_plus);
            j["residual"] = grid_residual(f.a_zero * f.r * f.a_plus, a, tol.grid);
        }
        ok = j["residual"].get<double>() <= tol.resid;
    }
    j["pass"] = ok;
    if (o.json_out) {
        out << j.dump(2) << "\n";
    } else {
        out << "mode: " << o.mode << "\n";
        if (j.contains("partial_indices")) out << "partial indices: " << j["partial_indices"].dump() << "\n";
        if (j.contains("pairs")) {
            std::vector<CharPair> p;
            for (const auto& x : j["pairs"]) p.push_back({x[0].get<int>(), x[1].get<int>()});
            out << "pairs: " << pairs_text(p) << "\n";
        }
        if (j.contains("verification")) out << "residual: " << j["verification"]["residual"].get<double>() << "\n";
        if (j.contains("residual")) out << "residual: " << j["residual"].get<double>() << "\n";
        if (j.contains("signatures_ok")) out << "signatures: " << (j["signatures_ok"].get<bool>() ? "ok" : "mismatch") << "\n";
        out << "factors:\n" << j.dump(2) << "\n";
    }
    return ok ? exit_ok : exit_factor_failed;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const Tolerances tol = o.tol();
    json j;
    j["what"] = o.what;
    int code = exit_ok;
    if (o.what == "pseudoinverse") {
        FredholmReport r = analyze_kind(o);
        if (!r.fredholm) {
            j["fredholm"] = false;
            j["note"] = r.note;
            code = exit_not_fredholm;
        } else {
            PseudoinverseCheck c = verify_pseudoinverse(r.op, *r.pseudoinverse, 8, o.window, tol.resid, r.space, o.seed);
            j["fredholm"] = true;
            j["residual"] = c.residual;
            j["tail"] = c.tail;
            j["trials"] = c.trials;
            j["window"] = c.window;
            j["pass"] = c.pass;
            if (!c.pass) code = exit_factor_failed;
        }
    } else if (o.what == "splitting") {
        SplittingEstimate e = sv_splitting(hardy_operator(o), o.sizes, tol);
        j["total_defect"] = e.total_defect;
        j["sizes"] = e.sizes_used;
        j["counts"] = e.counts;
        j["gap_ratios"] = e.gap_ratios;
        j["smallest_singular_values"] = e.smallest_singular_values;
        j["confident"] = e.confident;
        if (!e.confident) code = exit_inconclusive;
    } else {
        auto in = load_inputs(o, 1, 1, "F");
        const RationalMatrixFunction& f = in[0];
        check_square(f, "F");
        AntisymFactorization af = antisym_factor(f, tol);
        SignatureCounts c = signature_counts(af.pairs);
        Signature s1 = involution_signature(f.evaluate(1.0), tol), s2 = involution_signature(f.evaluate(-1.0), tol);
        const bool ok = check_signatures(f, c, tol);
        j["pairs"] = pairs_json(af.pairs);
        j["counts"] = {{"alpha", c.alpha}, {"beta", c.beta}, {"gamma", c.gamma}, {"delta", c.delta}};
        j["F(1)"] = {s1.plus, s1.minus};
        j["F(-1)"] = {s2.plus, s2.minus};
        j["pass"] = ok;
        if (!ok) code = exit_factor_failed;
    }
    if (o.json_out) {
        out << j.dump(2) << "\n";
    } else {
        for (const auto& [k, v] : j.items()) out << k << ": " << v.dump() << "\n";
    }
    return code;
}

int cmd_identities(const Options& o, std::ostream& out) {
    IdentityReport rep = identity_suite(o.seed, o.cases);
    constexpr double bound = 1e-12;
    const bool ok = rep.max_residual() <= bound;
    if (o.json_out) {
        json j;
        j["seed"] = rep.seed;
        j["cases"] = rep.cases;
        j["bound"] = bound;
        json rs = json::array();
        for (const auto& r : rep.results)
            rs.push_back({{"name", r.name}, {"max_residual", r.max_residual}, {"checks", r.checks},
                          {"pass", r.max_residual <= bound}});
        j["results"] = rs;
        j["pass"] = ok;
        out << j.dump(2) << "\n";
    } else {
        out << "seed " << rep.seed << ", " << rep.cases << " cases\n";
        for (const auto& r : rep.results)
            out << (r.max_residual <= bound ? "ok   " : "FAIL ") << r.name << "  max residual " << r.max_residual << "  ("
                << r.checks << " checks)\n";
    }
    return ok ? exit_ok : exit_inconclusive;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Toeplitz plus Hankel and flip operators: Fredholm analysis through antisymmetric factorization"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* s) {
        s->add_option("--input", o.inputs, "symbol file, repeat for further slots");
        s->add_option("--tol-circle", o.tol_circle, "distance to the unit circle counted as on it");
        s->add_option("--tol-rank", o.tol_rank, "relative singular value cutoff");
        s->add_flag("--json", o.json_out, "machine-readable output");
    };
    const std::vector<std::string> kinds{"th", "mw", "nw", "phi", "psi", "sio"};

    auto* analyze = app.add_subcommand("analyze", "Fredholm report: dims, pairs, pseudoinverse");
    common(analyze);
    analyze->add_option("--kind", o.kind, "th: a [b]; mw, nw: A [W]; phi, psi: A; sio: A [B]")
        ->check(CLI::IsMember(kinds))
        ->required();
    analyze->add_option("--route", o.route, "th only")->check(CLI::IsMember({"left", "right"}));

    auto* factor = app.add_subcommand("factor", "factorization dump and verification");
    common(factor);
    factor->add_option("--mode", o.mode, "wh, antisym: F; asym-left, asym-right: A [W]")
        ->check(CLI::IsMember({"wh", "antisym", "asym-left", "asym-right"}))
        ->required();

    auto* verify = app.add_subcommand("verify", "independent numerical checks");
    common(verify);
    verify->add_option("--what", o.what, "pseudoinverse, splitting: --kind inputs; signatures: F")
        ->check(CLI::IsMember({"pseudoinverse", "splitting", "signatures"}))
        ->required();
    verify->add_option("--kind", o.kind, "operator kind")->check(CLI::IsMember(kinds));
    verify->add_option("--window", o.window, "fixed Fourier window, 0 for automatic");
    verify->add_option("--sizes", o.sizes, "finite section sizes")->delimiter(',');
    verify->add_option("--seed", o.seed, "random vectors");

    auto* identities = app.add_subcommand("identities", "operator identity suite on random symbols");
    identities->add_option("--seed", o.seed);
    identities->add_option("--cases", o.cases)->check(CLI::PositiveNumber);
    identities->add_flag("--json", o.json_out, "machine-readable output");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(o, out);
        if (factor->parsed()) return cmd_factor(o, out);
        if (verify->parsed()) return cmd_verify(o, out);
        return cmd_identities(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    }
}

}  // namespace whflip
