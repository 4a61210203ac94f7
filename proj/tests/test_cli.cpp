#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "whflip/cli.hpp"
#include "whflip/errors.hpp"
#include "whflip/oracle.hpp"

using namespace whflip;
using namespace th;
using nlohmann::json;

namespace {

const std::string fixtures = WHFLIP_FIXTURES;

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "whflip");
    std::ostringstream out, err;
    int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
    auto dir = std::filesystem::path(WHFLIP_SCRATCH);
    std::filesystem::create_directories(dir);
    auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
}

bool same_poly(const LaurentPoly& a, const LaurentPoly& b) { return a.coeffs() == b.coeffs(); }

bool same_symbol(const RationalMatrixFunction& a, const RationalMatrixFunction& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || !same_poly(a.den(), b.den())) return false;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!same_poly(a.num()(i, j), b.num()(i, j))) return false;
    return true;
}

}  // namespace

TEST_CASE("symbol files: parsing") {
    auto s = parse_symbol(json::parse(R"({"dims": [1, 2], "entries": [[[[0, "1/4", "-3/2"], [2, 1]], []]],
                                          "den": [[0, 1], [1, "1/2"]], "role": "A"})"));
    CHECK(s.role == "A");
    CHECK(s.symbol.num()(0, 0).coeff(0) == cplx(0.25, -1.5));
    CHECK(s.symbol.num()(0, 0).coeff(2) == cplx(1.0, 0.0));
    CHECK(s.symbol.num()(0, 1).is_zero());
    CHECK(s.symbol.den().coeff(1) == cplx(0.5, 0.0));

    auto bad = [](const char* text) {
        try {
            parse_symbol(json::parse(text));
        } catch (const Error& e) {
            return e.kind() == ErrorKind::InputError;
        }
        return false;
    };
    CHECK(bad(R"({"dims": [1, 1]})"));
    CHECK(bad(R"({"dims": [1, 1], "entries": [[[[0, "1/0"]]]]})"));
    CHECK(bad(R"({"dims": [1, 1], "entries": [[[[0.5, 1]]]]})"));
    CHECK(bad(R"({"dims": [2, 1], "entries": [[[[0, 1]]]]})"));
    CHECK(bad(R"({"dims": [1, 1], "entries": [[[[0, "x"]]]]})"));
    CHECK(bad(R"({"dims": [1, 1], "entries": [[[[0, 1]]]], "extra": 1})"));
    CHECK(bad(R"({"dims": [1, 1], "entries": [[[[0, 1]]]], "role": "Q"})"));
    // W must square to I exactly, and be constant
    CHECK(bad(R"({"dims": [1, 1], "entries": [[[[0, 2]]]], "role": "W"})"));
    CHECK(bad(R"({"dims": [1, 1], "entries": [[[[1, 1]]]], "role": "W"})"));
    CHECK_FALSE(bad(R"({"dims": [2, 2], "entries": [[[], [[0, 1]]], [[[0, 1]], []]], "role": "W"})"));
}

TEST_CASE("property: print then parse gives back the same symbol") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> dim(1, 3), deg(0, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        int lo = -deg(rng), hi = deg(rng);
        auto num = random_symbol(rng, dim(rng), dim(rng), lo, hi);
        RationalMatrixFunction s = num;
        if (trial % 2) {
            std::map<int, cplx> d{{0, 1.0}, {1, cplx(u(rng), u(rng)) / 3.0}};
            s = RationalMatrixFunction(num.num(), LaurentPoly(d));
        }
        // third-ish values stress the decimal printing
        s = (1.0 / 3.0) * s;
        auto text = print_symbol(s, trial % 3 ? std::optional<std::string>("a") : std::nullopt).dump();
        auto back = parse_symbol(json::parse(text));
        CHECK(same_symbol(back.symbol, s));
        CHECK(print_symbol(back.symbol, back.role).dump() == text);
    }
}

TEST_CASE("cli: analyze on the shipped fixtures") {
    auto r = run({"analyze", "--kind", "th", "--input", fixtures + "/th_t_0/a.json", "--input",
                  fixtures + "/th_t_0/b.json", "--json"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["dim_ker"] == 0);
    CHECK(j["dim_coker"] == 1);
    CHECK(j["pairs"] == json::parse("[[-1, 1], [1, 1]]"));
    for (const char* key : {"fredholm", "index", "dim_ker", "dim_coker", "pairs", "invertible", "pseudoinverse", "route",
                            "op", "space", "window", "note"})
        CHECK(j.contains(key));

    auto r2 = run({"analyze", "--kind", "th", "--input", fixtures + "/th_1_t/a.json", "--input",
                   fixtures + "/th_1_t/b.json", "--json"});
    CHECK(r2.code == 0);
    CHECK(json::parse(r2.out)["invertible"] == true);

    // right route, pairs with rho negated
    auto r3 = run({"analyze", "--kind", "th", "--route", "right", "--input", fixtures + "/th_t_0/a.json", "--json"});
    CHECK(r3.code == 0);
    CHECK(json::parse(r3.out)["dim_coker"] == 1);

    auto text = run({"analyze", "--kind", "th", "--input", fixtures + "/th_t_0/a.json"});
    CHECK(text.out.find("dims: (0, 1)") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
    // t + 1/t vanishes at +-i
    auto bad_a = write_temp("t_plus_tinv.json", R"({"dims": [1, 1], "entries": [[[[-1, 1], [1, 1]]]]})");
    auto r = run({"analyze", "--kind", "th", "--input", bad_a, "--json"});
    CHECK(r.code == 1);
    CHECK(json::parse(r.out)["fredholm"] == false);

    CHECK(run({"analyze", "--kind", "th"}).code == 3);
    CHECK(run({"analyze", "--kind", "zz", "--input", bad_a}).code == 3);
    CHECK(run({"analyze", "--kind", "th", "--input", "/nonexistent.json"}).code == 3);
    CHECK(run({"frobnicate"}).code == 3);
    CHECK(run({"--help"}).code == 0);

    // F not antisymmetric
    auto f = write_temp("not_antisym.json", R"({"dims": [1, 1], "entries": [[[[1, 2]]]]})");
    auto rf = run({"factor", "--mode", "antisym", "--input", f});
    CHECK(rf.code == 2);
    CHECK(rf.err.find("NotAntisymmetric") != std::string::npos);

    // W with the wrong size
    auto w1 = write_temp("w1.json", R"({"dims": [1, 1], "entries": [[[[0, -1]]]], "role": "W"})");
    CHECK(run({"analyze", "--kind", "mw", "--input", fixtures + "/antidiag_t.json", "--input", w1}).code == 3);

    // splitting that cannot settle: T(t - 0.97)
    auto slow = write_temp("slow.json", R"({"dims": [1, 1], "entries": [[[[0, -0.97], [1, 1]]]]})");
    CHECK(run({"verify", "--what", "splitting", "--kind", "th", "--input", slow, "--sizes", "40,600"}).code == 4);
}

TEST_CASE("cli: factor and verify") {
    auto r = run({"factor", "--mode", "antisym", "--input", fixtures + "/antidiag_t.json", "--json"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["pairs"] == json::parse("[[-1, 1], [1, 1]]"));
    CHECK(j["signatures_ok"] == true);
    // the dumped factor is itself a symbol file
    auto fm = parse_symbol(j["minus"]).symbol;
    CHECK(std::abs(std::abs(fm.evaluate(1.0).determinant()) - 1.0) < 1e-12);

    auto wh = run({"factor", "--mode", "wh", "--input", fixtures + "/antidiag_t.json", "--json"});
    CHECK(wh.code == 0);
    CHECK(json::parse(wh.out)["partial_indices"] == json::parse("[1, 1]"));

    auto al = run({"factor", "--mode", "asym-left", "--input", fixtures + "/antidiag_t.json", "--input",
                   fixtures + "/w_swap.json", "--json"});
    CHECK(al.code == 0);
    CHECK(json::parse(al.out)["residual"].get<double>() < 1e-8);
    auto ar = run({"factor", "--mode", "asym-right", "--input", fixtures + "/antidiag_t.json", "--json"});
    CHECK(ar.code == 0);

    auto sp = run({"verify", "--what", "splitting", "--kind", "th", "--input", fixtures + "/th_t_0/a.json", "--json"});
    CHECK(sp.code == 0);
    CHECK(json::parse(sp.out)["total_defect"] == 1);

    auto pv = run({"verify", "--what", "pseudoinverse", "--kind", "th", "--input", fixtures + "/th_t_0/a.json", "--json"});
    CHECK(pv.code == 0);
    CHECK(json::parse(pv.out)["pass"] == true);

    auto sg = run({"verify", "--what", "signatures", "--input", fixtures + "/antidiag_t.json", "--json"});
    CHECK(sg.code == 0);
    CHECK(json::parse(sg.out)["F(1)"] == json::parse("[1, 1]"));
}

TEST_CASE("cli: identities") {
    auto r = run({"identities", "--seed", "7", "--cases", "50", "--json"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["results"].size() == identity_names().size());
}
