#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "whflip/errors.hpp"
#include "whflip/solver.hpp"

namespace whflip {

// One symbol per file:
// {"dims": [r, c], "entries": [[[[exp, re, im], ...], ...], ...], "den": [[exp, re, im], ...], "role": "a"}
// Numbers are JSON numbers or strings "p/q" / "p". den and role are optional.
struct SymbolFile {
    RationalMatrixFunction symbol;
    std::optional<std::string> role;  // a, b, A, B or W
};

SymbolFile parse_symbol(const nlohmann::json& doc);
nlohmann::json print_symbol(const RationalMatrixFunction& s, const std::optional<std::string>& role = std::nullopt);
SymbolFile load_symbol_file(const std::string& path);

nlohmann::json report_json(const FredholmReport& r);

enum ExitCode { exit_ok = 0, exit_not_fredholm = 1, exit_factor_failed = 2, exit_input = 3, exit_inconclusive = 4 };
int exit_code_for(ErrorKind kind);

// Full command line including the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace whflip
