#pragma once

#include <stdexcept>
#include <string>

namespace whflip {

enum class ErrorKind {
    ShapeMismatch,
    EvalAtPole,
    NotInvertibleOnCircle,
    SingularSymbol,
    FactorizationFailed,
    NotAntisymmetric,
    SignatureMismatch,
    WindowTooSmall,
    NotInBW,
    Inconclusive,
    InputError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace whflip
