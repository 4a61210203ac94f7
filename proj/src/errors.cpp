#include "whflip/errors.hpp"

namespace whflip {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::EvalAtPole: return "EvalAtPole";
        case ErrorKind::NotInvertibleOnCircle: return "NotInvertibleOnCircle";
        case ErrorKind::SingularSymbol: return "SingularSymbol";
        case ErrorKind::FactorizationFailed: return "FactorizationFailed";
        case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
        case ErrorKind::SignatureMismatch: return "SignatureMismatch";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::NotInBW: return "NotInBW";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::InputError: return "InputError";
    }
    return "Unknown";
}

}  // namespace whflip
