#include "stp/numeric.hpp"

#include <string>

#include "stp/errors.hpp"

namespace stp {

std::string_view to_string(Precision p) {
    return p == Precision::Double ? "double" : "extended";
}

Precision parse_precision(std::string_view name) {
    if (name == "double") return Precision::Double;
    if (name == "extended") return Precision::Extended;
    throw InvalidInput("unknown precision '" + std::string(name) + "'");
}

}  // namespace stp
