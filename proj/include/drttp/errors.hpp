#pragma once

#include <stdexcept>
#include <string>

namespace drttp {

// Exit-code mapping used by the CLI: ParamError -> 2, RejectedConstruction -> 3.
struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RejectedConstruction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace drttp
