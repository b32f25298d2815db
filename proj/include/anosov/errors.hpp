#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

// Bad user input: unparsable words, unknown names, dangling references.
struct MalformedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation was called outside its domain.
struct PreconditionViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal bookkeeping found an inconsistent model (unresolved owner, etc).
struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Unsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace anosov
