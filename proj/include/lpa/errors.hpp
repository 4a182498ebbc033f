#pragma once

#include <stdexcept>
#include <string>

namespace lpa {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Lexical or semantic error in an input text (.lpg files, element
/// expressions). Line and column are 1-based; 0 means "not applicable".
struct ParseError : Error {
    ParseError(std::string msg, int line_ = 0, int col_ = 0)
        : Error(line_ > 0 ? std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg
                          : msg),
          line(line_),
          col(col_) {}
    int line = 0;
    int col = 0;
};

/// A well-formed request whose answer does not exist (unknown vertex, witness
/// for a sink, ...).
struct DomainError : Error {
    using Error::Error;
};

/// An internal iteration or depth cap was exceeded.
struct CapError : Error {
    using Error::Error;
};

/// The requested object provably does not exist (a witness for a sink or an
/// infinite emitter); the message names the obstruction.
struct ObstructionError : Error {
    using Error::Error;
};

}  // namespace lpa
