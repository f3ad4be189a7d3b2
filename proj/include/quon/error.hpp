#pragma once

#include <stdexcept>
#include <string>

namespace quon {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define QUON_DEFINE_ERROR(Name)            \
    struct Name : Error {                  \
        using Error::Error;                \
    }

QUON_DEFINE_ERROR(InvalidDimension);
QUON_DEFINE_ERROR(ShapeError);
QUON_DEFINE_ERROR(SiteError);
QUON_DEFINE_ERROR(AlgebraMismatch);
QUON_DEFINE_ERROR(TwistError);
QUON_DEFINE_ERROR(OddSiteError);
QUON_DEFINE_ERROR(CapExceeded);
QUON_DEFINE_ERROR(ImpossibleOutcome);
QUON_DEFINE_ERROR(NotFound);
QUON_DEFINE_ERROR(ChargedWord);
QUON_DEFINE_ERROR(NetworkError);
QUON_DEFINE_ERROR(BasisError);
QUON_DEFINE_ERROR(GraphError);
QUON_DEFINE_ERROR(NoMatch);
QUON_DEFINE_ERROR(NotCompilable);

#undef QUON_DEFINE_ERROR

/// Syntax error in a .quon document; carries a 1-based position.
struct ParseError : Error {
    ParseError(int line, int column, const std::string &message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line(line),
          column(column) {
    }
    int line;
    int column;
};

}  // namespace quon
