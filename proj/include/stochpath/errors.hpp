#pragma once

#include <stdexcept>
#include <string>

namespace stochpath {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (models, queries, strategies). Carries line/column.
struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& what, int line_, int column_ = 0)
        : Error("line " + std::to_string(line_) +
                (column_ > 0 ? ":" + std::to_string(column_) : "") + ": " + what),
          line(line_), column(column_) {}
};

/// A model violates a structural invariant in a way that prevents solving.
struct ModelError : Error {
    explicit ModelError(const std::string& what) : Error(what) {}
};

/// A strategy is incompatible with the model it is applied to.
struct StrategyError : Error {
    explicit StrategyError(const std::string& what) : Error(what) {}
};

} // namespace stochpath
