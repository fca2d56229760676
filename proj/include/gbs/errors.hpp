#pragma once

#include <stdexcept>
#include <string>

namespace gbs {

// Base class for all engine errors. Each concrete type maps to a distinct
// CLI exit code (see cli/run.hpp).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument or violated type invariant (bad band, degenerate domain, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// Configuration parse/validation failure; carries the offending field path.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : Error(field.empty() ? what : field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// A required mesh condition does not hold for the requested grid.
class MeshError : public Error {
public:
    explicit MeshError(const std::string& what) : Error(what) {}
};

// Non-finite value produced while time stepping; names the first offending
// (time level, node index).
class DivergenceError : public Error {
public:
    DivergenceError(int level, int node, const std::string& what)
        : Error(what), level_(level), node_(node) {}
    int level() const { return level_; }
    int node() const { return node_; }

private:
    int level_;
    int node_;
};

// Picard inner iteration hit its cap without meeting the tolerance; carries
// the last sup-norm increment.
class PicardError : public Error {
public:
    PicardError(double last_increment, const std::string& what)
        : Error(what), last_increment_(last_increment) {}
    double last_increment() const { return last_increment_; }

private:
    double last_increment_;
};

// Tridiagonal elimination met a zero/near-zero pivot.
class SingularSystemError : public Error {
public:
    explicit SingularSystemError(const std::string& what) : Error(what) {}
};

// Grids passed to an error norm are not nested / not comparable.
class GridMismatchError : public Error {
public:
    explicit GridMismatchError(const std::string& what) : Error(what) {}
};

// Operation does not apply to the given input (e.g. iteration profile of an
// explicit solution).
class NotApplicableError : public Error {
public:
    explicit NotApplicableError(const std::string& what) : Error(what) {}
};

// Output file could not be opened or written.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace gbs
