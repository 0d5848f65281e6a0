#pragma once

#include <stdexcept>
#include <string>

namespace qif {

/// Base class for every error this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Syntax error in a program or scenario source, with 1-based position.
struct ParseError : Error {
    ParseError(std::string msg, int line_, int col_)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_),
          col(col_) {}

    int line;
    int col;
};

/// A well-formed input that violates a semantic rule (undeclared variable,
/// value outside its domain, duplicate declaration, ill-formed belief, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// Two beliefs or distributions that were expected to share a domain do not.
struct DomainMismatchError : ValidationError {
    using ValidationError::ValidationError;
};

/// Bayesian revision against an observation that has zero probability under
/// the prebelief: the experiment is inconsistent.
struct ImpossibleObservationError : Error {
    using Error::Error;
};

/// A metric evaluated at a corner where it has no value (e.g. the log-ratio
/// flow when both the pre- and postbelief vanish at reality).
struct UndefinedMetricError : Error {
    using Error::Error;
};

/// Scenario file problems that are not plain syntax errors.
struct ScenarioError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace qif
