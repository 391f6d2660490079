#pragma once

#include <stdexcept>
#include <string>

namespace gac {

// Input text could not be parsed. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

// A theorem's hypotheses could not be verified (and were not assumed).
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

// An operation was asked to run beyond its configured size bound.
class BoundError : public std::runtime_error {
public:
    explicit BoundError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gac
