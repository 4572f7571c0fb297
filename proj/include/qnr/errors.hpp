#pragma once

#include <stdexcept>
#include <string>

namespace qnr {

// Bad argument to an operation (odd fat-tree order, zero flow count, ...).
class ParamError : public std::invalid_argument {
public:
    explicit ParamError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input text. Carries a 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Structural invariant broken (disconnected topology, duplicate flow id, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Per-flow routing slice that cannot be decoded into a simple path.
class DecodeError : public std::runtime_error {
public:
    DecodeError(const std::string& what, int switch_id)
        : std::runtime_error(what), switch_id_(switch_id) {}
    int switch_id() const { return switch_id_; }

private:
    int switch_id_;
};

// Instance too large for an exhaustive operation.
class GuardError : public std::runtime_error {
public:
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qnr
