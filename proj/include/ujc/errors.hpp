#pragma once

#include <stdexcept>
#include <string>

namespace ujc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input document. line is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// An exact solver hit its resource cap. Never silently replaced by a heuristic.
class OracleLimit : public Error {
public:
    using Error::Error;
};

class Infeasible : public Error {
public:
    using Error::Error;
};

class StageFailure : public Error {
public:
    using Error::Error;
};

}  // namespace ujc
