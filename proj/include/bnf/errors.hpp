#pragma once

#include <stdexcept>
#include <string>

namespace bnf {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SafeRangeError : public Error {
public:
    explicit SafeRangeError(const std::string& what) : Error("safe-range violation: " + what) {}
};

class ResonanceError : public Error {
public:
    explicit ResonanceError(const std::string& what) : Error(what) {}
};

class TailDivergentError : public Error {
public:
    explicit TailDivergentError(const std::string& what) : Error(what) {}
};

class NoStableRegimeError : public Error {
public:
    explicit NoStableRegimeError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace bnf
