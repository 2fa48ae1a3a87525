#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chatdom {

// Base of every error the library throws. The CLI maps the subclasses
// onto distinct exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file. line is 1-based, 0 when no line applies.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyTranscriptError : public ParseError {
public:
    EmptyTranscriptError() : ParseError("empty transcript") {}
};

// File cannot be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Bad lexicon, option or key mismatch between files.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Model fitting or scoring cannot proceed (single-class response,
// rank deficiency, column mismatch).
class ModelError : public Error {
public:
    using Error::Error;
};

}  // namespace chatdom
