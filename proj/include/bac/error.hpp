#pragma once

#include <stdexcept>
#include <string>

namespace bac {

/// Base of every error the checker reports. The CLI maps all of them to
/// exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed XML/HTML. The message carries the element path and line.
class ParseError : public Error {
public:
    using Error::Error;
};

std::string read_file(const std::string& path);

}  // namespace bac
