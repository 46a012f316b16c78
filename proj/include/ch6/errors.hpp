// errors.hpp - exception types shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace ch6 {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration / input validation failure. Carries the offending key path
// ("section.key") when raised by the config parser.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg, std::string key = {})
        : Error(key.empty() ? msg : key + ": " + msg), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// Time integration failure (nodal max exceeded the blow-up bound).
class SolverError : public Error {
public:
    SolverError(const std::string& msg, double time)
        : Error(msg + " (t = " + std::to_string(time) + ")"), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ch6
