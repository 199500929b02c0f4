#pragma once

#include <stdexcept>
#include <string>

namespace shgal {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Collocation grid too coarse for exact quadrature of the requested degree.
class DealiasingError : public Error {
public:
    using Error::Error;
};

// Tangent projection requested at u = 0.
class DegenerateBaseError : public Error {
public:
    using Error::Error;
};

// Truncated initial datum vanishes, so it cannot be normalized.
class InitializationError : public Error {
public:
    using Error::Error;
};

// Adaptive reference integrator could not keep its step above the floor.
class StiffnessError : public Error {
public:
    StiffnessError(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

// Invalid experiment configuration. key() is the dotted config path.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace shgal
