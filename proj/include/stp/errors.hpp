#pragma once

#include <stdexcept>
#include <string>

namespace stp {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class InvalidDimension : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// Thrown when a directional probe offset falls below the configured floor.
class ScheduleExhausted : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class UnsupportedObjective : public Error {
public:
    using Error::Error;
};

class DegenerateStart : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class FileError : public Error {
public:
    using Error::Error;
};

}  // namespace stp
