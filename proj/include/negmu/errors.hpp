#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace negmu {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physics evaluation hit a pole. Carries the (x, y) sample position when
/// the failure happened inside a spatial evaluation.
class SingularityError : public Error {
public:
    explicit SingularityError(const std::string& what,
                              std::optional<std::pair<double, double>> where = std::nullopt)
        : Error(what), where_(where) {}

    const std::optional<std::pair<double, double>>& where() const noexcept { return where_; }

private:
    std::optional<std::pair<double, double>> where_;
};

/// The steady-state 2x2 system has (numerically) zero determinant.
class SingularSystem : public SingularityError {
public:
    using SingularityError::SingularityError;
};

/// 1 - N*chi/3 vanished: the local-field correction diverges.
class LocalFieldSingularity : public SingularityError {
public:
    using SingularityError::SingularityError;
};

class UnstableStep : public Error {
public:
    using Error::Error;
};

class AsymmetricGrid : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Configuration value out of range or unknown. `key()` is the dotted path.
class ValidationError : public Error {
public:
    ValidationError(std::string key, const std::string& reason)
        : Error(key + ": " + reason), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace negmu
