#ifndef RGGNN_ERRORS_HPP
#define RGGNN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rggnn {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct EdgelessGraph : Error {
    explicit EdgelessGraph(const std::string& msg) : Error(msg) {}
};

struct EmptyGraph : Error {
    explicit EmptyGraph(const std::string& msg) : Error(msg) {}
};

struct MissingParent : Error {
    explicit MissingParent(const std::string& msg) : Error(msg) {}
};

struct BoundaryNotCirculant : Error {
    explicit BoundaryNotCirculant(const std::string& msg) : Error(msg) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

struct TapeMismatch : Error {
    explicit TapeMismatch(const std::string& msg) : Error(msg) {}
};

struct AsymmetricGso : Error {
    explicit AsymmetricGso(const std::string& msg) : Error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

struct InvalidPower : Error {
    explicit InvalidPower(const std::string& msg) : Error(msg) {}
};

struct BisectionError : Error {
    explicit BisectionError(const std::string& msg) : Error(msg) {}
};

struct DatasetNotFound : Error {
    explicit DatasetNotFound(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace rggnn

#endif // RGGNN_ERRORS_HPP
