#ifndef DDG_ERROR_HPP
#define DDG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace ddg {

/// Malformed arguments: dimension mismatches, out-of-range sizes, bad JSON.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A class family is not closed under composition.
class ClosureError : public std::runtime_error {
public:
    ClosureError(std::size_t outer, std::size_t inner, const std::string& what)
        : std::runtime_error(what), outer_(outer), inner_(inner) {}

    std::size_t outer() const noexcept { return outer_; }
    std::size_t inner() const noexcept { return inner_; }

private:
    std::size_t outer_;
    std::size_t inner_;
};

/// A signature does not fit into the target block sizes.
class CapacityError : public std::runtime_error {
public:
    CapacityError(std::size_t vertex, std::string deficit, const std::string& what)
        : std::runtime_error(what), vertex_(vertex), deficit_(std::move(deficit)) {}

    std::size_t vertex() const noexcept { return vertex_; }
    const std::string& deficit() const noexcept { return deficit_; }

private:
    std::size_t vertex_;
    std::string deficit_;
};

/// Matrix-unit images that do not form a regular star-extendible embedding.
class MalformedEmbedding : public std::runtime_error {
public:
    explicit MalformedEmbedding(const std::string& what) : std::runtime_error(what) {}
};

/// Generator images that no regular embedding realizes.
class NotLiftable : public std::runtime_error {
public:
    explicit NotLiftable(const std::string& what) : std::runtime_error(what) {}
};

/// An operation precondition that depends on computed data (e.g. a rank test).
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ddg

#endif  // DDG_ERROR_HPP
