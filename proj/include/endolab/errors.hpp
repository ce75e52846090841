#pragma once

#include <stdexcept>
#include <string>

namespace endolab {

// Invalid arguments, broken invariants of inputs, bad configs.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// An exponential budget (d^n nodes, point clouds) would be exceeded.
class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical procedure failed (root finding, degenerate pushforward, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A constructed object failed its own build-time verification.
class ConstructionError : public std::runtime_error {
public:
    explicit ConstructionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace endolab
