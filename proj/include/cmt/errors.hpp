#pragma once

#include <stdexcept>
#include <string>

namespace cmt {

/// Malformed or inconsistent configuration input (CLI exit code 2).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: singular solve, non-convergence (CLI exit code 3).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parameters outside the validity region of the underlying model.
class model_error : public std::runtime_error {
public:
    explicit model_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cmt
