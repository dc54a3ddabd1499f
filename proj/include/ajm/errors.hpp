#pragma once

#include <stdexcept>
#include <string>

namespace ajm {

/// Invalid user input: parameters out of domain, malformed configuration.
/// The command line tool maps this to exit code 2.
class ConfigError : public std::domain_error {
public:
    explicit ConfigError(const std::string& what) : std::domain_error(what) {}
};

/// A computation that started from valid input failed a numerical sanity
/// check (normalization defect, non-convergence, overflow of a grid budget).
/// The command line tool maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ajm
