#ifndef QUASIRBF_ERRORS_HPP
#define QUASIRBF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quasirbf {

// Invalid input / parameter outside an operation's domain. CLI exit code 2.
class spec_error : public std::invalid_argument {
public:
    explicit spec_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A numerical procedure failed to reach its accuracy target. CLI exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace quasirbf

#endif
