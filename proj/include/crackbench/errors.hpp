#pragma once

#include <stdexcept>
#include <string>

namespace crackbench {

// File-system / parse failures (missing file, bad header, unwritable path).
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments or data that violates a documented contract.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace crackbench
