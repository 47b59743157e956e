#pragma once

#include <stdexcept>
#include <string>

namespace stratforge {

// Base class for all errors raised by the library.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input (dimension mismatches, bad supports, ...).
struct input_error : error {
    explicit input_error(const std::string& what) : error(what) {}
};

// A structural self-check failed.  These are the checks that would falsify
// the build if they ever fired: dimension ledgers, open-dense uniqueness,
// parity of stratum dimensions.
struct integrity_error : error {
    explicit integrity_error(const std::string& what) : error(what) {}
};

}  // namespace stratforge
