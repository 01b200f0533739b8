#pragma once

#include <stdexcept>
#include <string>

namespace algrest {

// Input-side failures: unreadable files, bad expressions, semantic misuse
// (wrong dimensions, non-tangent fields, unknown classes). CLI exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : InputError {
    explicit ParseError(const std::string& msg) : InputError(msg) {}
};

// A computed value disagrees with golden data or an internal certificate
// (e.g. the span-dimension check behind the ideal-based model of the forms
// vanishing on the germ). CLI exit code 3.
struct VerifyError : std::runtime_error {
    explicit VerifyError(const std::string& msg) : std::runtime_error(msg) {}
};

// A bounded search (grading cutoff, degree cap) was exhausted before the
// answer was certain. CLI exit code 4.
struct CapError : std::runtime_error {
    explicit CapError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace algrest
