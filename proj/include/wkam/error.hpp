#pragma once

#include <stdexcept>
#include <string>

namespace wkam {

// Mirrors wkam_status in wkam.h; the C layer maps one onto the other.
enum class ErrorCode {
    invalid_argument = 1,
    dimension_mismatch = 2,
    capacity = 3,
    unsafe_prune = 4,
    not_converged = 5,
    numeric = 6,
    io = 7,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace wkam
