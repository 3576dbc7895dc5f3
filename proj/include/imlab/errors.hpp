#pragma once

#include <stdexcept>
#include <string>

namespace imlab {

// Error classes map one-to-one onto the C API status codes.
enum class Errc {
    invalid_argument = 1,
    domain = 2,
    range = 3,
    numeric = 4,
    resource = 5,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& w) : Error(Errc::invalid_argument, w) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(Errc::domain, w) {}
};

// Out-of-interval inputs; the message carries the admissible interval.
struct RangeError : Error {
    explicit RangeError(const std::string& w) : Error(Errc::range, w) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& w) : Error(Errc::numeric, w) {}
};

struct ResourceError : Error {
    explicit ResourceError(const std::string& w) : Error(Errc::resource, w) {}
};

}  // namespace imlab
