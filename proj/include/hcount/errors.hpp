#pragma once

#include <stdexcept>
#include <string>

namespace hcount {

// Argument outside the domain where a formula or recurrence is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Least-squares system without a unique solution (zero variance, singular
// normal matrix).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hcount
