#ifndef DTFLOP_ERRORS_HPP
#define DTFLOP_ERRORS_HPP

#include <stdexcept>

namespace dtflop
{

// Incompatible supports, truncations or models.
struct ConfigurationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input outside the domain of a formal operation (log of a series with
// constant term != 1, phase of zero, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Enumeration request above the configured ceiling.
struct LimitError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

} // namespace dtflop

#endif
