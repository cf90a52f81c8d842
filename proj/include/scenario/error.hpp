#pragma once

#include <stdexcept>
#include <string>

namespace scenario {

/// Bad arguments: dimension mismatches, out-of-box decisions, degenerate parameters.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A sample-size plan was requested with a zero tail-probability estimate. No
/// finite N exists in that regime; the scenario values cannot converge.
class InconsistentRegime : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A quantity that needs information the problem does not carry (e.g. J*).
class Unavailable : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace scenario
