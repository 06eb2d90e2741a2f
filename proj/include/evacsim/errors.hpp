#pragma once

#include <stdexcept>
#include <string>

namespace evacsim {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input data: wrong field count, unparsable number, value out of
/// its documented range. Carries the 1-based line number of the offending row.
struct ParseError : Error {
    ParseError(int line_no, const std::string& message)
        : Error("line " + std::to_string(line_no) + ": " + message), line(line_no) {}
    int line;
};

/// Input refers to an id that does not exist.
struct ReferenceError : Error {
    using Error::Error;
};

/// Duplicate id where uniqueness is required.
struct UniquenessError : Error {
    using Error::Error;
};

/// API contract violation: mismatched dimensions, invalid parameter values.
struct ContractError : Error {
    using Error::Error;
};

/// A blocked station has no finite-cost unblocked station to evacuate to.
struct IsolationError : Error {
    IsolationError(int index, const std::string& message)
        : Error(message), station_index(index) {}
    int station_index;
};

/// Total blocked demand exceeds the reachable spare capacity.
struct InfeasibleError : Error {
    InfeasibleError(double shortfall, const std::string& message)
        : Error(message), shortfall_persons(shortfall) {}
    double shortfall_persons;
};

}  // namespace evacsim
