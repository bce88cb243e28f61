#pragma once

#include <stdexcept>
#include <string>

namespace zl {

// All failures surface as typed exceptions; no NaN/Inf escapes a public
// operation.  Catch Error to handle anything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleError : Error { using Error::Error; };            // evaluation at a pole
struct BranchCutError : Error { using Error::Error; };       // argument on a branch cut
struct DomainError : Error { using Error::Error; };          // outside mathematical domain
struct RangeError : Error { using Error::Error; };           // outside supported numeric range
struct ToleranceError : Error { using Error::Error; };       // requested accuracy not certifiable
struct ConvergenceError : Error { using Error::Error; };     // iteration/series failed to converge
struct CapacityError : Error { using Error::Error; };        // resource limit (memory, table size)
struct IllConditionedError : Error { using Error::Error; };  // linear system too ill-conditioned
struct ParseError : Error { using Error::Error; };           // malformed input text
struct ValidationError : Error { using Error::Error; };      // well-formed but invalid data
struct NotFoundError : Error { using Error::Error; };        // lookup miss

}  // namespace zl
