#pragma once

#include <stdexcept>
#include <string>

namespace joneslab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SyntaxError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct InvalidN : Error { using Error::Error; };
struct NotDivisible : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };
struct NotApplicable : Error { using Error::Error; };
struct LabelingInconsistent : Error { using Error::Error; };
struct WitnessMissing : Error { using Error::Error; };
struct PartitionError : Error { using Error::Error; };
struct BoundViolation : Error { using Error::Error; };
struct StabilityViolation : Error { using Error::Error; };
struct DuplicateName : Error { using Error::Error; };
struct StoreMismatch : Error { using Error::Error; };

struct FrontierTooWide : Error {
    int width;
    FrontierTooWide(int w, int cap)
        : Error("frontier width " + std::to_string(w) + " exceeds cap " + std::to_string(cap)),
          width(w) {}
};

}  // namespace joneslab
