#pragma once

#include <stdexcept>
#include <string>

namespace qnucleus {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoxMismatch : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct SingularMap : Error { using Error::Error; };
struct InvalidBox : Error { using Error::Error; };
struct InvalidCut : Error { using Error::Error; };
struct OrderError : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };

// Seam/coverage failures carry the offending voxel so they are attributable.
struct WitnessError : Error {
    WitnessError(const std::string& what, long long voxel, int step = -1)
        : Error(what), voxel(voxel), step(step) {}
    long long voxel;
    int step;
};
struct GlueError : WitnessError { using WitnessError::WitnessError; };
struct CoverageError : WitnessError { using WitnessError::WitnessError; };
struct CannotDominate : WitnessError { using WitnessError::WitnessError; };
struct SeamViolation : WitnessError { using WitnessError::WitnessError; };

}  // namespace qnucleus
