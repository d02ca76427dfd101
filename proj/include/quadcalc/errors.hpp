#pragma once

#include <stdexcept>
#include <string>

namespace quadcalc {

enum class ErrorCode {
    // quadgraph
    NonBipartite,
    OrientationInconsistent,
    StrongRegularityViolated,
    DisconnectedColorClass,
    BoundaryVertexFace,
    NotParallelogramGraph,
    Unreachable,
    // forms
    EdgeNotInGraph,
    MissingValues,
    NotTypeDiamond,
    TypeMismatch,
    KindMismatch,
    // operators
    BoundaryVertex,
    NotHolomorphic,
    NotSimplyConnected,
    NotHarmonic,
    NotContour,
    NotCompactlySupported,
    // elliptic
    EmptyInterior,
    SolverDivergence,
    BoundaryVertexRequested,
    NotDiskLike,
    InconsistentTarget,
    // kernels
    PoleHit,
    BranchConflict,
    NotSkewLattice,
    ContourTooTight,
    BasePointNotEnclosed,
    ContourTouchesBase,
    // lattices
    DegenerateSpec,
    RegularityLost,
    // io / cli
    ParseError,
    UsageError,
};

const char* error_code_name(ErrorCode c);

/// Domain error carrying a stable code so callers (and tests) can dispatch
/// without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace quadcalc
