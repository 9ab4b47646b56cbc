#pragma once

#include <stdexcept>
#include <string>

namespace momrep {

/// Base class for all library errors; carries a human-readable message of the
/// form "context: what went wrong".
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A precondition or input-consistency violation (bad parameters, malformed
/// blocks, mismatched grids, ...).
struct ValidationError : Error { using Error::Error; };

/// Config text could not be parsed at all (carries line/column in the message).
struct ParseError : Error { using Error::Error; };

/// A sampled field does not decay at the grid boundary, so an infinite-domain
/// quadrature over it is untrustworthy.
struct TailNotDecayed : Error { using Error::Error; };

/// Grid spacing is too coarse to represent the requested oscillations.
struct AliasingRisk : Error { using Error::Error; };

/// A wavefunction or coefficient set fails its normalization requirement.
struct NotNormalized : Error { using Error::Error; };

/// The integrand blew up on a contour node (a pole sits on or next to the path).
struct PoleOnPath : Error { using Error::Error; };

/// Two poles coincide within tolerance; simple-pole residue logic would break.
struct DegeneratePoles : Error { using Error::Error; };

/// An evaluation point z landed on (or within 1e-14 of) a pole.
struct PoleHit : Error { using Error::Error; };

/// tau <= 0 was supplied on a path that requires the continuous (non-condensed)
/// statistics regime.
struct CondensateRegime : Error { using Error::Error; };

/// The operation is defined for the other particle statistics.
struct WrongStatistics : Error { using Error::Error; };

/// Reduced order s outside the supported range.
struct UnsupportedOrder : Error { using Error::Error; };

/// z is within 1e-10 of an operator eigenvalue; the linear solve is unreliable.
struct NearSingular : Error { using Error::Error; };

/// An iterative refinement (cutoff doubling, ...) failed to stabilize.
struct NotConverged : Error { using Error::Error; };

/// Halving the grid step changed a residual so much that the reported value is
/// resolution-dominated.
struct GridTooCoarse : Error { using Error::Error; };

/// The integration domain does not cover the range of the pair potential.
struct RangeNotCovered : Error { using Error::Error; };

/// A uniform-system operation received a spec that carries a lattice.
struct SpecHasLattice : Error { using Error::Error; };

} // namespace momrep
