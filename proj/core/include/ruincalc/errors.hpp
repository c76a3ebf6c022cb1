// Error hierarchy. Everything thrown by the library derives from ruincalc::Error,
// split into input/validation failures and numerical failures so callers (the CLI
// in particular) can map them to distinct exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace ruincalc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad inputs: malformed spec files, invalid parameters, distributions that
// fail their structural preconditions.
class ValidationError : public Error {
public:
    using Error::Error;
};

// The computation itself failed or refused to certify its result.
class NumericalError : public Error {
public:
    using Error::Error;
};

#define RUINCALC_DEFINE_ERROR(name, base)                                     \
    class name : public base {                                                 \
    public:                                                                    \
        using base::base;                                                      \
    }

RUINCALC_DEFINE_ERROR(SpecParseError, ValidationError);      // unreadable or malformed spec file
RUINCALC_DEFINE_ERROR(InvalidArgument, ValidationError);     // parameter outside its documented range
RUINCALC_DEFINE_ERROR(NegativeProbability, ValidationError); // some p_k < 0
RUINCALC_DEFINE_ERROR(MassNotOne, ValidationError);          // sum p_k != 1 beyond tolerance
RUINCALC_DEFINE_ERROR(ZeroFloorMass, ValidationError);       // no mass on the maximal loss
RUINCALC_DEFINE_ERROR(TailNotAchievable, ValidationError);   // series truncation cannot reach tail_tol
RUINCALC_DEFINE_ERROR(DegreeTooSmall, ValidationError);      // requested polynomial degree drops support
RUINCALC_DEFINE_ERROR(ZeroArgument, ValidationError);        // p(z) evaluated at z = 0

RUINCALC_DEFINE_ERROR(NoInteriorRoot, NumericalError);    // no root of p(z)=1 in (0,1); game not favorable
RUINCALC_DEFINE_ERROR(RootCountMismatch, NumericalError); // found != nu roots inside the unit disk
RUINCALC_DEFINE_ERROR(ResidualTooLarge, NumericalError);  // a root failed |p(root)-1| <= residual_tol
RUINCALC_DEFINE_ERROR(RootsNotDistinct, NumericalError);  // Lagrange form asked for on a clustered set
RUINCALC_DEFINE_ERROR(ImaginaryResidue, NumericalError);  // result kept a non-negligible imaginary part
RUINCALC_DEFINE_ERROR(NumericOverflow, NumericalError);   // intermediate magnitude exceeded safe range
RUINCALC_DEFINE_ERROR(SingularSystem, NumericalError);    // linear system factorization broke down

#undef RUINCALC_DEFINE_ERROR

} // namespace ruincalc
