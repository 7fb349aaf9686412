#pragma once

#include <stdexcept>
#include <string>

namespace nsac {

// Failure classes map onto process exit codes (see tools/):
//   validation -> 2, physics -> 3, io -> 4.
enum class FailureClass { Validation, Physics, Io };

class Error : public std::runtime_error {
public:
    Error(FailureClass cls, std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), cls_(cls), name_(std::move(name)) {}
    FailureClass failure_class() const { return cls_; }
    const std::string& name() const { return name_; }

private:
    FailureClass cls_;
    std::string name_;
};

#define NSAC_DEFINE_ERROR(Name, Cls)                                        \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what)                              \
            : Error(FailureClass::Cls, #Name, what) {}                      \
    }

NSAC_DEFINE_ERROR(InvalidGrid, Validation);
NSAC_DEFINE_ERROR(GridMismatch, Validation);
NSAC_DEFINE_ERROR(InvalidExponents, Validation);
NSAC_DEFINE_ERROR(InvalidRange, Validation);
NSAC_DEFINE_ERROR(InvalidCut, Validation);
NSAC_DEFINE_ERROR(DegenerateSeries, Validation);
NSAC_DEFINE_ERROR(ParseError, Validation);
NSAC_DEFINE_ERROR(ValidationError, Validation);

NSAC_DEFINE_ERROR(NonFiniteData, Physics);
NSAC_DEFINE_ERROR(ZeroModeUndefined, Physics);
NSAC_DEFINE_ERROR(VacuumViolation, Physics);
NSAC_DEFINE_ERROR(CflViolation, Physics);

NSAC_DEFINE_ERROR(Io, Io);
NSAC_DEFINE_ERROR(FormatError, Io);

#undef NSAC_DEFINE_ERROR

} // namespace nsac
