#pragma once

#include <stdexcept>
#include <string>

namespace switchcost {

enum class ErrorKind {
    InvalidInstance,
    InvalidInput,
    Capacity,
    Domain,
    Validation,
    Precondition,
    Trace,
    Load
};

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string & what) :
        std::runtime_error(what),
        kind_(kind)
    {
    }

    [[nodiscard]] auto kind() const -> ErrorKind { return kind_; }

private:
    ErrorKind kind_;
};

#define SWITCHCOST_ERROR_TYPE(Name, Kind)                                   \
    class Name : public Error                                               \
    {                                                                       \
    public:                                                                 \
        explicit Name(const std::string & what) : Error(ErrorKind::Kind, what) {} \
    }

SWITCHCOST_ERROR_TYPE(InvalidInstanceError, InvalidInstance);
SWITCHCOST_ERROR_TYPE(InvalidInputError, InvalidInput);
SWITCHCOST_ERROR_TYPE(CapacityError, Capacity);
SWITCHCOST_ERROR_TYPE(DomainError, Domain);
SWITCHCOST_ERROR_TYPE(ValidationError, Validation);
SWITCHCOST_ERROR_TYPE(PreconditionError, Precondition);
SWITCHCOST_ERROR_TYPE(TraceError, Trace);

#undef SWITCHCOST_ERROR_TYPE

/// Raised by the table loader; `entry` is the zero-based record index, or -1
/// when the problem is in the header.
class LoadError : public Error
{
public:
    LoadError(const std::string & what, long entry = -1) :
        Error(ErrorKind::Load, what),
        entry_(entry)
    {
    }

    [[nodiscard]] auto entry() const -> long { return entry_; }

private:
    long entry_;
};

} // namespace switchcost
