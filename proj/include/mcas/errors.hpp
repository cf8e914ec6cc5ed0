#pragma once

#include <stdexcept>
#include <string>

namespace mcas {

/// Base class for all errors thrown by the simulator.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// core model
struct PreconditionUnsatisfied : Error { using Error::Error; };

// scenario persistence
struct ParseError : Error { using Error::Error; };        // malformed JSON
struct SchemaError : Error { using Error::Error; };       // missing/extra/ill-typed fields
struct ValidationError : Error { using Error::Error; };   // Error-severity diagnostics
struct InvalidScenario : Error { using Error::Error; };

// metrics / eval
struct UnknownMetric : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// environment stepping
struct OutOfTurn : Error { using Error::Error; };
struct UnknownAction : Error { using Error::Error; };
struct ActionNotAllowedForAgent : Error { using Error::Error; };

}  // namespace mcas
