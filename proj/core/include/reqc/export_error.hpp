#pragma once

#include "reqc/diagnostic.hpp"

namespace reqc {

class ExportError : public Error {
 public:
  using Error::Error;
};

/// The XML target has no notion of an initially scope.
class InitiallyNotSupported : public ExportError {
 public:
  using ExportError::ExportError;
};

}  // namespace reqc
