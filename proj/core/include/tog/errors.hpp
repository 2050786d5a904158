#pragma once

#include <stdexcept>
#include <string>

namespace tog {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatch : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct InvalidInput : Error {
  using Error::Error;
};

struct EmptyCloud : Error {
  using Error::Error;
};
struct NonOrthonormalRotation : Error {
  using Error::Error;
};

struct KTooLarge : Error {
  using Error::Error;
};

struct EmptyText : Error {
  using Error::Error;
};
struct AllKeysMasked : Error {
  using Error::Error;
};
struct EmptyBatch : Error {
  using Error::Error;
};

struct MissingSlot : Error {
  using Error::Error;
};
struct NotEnoughPrompts : Error {
  using Error::Error;
};
struct InsufficientConcepts : Error {
  using Error::Error;
};
struct IncompleteRecords : Error {
  using Error::Error;
};
struct RetryExhausted : Error {
  using Error::Error;
};
struct ClientFailure : Error {
  using Error::Error;
};

struct NoPositives : Error {
  using Error::Error;
};
struct NoValidGroups : Error {
  using Error::Error;
};
struct EmptyTrainSet : Error {
  using Error::Error;
};
struct CheckpointMismatch : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace tog
