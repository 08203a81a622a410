#pragma once

#include <stdexcept>
#include <string>

namespace setopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A component function produced a non-finite value.
class DomainError : public Error
{
public:
  using Error::Error;
};

class UnknownProblemError : public Error
{
public:
  explicit UnknownProblemError(const std::string& id) : Error("unknown problem id: " + id), id_(id) {}
  const std::string& id() const noexcept { return id_; }

private:
  std::string id_;
};

/// The partition set is a Cartesian product and may explode; enumeration is capped.
class PartitionCapError : public Error
{
public:
  PartitionCapError(std::size_t cardinality, std::size_t cap)
      : Error("partition set cardinality " + std::to_string(cardinality) + " exceeds cap " +
              std::to_string(cap)),
        cardinality_(cardinality)
  {}
  std::size_t cardinality() const noexcept { return cardinality_; }

private:
  std::size_t cardinality_;
};

class InvalidConeError : public Error
{
public:
  using Error::Error;
};

/// Predicted reduction was non-positive where theory requires it to be positive.
class InternalError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

}  // namespace setopt
