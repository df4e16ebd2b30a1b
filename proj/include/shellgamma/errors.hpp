#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace shellgamma {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (radii, material moduli, rotations, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the admissible part of a chart.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// det(Id + t Pi) <= 0: the offset map is no longer a diffeomorphism.
class ThicknessTooLargeError : public Error {
 public:
  using Error::Error;
};

/// A field produced a non-finite value or a degenerate metric.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class DifferentiationError : public Error {
 public:
  using Error::Error;
};

/// The reduced normal-correction system of Q3 is singular.
class DegenerateMaterialError : public Error {
 public:
  using Error::Error;
};

class NotAnIsometryError : public Error {
 public:
  NotAnIsometryError(const std::string& what, Eigen::Vector2d worst_node,
                     double residual)
      : Error(what), worst_node_(std::move(worst_node)), residual_(residual) {}

  const Eigen::Vector2d& worst_node() const { return worst_node_; }
  double residual() const { return residual_; }

 private:
  Eigen::Vector2d worst_node_;
  double residual_;
};

class EnergyBlowupError : public Error {
 public:
  EnergyBlowupError(const std::string& what, Eigen::Vector2d node, double t)
      : Error(what), node_(std::move(node)), t_(t) {}

  const Eigen::Vector2d& node() const { return node_; }
  double t() const { return t_; }

 private:
  Eigen::Vector2d node_;
  double t_;
};

/// Inputs outside the cases the library can certify.
class UnsupportedCaseError : public Error {
 public:
  using Error::Error;
};

/// Errors tied to a location in a configuration document.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key_path, const std::string& message)
      : Error(key_path + ": " + message), key_path_(key_path) {}

  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ValidationError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace shellgamma
