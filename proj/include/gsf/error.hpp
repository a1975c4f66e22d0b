#pragma once

#include <stdexcept>
#include <string>

namespace gsf {

// Argument outside the mathematical domain (non-positive Gamma argument, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A distributional derivative that is not a measure (derivative of an atom,
// derivative of a jump of order higher than one).
class NotAMeasureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested derivative order exceeds what a representation supports.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An integral that is numerically infinite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::string component, const std::string& what)
      : std::runtime_error(component + ": " + what), component_(std::move(component)) {}
  const std::string& component() const noexcept { return component_; }

 private:
  std::string component_;
};

// Adaptive quadrature hit its panel cap without meeting the tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A builder rejected its inputs (e.g. an inadmissible Levy-type measure).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed function/measure spec file. `field` is a JSON-pointer-like path.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace gsf
