#pragma once

#include <stdexcept>
#include <string>

namespace shadowheight {

/// An input value is outside the range an operation is defined for.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Inputs are individually valid but describe a geometry with no solution
/// (negative discriminant, shadow behind the structure, sun below horizon).
class GeometryError : public std::runtime_error {
  public:
    explicit GeometryError(const std::string& what, double discriminant = 0.0)
        : std::runtime_error(what), discriminant_(discriminant) {}

    /// Value of the failing discriminant, when one is involved.
    double discriminant() const noexcept { return discriminant_; }

  private:
    double discriminant_;
};

/// A scene file does not parse or does not conform to the schema.
class SchemaError : public std::runtime_error {
  public:
    explicit SchemaError(const std::string& what, std::string field_path = {})
        : std::runtime_error(field_path.empty() ? what : field_path + ": " + what),
          field_path_(std::move(field_path)) {}

    const std::string& field_path() const noexcept { return field_path_; }

  private:
    std::string field_path_;
};

}  // namespace shadowheight
