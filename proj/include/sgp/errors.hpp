#pragma once

#include <stdexcept>
#include <string>

namespace sgp {

enum class Stage { Unknown, Input, Structure, Template, Plu, Qz, Filter };

const char* stage_name(Stage stage);

// Base class of every error raised by the library. The exit code is the one
// the command-line front end reports for this kind of failure.
class Error : public std::runtime_error {
public:
  Error(const std::string& what, Stage stage, int exit_code)
      : std::runtime_error(what), stage_(stage), exit_code_(exit_code) {}

  Stage stage() const noexcept { return stage_; }
  void set_stage(Stage stage) noexcept { stage_ = stage; }
  int exit_code() const noexcept { return exit_code_; }

private:
  Stage stage_;
  int exit_code_;
};

class InputError : public Error {
public:
  explicit InputError(const std::string& what, Stage stage = Stage::Input)
      : Error(what, stage, 2) {}
};

// Complex Cayley parameters with 1 + p.p = 0, or a rotation outside the chart.
class SingularParametrizationError : public Error {
public:
  explicit SingularParametrizationError(const std::string& what)
      : Error(what, Stage::Unknown, 3) {}
};

class DegenerateInstanceError : public Error {
public:
  DegenerateInstanceError(const std::string& what, Stage stage)
      : Error(what, stage, 3) {}
};

class SolverFailureError : public Error {
public:
  SolverFailureError(const std::string& what, Stage stage)
      : Error(what, stage, 3) {}
};

// Raised when the template skeleton or the compiled tables are inconsistent.
class StructureError : public Error {
public:
  explicit StructureError(const std::string& what, Stage stage = Stage::Structure)
      : Error(what, stage, 4) {}
};

}  // namespace sgp
