#pragma once

#include <stdexcept>
#include <string>

namespace whatif {

/// Bad input data: malformed files, precondition violations on user input.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Schema violation while decoding a text document. `path()` is a JSON-style
/// location such as ".objects[2].pose.r".
class SchemaError : public DataError {
 public:
  SchemaError(std::string path, const std::string& what)
      : DataError(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Natural-language action text could not be turned into an Action.
class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// A failure inside the what-if pipeline, tagged with the stage that failed
/// ("parse", "simulate", "describe").
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace whatif
