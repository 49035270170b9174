#pragma once

#include <stdexcept>
#include <string>

namespace netprop {

// Runtime/data failure: bad file, bad dimensions, solver breakdown.
// The CLI maps these to exit code 1; usage problems never reach here.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(std::string path, std::size_t line, const std::string& msg)
      : Error(path + ":" + std::to_string(line) + ": " + msg),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

private:
  std::string path_;
  std::size_t line_;
};

class SolveError : public Error {
public:
  using Error::Error;
};

}  // namespace netprop
