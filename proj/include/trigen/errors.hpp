#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace trigen {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
public:
  using Error::Error;
};

class MeshError : public Error {
public:
  using Error::Error;
};

class CdtError : public Error {
public:
  using Error::Error;
};

// Raised when the input polygon fails validation; carries the defect list.
class InvalidPolygonError : public Error {
public:
  InvalidPolygonError(const std::string& what, std::vector<std::string> defect_list)
      : Error(what), defects(std::move(defect_list)) {}
  std::vector<std::string> defects;
};

// Conjugate gradient failed to reach the requested tolerance.
class SolverError : public Error {
public:
  SolverError(const std::string& what, double achieved_residual, std::size_t iterations_done)
      : Error(what), residual(achieved_residual), iterations(iterations_done) {}
  double residual;
  std::size_t iterations;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace trigen
