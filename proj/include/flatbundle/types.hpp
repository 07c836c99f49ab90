#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatbundle {

using CMatrix = Eigen::MatrixXcd;
using Complexd = std::complex<double>;

using Vertex = int;
// A simplex is a strictly increasing list of vertex ids.
using Simplex = std::vector<Vertex>;

// Raised when an operation's stated precondition fails on concrete input
// (verification failure, exit code 2 at the CLI).
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Raised on malformed input (bad JSON, unknown vertex ids, ...), exit code 1.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

inline CMatrix identity(int n) { return CMatrix::Identity(n, n); }

}  // namespace flatbundle
