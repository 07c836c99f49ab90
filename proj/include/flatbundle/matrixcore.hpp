#pragma once

#include "flatbundle/types.hpp"

namespace flatbundle {

// Operator norm (largest singular value) of a square complex matrix.
// Dense Hermitian eigensolve of M*M below kPowerIterationCutoff, power
// iteration with a fixed seed above it. Relative accuracy 1e-10.
double op_norm(const CMatrix& m);

inline constexpr int kPowerIterationCutoff = 32;

// Skew-Hermitian part a |-> (a - a*)/2. Contracts distance to 1: for
// unitary x, ||skew_project(x)|| <= ||x - 1||.
CMatrix skew_project(const CMatrix& a);

// (1 + v^2)^(1/2) for skew-Hermitian v with ||v|| < 1/2, by the binomial
// series in v^2 truncated once the term norm drops below tol*(1 - 4*||v||^2).
// Result is Hermitian, commutes with v, squares to 1 + v^2 (within tol).
CMatrix sqrt_one_plus_vsq(const CMatrix& v, double tol = 1e-12);

// Spectral evaluation of the same function; used as an independent check.
CMatrix sqrt_one_plus_vsq_spectral(const CMatrix& v);

// g(v) = v + (1 + v^2)^(1/2): unitary for skew-Hermitian v, ||v|| < 1/2,
// with g(0) = 1. Inverse of skew_project on the relevant neighbourhoods.
CMatrix unitarize_g(const CMatrix& v, double tol = 1e-12);

// Nearest-unitary projection x |-> (x x*)^(-1/2) x via Hermitian
// eigendecomposition of x x*. Requires ||x x* - 1|| < 7/9.
CMatrix polar_project(const CMatrix& x);

// Principal matrix logarithm of a unitary; eigenvalue arguments taken in
// (-pi, pi]. Refuses (PreconditionError) if any eigenvalue argument lies
// within `margin` of the branch cut.
CMatrix unitary_log(const CMatrix& u, double margin = 0.0);

// exp for skew-Hermitian generators (unitary result).
CMatrix skew_exp(const CMatrix& a);

// max |arg lambda| over eigenvalues of a unitary.
double max_eig_arg(const CMatrix& u);

// ||u u* - 1||, a cheap unitarity residual.
double unitarity_defect(const CMatrix& u);

}  // namespace flatbundle
