#include "flatbundle/matrixcore.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

namespace flatbundle {

namespace {

double largest_hermitian_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double power_iteration_norm(const CMatrix& m) {
  const CMatrix g = m.adjoint() * m;
  const int n = static_cast<int>(g.rows());
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i) x[i] = Complexd(gauss(rng), gauss(rng));
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXcd y = g * x;
    double next = y.norm();
    if (next == 0.0) return 0.0;
    y /= next;
    // Rayleigh quotient converges quadratically for Hermitian g.
    double rq = std::real(Complexd(y.adjoint() * (g * y)));
    if (it > 4 && std::abs(rq - lambda) <= 1e-13 * std::max(1.0, rq)) {
      lambda = rq;
      break;
    }
    lambda = rq;
    x = y;
  }
  return std::sqrt(std::max(0.0, lambda));
}

}  // namespace

double op_norm(const CMatrix& m) {
  if (m.rows() == 0) return 0.0;
  if (m.rows() < kPowerIterationCutoff)
    return std::sqrt(std::max(0.0, largest_hermitian_eigenvalue(m.adjoint() * m)));
  return power_iteration_norm(m);
}

CMatrix skew_project(const CMatrix& a) { return 0.5 * (a - a.adjoint()); }

CMatrix sqrt_one_plus_vsq(const CMatrix& v, double tol) {
  const double nv = op_norm(v);
  if (nv >= 0.5)
    throw PreconditionError("sqrt_one_plus_vsq: ||v|| = " + std::to_string(nv) + " >= 1/2");
  const int n = static_cast<int>(v.rows());
  const CMatrix w = v * v;
  CMatrix sum = identity(n);
  CMatrix term = identity(n);
  double coeff = 1.0;  // binomial(1/2, j), updated iteratively
  const double cutoff = tol * (1.0 - 4.0 * nv * nv);
  for (int j = 1; j < 512; ++j) {
    coeff *= (0.5 - (j - 1)) / j;
    term = term * w;
    CMatrix contrib = coeff * term;
    sum += contrib;
    if (op_norm(contrib) < cutoff) break;
  }
  return sum;
}

CMatrix sqrt_one_plus_vsq_spectral(const CMatrix& v) {
  const double nv = op_norm(v);
  if (nv >= 0.5)
    throw PreconditionError("sqrt_one_plus_vsq_spectral: ||v|| >= 1/2");
  // v = i h with h Hermitian; 1 + v^2 = 1 - h^2.
  const CMatrix h = Complexd(0, -1) * v;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXd d = es.eigenvalues();
  Eigen::VectorXd f(d.size());
  for (int i = 0; i < d.size(); ++i) f[i] = std::sqrt(1.0 - d[i] * d[i]);
  return es.eigenvectors() * f.asDiagonal().toDenseMatrix().cast<Complexd>() *
         es.eigenvectors().adjoint();
}

CMatrix unitarize_g(const CMatrix& v, double tol) {
  return v + sqrt_one_plus_vsq(v, tol);
}

CMatrix polar_project(const CMatrix& x) {
  const int n = static_cast<int>(x.rows());
  const CMatrix xxs = x * x.adjoint();
  const double res = op_norm(xxs - identity(n));
  if (res >= 7.0 / 9.0)
    throw PreconditionError("polar_project: ||x x* - 1|| = " + std::to_string(res) +
                            " >= 7/9");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(xxs);
  Eigen::VectorXd d = es.eigenvalues();
  Eigen::VectorXd f(d.size());
  for (int i = 0; i < d.size(); ++i) f[i] = 1.0 / std::sqrt(d[i]);
  return es.eigenvectors() * f.asDiagonal().toDenseMatrix().cast<Complexd>() *
         es.eigenvectors().adjoint() * x;
}

CMatrix unitary_log(const CMatrix& u, double margin) {
  // u is normal, so its Schur form is diagonal and the Schur basis is a
  // unitary eigenbasis.
  Eigen::ComplexSchur<CMatrix> schur(u);
  if (schur.info() != Eigen::Success)
    throw PreconditionError("unitary_log: Schur decomposition failed");
  const int n = static_cast<int>(u.rows());
  Eigen::VectorXcd logd(n);
  for (int i = 0; i < n; ++i) {
    const double arg = std::arg(schur.matrixT()(i, i));
    if (std::abs(arg) > M_PI - margin)
      throw PreconditionError("unitary_log: eigenvalue argument " + std::to_string(arg) +
                              " within branch margin");
    logd[i] = Complexd(0.0, arg);
  }
  return schur.matrixU() * logd.asDiagonal() * schur.matrixU().adjoint();
}

CMatrix skew_exp(const CMatrix& a) {
  const CMatrix h = Complexd(0, -1) * a;  // Hermitian generator
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXcd f(es.eigenvalues().size());
  for (int i = 0; i < f.size(); ++i)
    f[i] = std::exp(Complexd(0.0, es.eigenvalues()[i]));
  return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
}

double max_eig_arg(const CMatrix& u) {
  Eigen::ComplexSchur<CMatrix> schur(u, false);
  double m = 0.0;
  for (int i = 0; i < u.rows(); ++i)
    m = std::max(m, std::abs(std::arg(schur.matrixT()(i, i))));
  return m;
}

double unitarity_defect(const CMatrix& u) {
  return op_norm(u * u.adjoint() - identity(static_cast<int>(u.rows())));
}

}  // namespace flatbundle
