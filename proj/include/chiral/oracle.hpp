#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <vector>

#include "chiral/key_index.hpp"
#include "chiral/model.hpp"
#include "chiral/pauli.hpp"

namespace chiral {

inline constexpr int kOracleMaxAtoms = 6;

using SparseMatrixC = Eigen::SparseMatrix<std::complex<double>>;

/// Exact chain state. Atom 1 is the leftmost tensor factor; basis state 0 of
/// each atom is the excited state.
struct DensityMatrix {
  int n_atoms = 0;
  Eigen::MatrixXcd rho;
  int dim() const { return static_cast<int>(rho.rows()); }
};

/// Column-stacked superoperator: vec(A X B) = (B^T kron A) vec(X).
struct Liouvillian {
  SystemParams params;
  SparseMatrixC matrix;
  int dim() const { return static_cast<int>(matrix.rows()); }
};

enum class LiouvillianPiece { drive, local_decay, chiral };

Liouvillian build_liouvillian(const SystemParams& params);
SparseMatrixC build_liouvillian_piece(const SystemParams& params, LiouvillianPiece piece);

/// Single-site operator embedded in the n-atom space.
Eigen::MatrixXcd site_operator(int n_atoms, int atom, const Eigen::Matrix2cd& op);
Eigen::MatrixXcd pauli_string_operator(int n_atoms, const CumulantKey& key);
/// Sum of lowering operators over the chain.
Eigen::MatrixXcd collective_lowering(int n_atoms);

DensityMatrix ground_state(int n_atoms);
DensityMatrix steady_state(const Liouvillian& liouvillian);

/// tr(rho P) for a Pauli string; throws if the imaginary part exceeds 1e-10.
double exact_moment(const DensityMatrix& rho, const CumulantKey& key);
std::vector<double> exact_moments(const DensityMatrix& rho, const std::vector<CumulantKey>& keys);
MomentTable exact_moment_table(const DensityMatrix& rho, int max_order);

/// Trace over atoms n_keep+1..N.
DensityMatrix partial_trace_tail(const DensityMatrix& rho, int n_keep);

/// One-sided cosine transform of <<A(tau) B(0)>>:
/// F(w) = int_0^inf (e^{iwt} + e^{-iwt}) <<A(t) B>> dt, via bordered resolvent solves.
std::vector<std::complex<double>> exact_spectrum(const DensityMatrix& rho, const Liouvillian& liouvillian,
                                                 const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                                 const std::vector<double>& omega);

/// Normally ordered quadrature spectrum of the transmitted field.
std::vector<double> exact_squeezing_spectrum(const DensityMatrix& rho, const Liouvillian& liouvillian, double theta,
                                             const std::vector<double>& omega);

/// <<A(tau) B(0)>> on a time grid by eigen-decomposition (small N only).
std::vector<std::complex<double>> exact_correlation(const DensityMatrix& rho, const Liouvillian& liouvillian,
                                                    const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                                    const std::vector<double>& tau);

struct ExactPowers {
  double p_in = 0, p_el = 0, p_ie = 0, p_out = 0;
};
ExactPowers exact_powers(const DensityMatrix& rho, const SystemParams& params);
double exact_g2(const DensityMatrix& rho, const SystemParams& params);

/// Singular values of the dense Liouvillian in ascending order (N <= 4).
Eigen::VectorXd liouvillian_singular_values(const Liouvillian& liouvillian);
/// Eigenvalues of the dense Liouvillian (N <= 4).
Eigen::VectorXcd liouvillian_eigenvalues(const Liouvillian& liouvillian);

}  // namespace chiral
