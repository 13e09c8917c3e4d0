#include "chiral/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace chiral {

namespace {

using cd = std::complex<double>;
using Eigen::MatrixXcd;

const Eigen::Matrix2cd& pauli(Pauli p) {
  static const std::array<Eigen::Matrix2cd, 4> basis = [] {
    std::array<Eigen::Matrix2cd, 4> b;
    b[0] << 1, 0, 0, 1;
    b[1] << 0, 1, 1, 0;
    b[2] << 0, cd(0, -1), cd(0, 1), 0;
    b[3] << 1, 0, 0, -1;
    return b;
  }();
  return basis[static_cast<int>(p)];
}

Eigen::Matrix2cd lowering() {
  Eigen::Matrix2cd m;
  m << 0, 0, 1, 0;
  return m;
}

void check_size(int n_atoms) {
  if (n_atoms < 1 || n_atoms > kOracleMaxAtoms)
    throw std::invalid_argument("oracle supports 1.." + std::to_string(kOracleMaxAtoms) + " atoms");
}

SparseMatrixC sparse(const MatrixXcd& m) { return m.sparseView(0.0, 0.0); }

// Adds -i[H, .] to the superoperator.
void add_hamiltonian(SparseMatrixC& l, const MatrixXcd& h) {
  const int d = static_cast<int>(h.rows());
  SparseMatrixC id(d, d);
  id.setIdentity();
  const SparseMatrixC hs = sparse(h), ht = sparse(h.transpose());
  SparseMatrixC term = SparseMatrixC(Eigen::kroneckerProduct(id, hs)) - SparseMatrixC(Eigen::kroneckerProduct(ht, id));
  l += cd(0, -1) * term;
}

void add_dissipator(SparseMatrixC& l, const MatrixXcd& c, double rate) {
  if (rate == 0.0) return;
  const int d = static_cast<int>(c.rows());
  SparseMatrixC id(d, d);
  id.setIdentity();
  const MatrixXcd cdc = c.adjoint() * c;
  SparseMatrixC term = SparseMatrixC(Eigen::kroneckerProduct(sparse(c.conjugate()), sparse(c))) -
                       0.5 * SparseMatrixC(Eigen::kroneckerProduct(id, sparse(cdc))) -
                       0.5 * SparseMatrixC(Eigen::kroneckerProduct(sparse(cdc.transpose()), id));
  l += rate * term;
}

Eigen::VectorXcd vec(const MatrixXcd& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

MatrixXcd unvec(const Eigen::VectorXcd& v, int d) { return Eigen::Map<const MatrixXcd>(v.data(), d, d); }

int dim_of(int n_atoms) { return 1 << n_atoms; }

}  // namespace

MatrixXcd site_operator(int n_atoms, int atom, const Eigen::Matrix2cd& op) {
  MatrixXcd m = MatrixXcd::Identity(1, 1);
  for (int a = 1; a <= n_atoms; ++a) {
    const MatrixXcd f = a == atom ? MatrixXcd(op) : MatrixXcd::Identity(2, 2);
    m = Eigen::kroneckerProduct(m, f).eval();
  }
  return m;
}

MatrixXcd pauli_string_operator(int n_atoms, const CumulantKey& key) {
  MatrixXcd m = MatrixXcd::Identity(1, 1);
  for (int a = 1; a <= n_atoms; ++a) {
    const int p = key.find_atom(a);
    const MatrixXcd f = p < 0 ? MatrixXcd::Identity(2, 2) : MatrixXcd(pauli(to_pauli(key.axis(p))));
    m = Eigen::kroneckerProduct(m, f).eval();
  }
  return m;
}

MatrixXcd collective_lowering(int n_atoms) {
  MatrixXcd s = MatrixXcd::Zero(dim_of(n_atoms), dim_of(n_atoms));
  for (int j = 1; j <= n_atoms; ++j) s += site_operator(n_atoms, j, lowering());
  return s;
}

SparseMatrixC build_liouvillian_piece(const SystemParams& params, LiouvillianPiece piece) {
  const int n = params.n_atoms;
  check_size(n);
  const int d = dim_of(n);
  SparseMatrixC l(d * d, d * d);
  const double beta = params.beta;
  switch (piece) {
    case LiouvillianPiece::drive: {
      MatrixXcd h = MatrixXcd::Zero(d, d);
      for (int j = 1; j <= n; ++j) h += std::sqrt(params.drive_ratio) * site_operator(n, j, pauli(Pauli::x));
      add_hamiltonian(l, h);
      break;
    }
    case LiouvillianPiece::local_decay:
      for (int j = 1; j <= n; ++j) add_dissipator(l, site_operator(n, j, lowering()), 1.0 - beta);
      break;
    case LiouvillianPiece::chiral: {
      std::vector<MatrixXcd> sm(n + 1);
      for (int j = 1; j <= n; ++j) sm[j] = site_operator(n, j, lowering());
      MatrixXcd h = MatrixXcd::Zero(d, d);
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k < j; ++k) h += sm[k].adjoint() * sm[j] - sm[j].adjoint() * sm[k];
      h *= cd(0, beta / 2.0);
      add_hamiltonian(l, h);
      add_dissipator(l, collective_lowering(n), beta);
      break;
    }
  }
  l.makeCompressed();
  return l;
}

Liouvillian build_liouvillian(const SystemParams& params) {
  Liouvillian out;
  out.params = validate(params);
  out.matrix = build_liouvillian_piece(out.params, LiouvillianPiece::drive) +
               build_liouvillian_piece(out.params, LiouvillianPiece::local_decay) +
               build_liouvillian_piece(out.params, LiouvillianPiece::chiral);
  out.matrix.makeCompressed();
  return out;
}

DensityMatrix ground_state(int n_atoms) {
  DensityMatrix g;
  g.n_atoms = n_atoms;
  const int d = dim_of(n_atoms);
  g.rho = MatrixXcd::Zero(d, d);
  g.rho(d - 1, d - 1) = 1.0;
  return g;
}

DensityMatrix steady_state(const Liouvillian& liouvillian) {
  const int n = liouvillian.params.n_atoms;
  const int d = dim_of(n);
  const int dd = d * d;
  // Replace row 0 by the trace functional.
  std::vector<Eigen::Triplet<cd>> trips;
  for (int k = 0; k < liouvillian.matrix.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(liouvillian.matrix, k); it; ++it)
      if (it.row() != 0) trips.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < d; ++i) trips.emplace_back(0, i * d + i, 1.0);
  SparseMatrixC a(dd, dd);
  a.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<SparseMatrixC> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw std::runtime_error("oracle steady state: singular trace-replaced Liouvillian");
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dd);
  rhs(0) = 1.0;
  Eigen::VectorXcd x = lu.solve(rhs);
  DensityMatrix out;
  out.n_atoms = n;
  out.rho = unvec(x, d);
  out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
  const double residual = (liouvillian.matrix * vec(out.rho)).norm();
  if (residual > 1e-10) throw std::runtime_error("oracle steady state residual " + std::to_string(residual));
  return out;
}

double exact_moment(const DensityMatrix& rho, const CumulantKey& key) {
  const cd v = (rho.rho * pauli_string_operator(rho.n_atoms, key)).trace();
  if (std::abs(v.imag()) > 1e-10) throw std::runtime_error("complex moment for " + key.to_string());
  return v.real();
}

std::vector<double> exact_moments(const DensityMatrix& rho, const std::vector<CumulantKey>& keys) {
  std::vector<double> out;
  out.reserve(keys.size());
  for (const auto& k : keys) {
    if (k.max_atom() > rho.n_atoms) throw std::out_of_range("key " + k.to_string() + " beyond oracle chain");
    out.push_back(exact_moment(rho, k));
  }
  return out;
}

MomentTable exact_moment_table(const DensityMatrix& rho, int max_order) {
  MomentTable t(rho.n_atoms, std::min(max_order, rho.n_atoms));
  for (int k = 1; k <= t.max_order(); ++k)
    for (std::size_t i = 0; i < t.block(k).size(); ++i)
      t.block(k)[i] = exact_moment(rho, t.layout().key_at(k, i));
  return t;
}

DensityMatrix partial_trace_tail(const DensityMatrix& rho, int n_keep) {
  if (n_keep < 1 || n_keep > rho.n_atoms) throw std::out_of_range("partial trace size");
  const int dk = dim_of(n_keep), dr = dim_of(rho.n_atoms - n_keep);
  DensityMatrix out;
  out.n_atoms = n_keep;
  out.rho = MatrixXcd::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j)
      for (int k = 0; k < dr; ++k) out.rho(i, j) += rho.rho(i * dr + k, j * dr + k);
  return out;
}

std::vector<cd> exact_spectrum(const DensityMatrix& rho, const Liouvillian& liouvillian, const MatrixXcd& a,
                               const MatrixXcd& b, const std::vector<double>& omega) {
  const int d = rho.dim();
  const int dd = d * d;
  const cd mean_b = (b * rho.rho).trace();
  const MatrixXcd bt = b * rho.rho - mean_b * rho.rho;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dd + 1);
  rhs.head(dd) = vec(bt);
  const Eigen::VectorXcd rho_vec = vec(rho.rho);
  // tr(A X) = sum_ij A_ji X_ij = vec(A^T) . vec(X)
  const Eigen::VectorXcd a_row = vec(a.transpose());

  std::vector<Eigen::Triplet<cd>> base;
  for (int k = 0; k < liouvillian.matrix.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(liouvillian.matrix, k); it; ++it)
      base.emplace_back(it.row(), it.col(), -it.value());
  for (int i = 0; i < dd; ++i)
    if (rho_vec(i) != cd(0)) base.emplace_back(i, dd, rho_vec(i));
  for (int i = 0; i < d; ++i) base.emplace_back(dd, i * d + i, 1.0);

  Eigen::SparseLU<SparseMatrixC> lu;
  bool analyzed = false;
  std::vector<cd> out;
  out.reserve(omega.size());
  for (double w : omega) {
    cd total = 0;
    for (double sign : {-1.0, 1.0}) {
      auto trips = base;
      for (int i = 0; i < dd; ++i) trips.emplace_back(i, i, cd(0, sign * w));
      SparseMatrixC m(dd + 1, dd + 1);
      m.setFromTriplets(trips.begin(), trips.end());
      if (!analyzed) {
        lu.analyzePattern(m);
        analyzed = true;
      }
      lu.factorize(m);
      if (lu.info() != Eigen::Success) throw std::runtime_error("oracle resolvent factorization failed");
      const Eigen::VectorXcd x = lu.solve(rhs);
      total += a_row.cwiseProduct(x.head(dd)).sum();
    }
    out.push_back(total);
  }
  return out;
}

std::vector<double> exact_squeezing_spectrum(const DensityMatrix& rho, const Liouvillian& liouvillian, double theta,
                                             const std::vector<double>& omega) {
  const MatrixXcd s = collective_lowering(rho.n_atoms);
  const MatrixXcd sd = s.adjoint();
  const auto f_pm = exact_spectrum(rho, liouvillian, sd, s, omega);
  const auto f_mm = exact_spectrum(rho, liouvillian, s, s, omega);
  const cd phase = std::exp(cd(0, 2.0 * theta));
  std::vector<double> out(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i)
    out[i] = 0.5 * liouvillian.params.beta * (f_pm[i] - phase * f_mm[i]).real();
  return out;
}

std::vector<cd> exact_correlation(const DensityMatrix& rho, const Liouvillian& liouvillian, const MatrixXcd& a,
                                  const MatrixXcd& b, const std::vector<double>& tau) {
  const int d = rho.dim();
  const MatrixXcd l = MatrixXcd(liouvillian.matrix);
  Eigen::ComplexEigenSolver<MatrixXcd> es(l);
  const MatrixXcd& v = es.eigenvectors();
  const Eigen::PartialPivLU<MatrixXcd> vlu(v);
  const cd mean_b = (b * rho.rho).trace();
  const Eigen::VectorXcd c0 = vlu.solve(vec(b * rho.rho - mean_b * rho.rho));
  const Eigen::VectorXcd a_row = vec(a.transpose());
  const Eigen::RowVectorXcd proj = a_row.transpose() * v;
  std::vector<cd> out;
  for (double t : tau) {
    cd acc = 0;
    for (int k = 0; k < d * d; ++k) acc += proj(k) * std::exp(es.eigenvalues()(k) * t) * c0(k);
    out.push_back(acc);
  }
  return out;
}

ExactPowers exact_powers(const DensityMatrix& rho, const SystemParams& params) {
  const MatrixXcd s = collective_lowering(rho.n_atoms);
  const double a = std::sqrt(input_power(params));
  const double c = std::sqrt(params.beta * params.gamma);
  const cd mean_s = (rho.rho * s).trace();
  const cd mean_sds = (rho.rho * s.adjoint() * s).trace();
  ExactPowers p;
  p.p_in = a * a;
  p.p_el = std::norm(a - cd(0, c) * mean_s);
  p.p_ie = c * c * (mean_sds.real() - std::norm(mean_s));
  p.p_out = p.p_el + p.p_ie;
  return p;
}

double exact_g2(const DensityMatrix& rho, const SystemParams& params) {
  const int d = rho.dim();
  const MatrixXcd s = collective_lowering(rho.n_atoms);
  const double a = std::sqrt(input_power(params));
  const double c = std::sqrt(params.beta * params.gamma);
  const MatrixXcd out = a * MatrixXcd::Identity(d, d) - cd(0, c) * s;
  const MatrixXcd od = out.adjoint();
  const double n1 = (rho.rho * od * out).trace().real();
  if (n1 <= 0.0) throw std::runtime_error("exact_g2: vanishing output power");
  const double n2 = (rho.rho * od * od * out * out).trace().real();
  return n2 / (n1 * n1);
}

Eigen::VectorXd liouvillian_singular_values(const Liouvillian& liouvillian) {
  if (liouvillian.params.n_atoms > 4) throw std::invalid_argument("dense Liouvillian analysis limited to 4 atoms");
  Eigen::BDCSVD<MatrixXcd> svd(MatrixXcd(liouvillian.matrix));
  Eigen::VectorXd s = svd.singularValues();
  std::sort(s.data(), s.data() + s.size());
  return s;
}

Eigen::VectorXcd liouvillian_eigenvalues(const Liouvillian& liouvillian) {
  if (liouvillian.params.n_atoms > 4) throw std::invalid_argument("dense Liouvillian analysis limited to 4 atoms");
  Eigen::ComplexEigenSolver<MatrixXcd> es(MatrixXcd(liouvillian.matrix), false);
  return es.eigenvalues();
}

}  // namespace chiral
