#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "chiral/pauli.hpp"

namespace chiral::detail {

// Stage matrices have the form [[A, B], [C, D]] with D the block of the
// highest order present. D is block lower triangular when its rows are
// grouped by atom set in table order, so D^{-1} is a forward substitution
// with small dense diagonal blocks and only the Schur complement on the lower
// orders needs a dense factorization.
template <class Scalar>
class StageFactorization {
 public:
  using Sparse = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  // Returns false when the matrix lacks the expected structure or a pivot
  // block is singular.
  template <class Matrix>
  bool factor(const std::vector<CumulantKey>& variables, const Matrix& matrix) {
    const int dim = static_cast<int>(variables.size());
    const int top = variables.back().order();
    split_ = 0;
    starts_.clear();
    while (split_ < dim && variables[split_].order() < top) ++split_;
    const int big = dim - split_;

    std::vector<int> block_of(big);
    for (int r = 0; r < big; ++r) {
      const CumulantKey& k = variables[split_ + r];
      bool same = !starts_.empty();
      if (same) {
        const CumulantKey& prev = variables[split_ + starts_.back()];
        for (int i = 0; i < k.order() && same; ++i) same = prev.atom(i) == k.atom(i);
      }
      if (!same) starts_.push_back(r);
      block_of[r] = static_cast<int>(starts_.size()) - 1;
    }
    starts_.push_back(big);

    const Sparse m(matrix);
    std::vector<Eigen::Triplet<Scalar>> ta, tb, tc, td;
    for (int r = 0; r < dim; ++r)
      for (typename Sparse::InnerIterator it(m, r); it; ++it) {
        const int c = static_cast<int>(it.col());
        if (r < split_ && c < split_) ta.emplace_back(r, c, it.value());
        else if (r < split_) tb.emplace_back(r, c - split_, it.value());
        else if (c < split_) tc.emplace_back(r - split_, c, it.value());
        else {
          if (block_of[c - split_] > block_of[r - split_]) return false;
          td.emplace_back(r - split_, c - split_, it.value());
        }
      }
    b_.resize(split_, big);
    b_.setFromTriplets(tb.begin(), tb.end());
    d_.resize(big, big);
    d_.setFromTriplets(td.begin(), td.end());

    diag_.clear();
    for (std::size_t blk = 0; blk + 1 < starts_.size(); ++blk) {
      const int s0 = starts_[blk], len = starts_[blk + 1] - s0;
      Dense dense = Dense::Zero(len, len);
      for (int r = s0; r < s0 + len; ++r)
        for (typename Sparse::InnerIterator it(d_, r); it; ++it)
          if (it.col() >= s0) dense(r - s0, it.col() - s0) = it.value();
      diag_.emplace_back(dense);
      if (!(diag_.back().matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0)) return false;
    }

    if (split_ > 0) {
      Sparse c(big, split_);
      c.setFromTriplets(tc.begin(), tc.end());
      Dense dc = Dense(c);
      forward(dc);
      Sparse a(split_, split_);
      a.setFromTriplets(ta.begin(), ta.end());
      dinv_c_ = dc;
      const Dense schur = Dense(a) - b_ * dc;
      schur_.compute(schur);
      if (!(schur_.matrixLU().diagonal().cwiseAbs().minCoeff() > 0.0)) return false;
    }
    return true;
  }

  // Solves M X = rhs column by column.
  Dense solve_columns(const Dense& rhs) const {
    const Eigen::Index big = d_.rows();
    Dense w = rhs.bottomRows(big);
    forward(w);
    Dense v(rhs.rows(), rhs.cols());
    if (split_ > 0) {
      const Dense u = schur_.solve(rhs.topRows(split_) - b_ * w);
      v.topRows(split_) = u;
      v.bottomRows(big) = w - dinv_c_ * u;
    } else {
      v = w;
    }
    return v;
  }

  Vector solve(const Vector& rhs) const { return solve_columns(Dense(rhs)).col(0); }

 private:
  void forward(Dense& x) const {
    for (std::size_t blk = 0; blk + 1 < starts_.size(); ++blk) {
      const int s0 = starts_[blk], len = starts_[blk + 1] - s0;
      for (int r = s0; r < s0 + len; ++r)
        for (typename Sparse::InnerIterator it(d_, r); it; ++it) {
          if (it.col() >= s0) break;
          x.row(r) -= it.value() * x.row(it.col());
        }
      x.middleRows(s0, len) = diag_[blk].solve(x.middleRows(s0, len));
    }
  }

  int split_ = 0;
  std::vector<int> starts_;
  Sparse b_, d_;
  std::vector<Eigen::PartialPivLU<Dense>> diag_;
  Dense dinv_c_;
  Eigen::PartialPivLU<Dense> schur_;
};

}  // namespace chiral::detail
