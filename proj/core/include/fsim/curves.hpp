#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fsim {

// A sample of functional observations on a common grid. `values` is n x T
// (one curve per row). A non-empty `mask` (n x T, true = observed) marks a
// sparse design; analysis code requires dense curves, so sparse sets must be
// run through impute_sparse() first. Masked entries of `values` are
// meaningless and never read by any downstream computation.
struct CurveSet {
  Eigen::VectorXd grid;
  Eigen::MatrixXd values;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;  // empty => dense

  int n() const { return static_cast<int>(values.rows()); }
  int t() const { return static_cast<int>(values.cols()); }
  bool sparse() const { return mask.size() > 0; }
  int observed_count(int i) const;

  // Throws std::invalid_argument on shape mismatch or a non-increasing grid.
  void validate() const;
};

// Dense reconstruction of a sparse set: linear interpolation between observed
// neighbours, constant extension beyond the first/last observed point.
// Dense input is returned unchanged. Each curve needs >= 2 observed points.
CurveSet impute_sparse(const CurveSet& curves);

// Row subset (indices must be valid and non-empty; duplicates allowed).
CurveSet subset(const CurveSet& curves, const std::vector<int>& rows);

}  // namespace fsim
