#ifndef YMDDR_SPARSE_HPP
#define YMDDR_SPARSE_HPP

#include <Eigen/Sparse>

namespace ymddr
{

  /// Row-compressed sparse matrix used for every assembled operator
  using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  using Triplet = Eigen::Triplet<double>;

} // namespace ymddr

#endif
