#ifndef VSEARCH_TYPES_HPP
#define VSEARCH_TYPES_HPP

#include <Eigen/Dense>

namespace vsearch {

/// Per-cell (rows x cols) or per-pixel (height x width) dense map. Row-major,
/// so storage order equals the (row, col) lexicographic cell order.
template <typename Scalar>
using GridMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using GridMatrixd = GridMatrix<double>;
using Vectord = Vector<double>;

} // namespace vsearch

#endif // VSEARCH_TYPES_HPP
