#ifndef VSEARCH_POSTERIOR_HPP
#define VSEARCH_POSTERIOR_HPP

#include <utility>
#include <vector>

#include "vsearch/errors.hpp"
#include "vsearch/grid.hpp"
#include "vsearch/priors.hpp"
#include "vsearch/types.hpp"

namespace vsearch {

/// Target-location posterior kept as unnormalized log weights:
/// log prior(i) + sum over fixations t of d'^2(i, k_t) * W(i, k_t).
template <typename Scalar = double>
class PosteriorState {
public:
  using Matrix = GridMatrix<Scalar>;

  explicit PosteriorState(const PriorGrid<Scalar>& prior) : log_weights_(prior.p().array().log()) {}

  const Matrix& log_weights() const noexcept { return log_weights_; }
  const std::vector<Cell>& history() const noexcept { return history_; }
  int rows() const noexcept { return int(log_weights_.rows()); }
  int cols() const noexcept { return int(log_weights_.cols()); }

  /// Accumulates the evidence of one fixation at k: log_weights += d'^2 * W.
  void update(Cell k, const Matrix& responses, const Matrix& visibility) {
    if (responses.rows() != rows() || responses.cols() != cols() || visibility.rows() != rows() ||
        visibility.cols() != cols())
      throw DomainError("PosteriorState::update: response or visibility field does not conform to the grid");
    if (k.col < 0 || k.row < 0 || k.col >= cols() || k.row >= rows())
      throw DomainError("PosteriorState::update: fixation outside the grid");
    log_weights_.array() += visibility.array().square() * responses.array();
    history_.push_back(k);
  }

  /// Max-shifted softmax of the log weights.
  Matrix probabilities() const {
    Matrix p = (log_weights_.array() - log_weights_.maxCoeff()).exp();
    p /= p.sum();
    return p;
  }

private:
  Matrix log_weights_;
  std::vector<Cell> history_;
};

template <typename Scalar>
PosteriorState<Scalar> init(const PriorGrid<Scalar>& prior) {
  return PosteriorState<Scalar>(prior);
}

template <typename Scalar>
PosteriorState<Scalar> update(PosteriorState<Scalar> state, Cell k, const GridMatrix<Scalar>& responses,
                              const GridMatrix<Scalar>& visibility) {
  state.update(k, responses, visibility);
  return state;
}

template <typename Scalar>
GridMatrix<Scalar> probabilities(const PosteriorState<Scalar>& state) {
  return state.probabilities();
}

} // namespace vsearch

#endif // VSEARCH_POSTERIOR_HPP
