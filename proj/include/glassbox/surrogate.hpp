#pragma once

#include <string>

#include "glassbox/frame.hpp"
#include "glassbox/model_io.hpp"
#include "glassbox/tree.hpp"

namespace glassbox {

// A shallow regression tree distilled from a reference model's predictions.
// Fidelity is measured against the reference on held-out rows: the frame is
// split by row parity, even rows train the surrogate, odd rows score it.
struct SurrogateFit {
  TreeModel surrogate;
  double fidelity_r2 = 0.0;
  double fidelity_rmse = 0.0;
  std::string reference_kind;
  std::size_t n_train = 0;
  std::size_t n_eval = 0;
};

SurrogateFit fit_surrogate_tree(const AnyModel& reference, const Frame& rows, int depth);

}  // namespace glassbox
