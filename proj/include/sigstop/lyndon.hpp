#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sigstop/free_tensor.hpp"
#include "sigstop/word.hpp"

namespace sigstop {

// sigma_{m,N}: effective dimension of the truncated signature (unit excluded);
// eta_{m,N}: dimension of the free step-N nilpotent Lie algebra (Moebius count).
std::pair<std::int64_t, std::int64_t> dims(int m, int N);

// Lyndon basis of the free Lie algebra up to level N: Lyndon words in graded
// lexicographic order with their standard bracketings expanded into tensor
// (word) coordinates.  The expansion of a Lyndon word w is unit-triangular:
// coefficient 1 on w itself, support only on lexicographically larger words
// of the same length, which makes the change of basis a forward substitution.
class LyndonBasis {
 public:
  LyndonBasis(int width, int level);

  int width() const { return width_; }
  int level() const { return level_; }
  std::size_t size() const { return words_.size(); }  // == eta_{m,N}

  const std::vector<Word>& words() const { return words_; }
  // expansion of basis element i as (dense word index, integer coeff) pairs
  const std::vector<std::pair<std::size_t, std::int64_t>>& expansion(std::size_t i) const {
    return expansions_[i];
  }

  // Lyndon coordinates of a Lie element given in word coordinates (the output
  // of tensor_log).  Exact for genuine Lie elements; use reconstruct() to
  // check the residual.
  std::vector<double> project(const FreeTensor& log_tensor) const;
  FreeTensor reconstruct(const std::vector<double>& coords) const;

 private:
  int width_;
  int level_;
  std::vector<Word> words_;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> expansions_;
};

// Shared cache: basis construction is done once per (m, N).
const LyndonBasis& lyndon_basis(int width, int level);

// Lyndon coordinates of log-signatures along a stream of prefix signatures.
// Row j holds the eta coordinates at grid point j; row 0 is zero.
// Throws if reconstructing any row misses the log tensor by more than
// `residual_tol` (internal consistency guard).
std::vector<std::vector<double>> log_signature_coords(
    const std::vector<FreeTensor>& prefix_sigs, const LyndonBasis& basis,
    double residual_tol = 1e-8);

}  // namespace sigstop
