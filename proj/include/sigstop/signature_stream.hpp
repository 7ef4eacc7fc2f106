#pragma once

#include <iosfwd>
#include <vector>

#include "sigstop/free_tensor.hpp"

namespace sigstop {

// Exact truncated signature of one linear segment: the tensor exponential of
// the level-1 increment, i.e. coeff(i1..ik) = prod(inc_i) / k!.
FreeTensor segment_signature(const std::vector<double>& increment, int level);

// Prefix signatures of a time-augmented piecewise-linear path on a grid.
struct SigStream {
  int width = 0;   // 1 + d
  int level = 0;
  std::vector<double> times;       // grid points kept (payoff grid)
  std::vector<FreeTensor> sigs;    // sigs[j] = signature on [0, times[j]], sigs[0] = 1
};

// `times` strictly increasing, `x` row-major (#times x d).  Prefixes are built
// by Chen concatenation, reusing the previous prefix.  `keep_stride` keeps
// every keep_stride-th grid point (the payoff grid within a finer
// simulation grid).
SigStream stream_signatures(const std::vector<double>& times,
                            const std::vector<double>& x, int d, int level,
                            int keep_stride = 1);

// CSV dumps, one row per grid point, for cross-checking against external
// signature implementations: t then coefficients (or Lyndon coordinates).
void write_sigstream_csv(std::ostream& os, const SigStream& s);
void write_logsig_csv(std::ostream& os, const std::vector<double>& times,
                      const std::vector<std::vector<double>>& coords);

}  // namespace sigstop
