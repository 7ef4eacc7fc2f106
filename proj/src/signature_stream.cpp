#include "sigstop/signature_stream.hpp"

#include <ostream>
#include <stdexcept>

namespace sigstop {

FreeTensor segment_signature(const std::vector<double>& increment, int level) {
  const int m = static_cast<int>(increment.size());
  FreeTensor t(m, level);
  t[0] = 1.0;
  // level k block = (increment^{tensor k}) / k!, filled by extending level k-1
  std::size_t prev_off = 0, prev_n = 1;
  for (int k = 1; k <= level; ++k) {
    const std::size_t off = t.level_offset(k);
    const double inv_k = 1.0 / k;
    for (std::size_t u = 0; u < prev_n; ++u) {
      const double base = t[prev_off + u] * inv_k;
      for (int i = 0; i < m; ++i) t[off + u * m + i] = base * increment[i];
    }
    prev_off = off;
    prev_n *= m;
  }
  return t;
}

// In-place Chen concatenation: s <- s (x) seg, exploiting seg[0] == 1.
static void chen_extend(FreeTensor& s, const FreeTensor& seg) {
  const int m = s.width(), N = s.level();
  for (int n = N; n >= 1; --n) {
    double* out = s.data().data() + s.level_offset(n);
    const std::size_t nn = s.level_size(n);
    // i = 0 term is out itself (seg scalar = 1); add cross terms i >= 1
    for (int i = 1; i <= n; ++i) {
      const int j = n - i;
      const double* segi = seg.data().data() + seg.level_offset(i);
      const double* sj = s.data().data() + s.level_offset(j);
      const std::size_t ni = s.level_size(i), nj = s.level_size(j);
      for (std::size_t u = 0; u < nj; ++u) {
        const double su = sj[u];
        if (su == 0.0) continue;
        double* dst = out + u * ni;
        for (std::size_t v = 0; v < ni; ++v) dst[v] += su * segi[v];
      }
    }
    (void)nn;
  }
}

SigStream stream_signatures(const std::vector<double>& times,
                            const std::vector<double>& x, int d, int level,
                            int keep_stride) {
  const std::size_t n = times.size();
  if (n < 2) throw std::domain_error("stream_signatures: need at least 2 grid points");
  if (x.size() != n * static_cast<std::size_t>(d))
    throw std::invalid_argument("stream_signatures: path shape mismatch");
  if (keep_stride < 1 || (n - 1) % keep_stride != 0)
    throw std::invalid_argument("stream_signatures: bad keep_stride");

  const int m = 1 + d;
  SigStream out;
  out.width = m;
  out.level = level;
  out.times.reserve((n - 1) / keep_stride + 1);
  out.sigs.reserve((n - 1) / keep_stride + 1);

  FreeTensor cur = FreeTensor::one(m, level);
  out.times.push_back(times[0]);
  out.sigs.push_back(cur);

  std::vector<double> inc(m);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double dt = times[j + 1] - times[j];
    if (dt <= 0.0) throw std::domain_error("stream_signatures: time not strictly increasing");
    inc[0] = dt;
    for (int k = 0; k < d; ++k) inc[1 + k] = x[(j + 1) * d + k] - x[j * d + k];
    chen_extend(cur, segment_signature(inc, level));
    if ((j + 1) % keep_stride == 0) {
      out.times.push_back(times[j + 1]);
      out.sigs.push_back(cur);
    }
  }
  return out;
}

void write_sigstream_csv(std::ostream& os, const SigStream& s) {
  os << "t";
  for (std::size_t i = 0; i < s.sigs.front().size(); ++i)
    os << "," << Word::from_dense_index(s.width, i).str();
  os << "\n";
  os.precision(17);
  for (std::size_t j = 0; j < s.sigs.size(); ++j) {
    os << s.times[j];
    for (std::size_t i = 0; i < s.sigs[j].size(); ++i) os << "," << s.sigs[j][i];
    os << "\n";
  }
}

void write_logsig_csv(std::ostream& os, const std::vector<double>& times,
                      const std::vector<std::vector<double>>& coords) {
  os << "t";
  for (std::size_t i = 0; i < coords.front().size(); ++i) os << ",c" << i;
  os << "\n";
  os.precision(17);
  for (std::size_t j = 0; j < coords.size(); ++j) {
    os << times[j];
    for (double c : coords[j]) os << "," << c;
    os << "\n";
  }
}

}  // namespace sigstop
