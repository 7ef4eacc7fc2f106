#include "sigstop/free_tensor.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sigstop/shuffle.hpp"

namespace sigstop {

std::size_t FreeTensor::dense_size(int width, int level) {
  return Word::level_offset(width, level + 1);
}

FreeTensor::FreeTensor(int width, int level) : width_(width), level_(level) {
  if (width < 1 || level < 0) throw std::invalid_argument("FreeTensor: bad shape");
  c_.assign(dense_size(width, level), 0.0);
}

FreeTensor FreeTensor::one(int width, int level) {
  FreeTensor t(width, level);
  t.c_[0] = 1.0;
  return t;
}

FreeTensor FreeTensor::from_level1(int width, int level, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != width)
    throw std::invalid_argument("from_level1: increment size != width");
  FreeTensor t(width, level);
  if (level >= 1)
    for (int i = 0; i < width; ++i) t.c_[1 + i] = v[i];
  return t;
}

double FreeTensor::coeff(const Word& w) const {
  if (w.size() > level_) throw std::domain_error("FreeTensor::coeff: word too long");
  return c_[w.dense_index(width_)];
}

void FreeTensor::set_coeff(const Word& w, double v) {
  if (w.size() > level_) throw std::domain_error("FreeTensor::set_coeff: word too long");
  c_[w.dense_index(width_)] = v;
}

std::size_t FreeTensor::level_size(int n) const {
  std::size_t p = 1;
  for (int k = 0; k < n; ++k) p *= width_;
  return p;
}

FreeTensor FreeTensor::truncated(int new_level) const {
  if (new_level > level_) throw std::domain_error("FreeTensor::truncated: can only lower");
  FreeTensor t(width_, new_level);
  for (std::size_t i = 0; i < t.c_.size(); ++i) t.c_[i] = c_[i];
  return t;
}

static void check_same_shape(const FreeTensor& a, const FreeTensor& b, const char* op) {
  if (a.width() != b.width() || a.level() != b.level())
    throw std::invalid_argument(std::string(op) + ": width/level mismatch");
}

FreeTensor& FreeTensor::operator+=(const FreeTensor& o) {
  check_same_shape(*this, o, "tensor add");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

FreeTensor& FreeTensor::operator-=(const FreeTensor& o) {
  check_same_shape(*this, o, "tensor sub");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

FreeTensor& FreeTensor::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

double FreeTensor::max_abs() const {
  double m = 0.0;
  for (double x : c_) m = std::max(m, std::fabs(x));
  return m;
}

FreeTensor tensor_mul(const FreeTensor& a, const FreeTensor& b) {
  check_same_shape(a, b, "tensor_mul");
  const int m = a.width(), N = a.level();
  FreeTensor r(m, N);
  for (int n = 0; n <= N; ++n) {
    double* out = r.data().data() + r.level_offset(n);
    for (int i = 0; i <= n; ++i) {
      const int j = n - i;
      const double* ai = a.data().data() + a.level_offset(i);
      const double* bj = b.data().data() + b.level_offset(j);
      const std::size_t ni = a.level_size(i), nj = a.level_size(j);
      // word(u)*m^j + word(v) indexes the concatenation uv inside level n
      for (std::size_t u = 0; u < ni; ++u) {
        const double au = ai[u];
        if (au == 0.0) continue;
        double* dst = out + u * nj;
        for (std::size_t v = 0; v < nj; ++v) dst[v] += au * bj[v];
      }
    }
  }
  return r;
}

FreeTensor tensor_exp(const FreeTensor& a) {
  if (a[0] != 0.0) throw std::domain_error("tensor_exp: nonzero scalar part");
  const int N = a.level();
  // Horner form: r = 1 + a/N (x) (1 + a/(N-1) (x) ( ... ))
  FreeTensor r = FreeTensor::one(a.width(), N);
  for (int k = N; k >= 1; --k) {
    FreeTensor t = a;
    t *= 1.0 / k;
    r = tensor_mul(t, r);
    r[0] += 1.0;
  }
  return r;
}

FreeTensor tensor_log(const FreeTensor& g) {
  if (g[0] != 1.0) throw std::domain_error("tensor_log: scalar part must be 1");
  const int N = g.level();
  FreeTensor x = g;
  x[0] = 0.0;
  FreeTensor sum = x;
  FreeTensor p = x;
  double sign = -1.0;
  for (int k = 2; k <= N; ++k) {
    p = tensor_mul(p, x);
    FreeTensor t = p;
    t *= sign / k;
    sum += t;
    sign = -sign;
  }
  return sum;
}

FreeTensor tensor_inverse(const FreeTensor& g) {
  if (g[0] != 1.0) throw std::domain_error("tensor_inverse: scalar part must be 1");
  const int N = g.level();
  FreeTensor u = FreeTensor::one(g.width(), N) - g;  // zero scalar part
  FreeTensor r = FreeTensor::one(g.width(), N);
  for (int k = N; k >= 1; --k) {
    r = tensor_mul(u, r);
    r[0] += 1.0;
  }
  return r;
}

bool is_grouplike(const FreeTensor& a, double tol) {
  const int m = a.width(), N = a.level();
  if (std::fabs(a[0] - 1.0) > tol) return false;
  for (int du = 1; du < N; ++du) {
    for (int dv = 1; du + dv <= N; ++dv) {
      const std::size_t nu = a.level_size(du), nv = a.level_size(dv);
      for (std::size_t iu = 0; iu < nu; ++iu) {
        Word u = Word::from_dense_index(m, a.level_offset(du) + iu);
        for (std::size_t iv = 0; iv < nv; ++iv) {
          Word v = Word::from_dense_index(m, a.level_offset(dv) + iv);
          double lhs = 0.0;
          for (const auto& [w, c] : shuffle_words(u, v))
            lhs += static_cast<double>(c) * a.coeff(w);
          double rhs = a.coeff(u) * a.coeff(v);
          if (std::fabs(lhs - rhs) > tol * (1.0 + std::fabs(rhs))) return false;
        }
      }
    }
  }
  return true;
}

void write_tensor(std::ostream& os, const FreeTensor& t) {
  std::int32_t m = t.width(), N = t.level();
  os.write(reinterpret_cast<const char*>(&m), sizeof m);
  os.write(reinterpret_cast<const char*>(&N), sizeof N);
  os.write(reinterpret_cast<const char*>(t.data().data()),
           static_cast<std::streamsize>(t.size() * sizeof(double)));
}

FreeTensor read_tensor(std::istream& is) {
  std::int32_t m = 0, N = 0;
  is.read(reinterpret_cast<char*>(&m), sizeof m);
  is.read(reinterpret_cast<char*>(&N), sizeof N);
  if (!is || m < 1 || N < 0) throw std::runtime_error("read_tensor: bad header");
  FreeTensor t(m, N);
  is.read(reinterpret_cast<char*>(t.data().data()),
          static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (!is) throw std::runtime_error("read_tensor: truncated payload");
  return t;
}

void write_tensor_csv(std::ostream& os, const FreeTensor& t) {
  os << t.width() << "," << t.level();
  os.precision(17);
  for (std::size_t i = 0; i < t.size(); ++i) os << "," << t[i];
  os << "\n";
}

FreeTensor read_tensor_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_tensor_csv: empty input");
  std::istringstream ss(line);
  std::string tok;
  auto next = [&]() {
    if (!std::getline(ss, tok, ',')) throw std::runtime_error("read_tensor_csv: short row");
    return tok;
  };
  int m = std::stoi(next()), N = std::stoi(next());
  FreeTensor t(m, N);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::stod(next());
  return t;
}

}  // namespace sigstop
