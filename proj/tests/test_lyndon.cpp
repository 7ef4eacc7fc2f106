#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sigstop/lyndon.hpp"
#include "sigstop/signature_stream.hpp"

using namespace sigstop;
using sigstop::testing::linspace;
using sigstop::testing::random_path;

TEST_CASE("dimension counts") {
  CHECK(dims(2, 5) == std::pair<std::int64_t, std::int64_t>{62, 14});
  CHECK(dims(3, 6) == std::pair<std::int64_t, std::int64_t>{1092, 196});
  CHECK(dims(1, 6) == std::pair<std::int64_t, std::int64_t>{6, 1});
  CHECK(dims(4, 4) == std::pair<std::int64_t, std::int64_t>{340, 90});
  CHECK(dims(2, 4) == std::pair<std::int64_t, std::int64_t>{30, 8});
}

TEST_CASE("basis generation: counts, order, triangularity") {
  const LyndonBasis& basis = lyndon_basis(2, 5);
  CHECK(basis.size() == 14);
  // graded-lex ordering and per-length necklace counts 2,1,2,3,6
  int counts[6] = {0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i + 1 < basis.size(); ++i) CHECK(basis.words()[i] < basis.words()[i + 1]);
  for (const Word& w : basis.words()) counts[w.size()]++;
  CHECK(counts[1] == 2);
  CHECK(counts[2] == 1);
  CHECK(counts[3] == 2);
  CHECK(counts[4] == 3);
  CHECK(counts[5] == 6);

  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Word& w = basis.words()[i];
    const std::size_t own = w.dense_index(2);
    bool found_self = false;
    for (const auto& [idx, c] : basis.expansion(i)) {
      if (idx == own) {
        found_self = true;
        CHECK(c == 1);
      } else {
        CHECK(idx > own);  // same length, lexicographically larger
      }
    }
    CHECK(found_self);
  }

  CHECK(lyndon_basis(1, 7).size() == 1);
  CHECK(lyndon_basis(3, 1).size() == 3);
}

TEST_CASE("project/reconstruct round trip on Lie elements") {
  const LyndonBasis& basis = lyndon_basis(2, 4);
  SplitMix64 g(101);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> coords(basis.size());
    for (double& c : coords) c = g.uniform_sym();
    FreeTensor lie = basis.reconstruct(coords);
    std::vector<double> back = basis.project(lie);
    for (std::size_t i = 0; i < coords.size(); ++i)
      CHECK(back[i] == doctest::Approx(coords[i]).epsilon(1e-13));
  }
}

TEST_CASE("log-signature coordinates along a stream") {
  const int J = 80;
  auto times = linspace(0.0, 1.0, J + 1);
  SplitMix64 g(103);
  std::vector<double> x = random_path(J + 1, g, 0.15);
  SigStream s = stream_signatures(times, x, 1, 3, 1);
  const LyndonBasis& basis = lyndon_basis(2, 3);
  auto coords = log_signature_coords(s.sigs, basis);
  REQUIRE(coords.size() == s.sigs.size());

  // prefix 1 -> zero vector
  for (double c : coords[0]) CHECK(c == 0.0);

  // reconstruction: exp of the Lie element recovers each prefix signature
  for (std::size_t j = 0; j < coords.size(); j += 16) {
    FreeTensor rec = tensor_exp(basis.reconstruct(coords[j]));
    for (std::size_t i = 0; i < rec.size(); ++i)
      CHECK(std::fabs(rec[i] - s.sigs[j][i]) <= 1e-10);
  }

  // the Lyndon word 12 coordinate is the Levy area
  std::size_t idx12 = 0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis.words()[i] == Word{1, 2}) idx12 = i;
  const FreeTensor& sig = s.sigs.back();
  double area = 0.5 * (sig.coeff(Word{1, 2}) - sig.coeff(Word{2, 1}));
  CHECK(coords.back()[idx12] == doctest::Approx(area).epsilon(1e-12));
}

TEST_CASE("straight line has no bracket coordinates") {
  std::vector<double> times{0.0, 0.5, 1.0};
  std::vector<double> x{0.0, 0.35, 0.7};
  SigStream s = stream_signatures(times, x, 1, 4, 1);
  const LyndonBasis& basis = lyndon_basis(2, 4);
  auto coords = log_signature_coords(s.sigs, basis);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis.words()[i].size() >= 2)
      for (const auto& row : coords) CHECK(std::fabs(row[i]) < 1e-14);
}

TEST_CASE("non-Lie input trips the residual guard") {
  const LyndonBasis& basis = lyndon_basis(2, 3);
  SplitMix64 g(107);
  FreeTensor fake(2, 3);
  fake[0] = 1.0;
  for (std::size_t i = 1; i < fake.size(); ++i) fake[i] = g.uniform_sym();
  std::vector<FreeTensor> sigs{fake};
  CHECK_THROWS_AS(log_signature_coords(sigs, basis), std::runtime_error);
}
