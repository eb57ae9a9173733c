#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rmm/errors.hpp"
#include "rmm/motifs.hpp"
#include "rmm/numerics.hpp"
#include "test_support.hpp"

using namespace rmm;
using namespace rmm::motifs;
using rmm::testing::rel_diff;

namespace {

void check_basis_contract(const MotifBasis& b) {
  const std::size_t nm = b.count();
  const auto q = scr::metric_tensor(scr::operator_a(b.source, b.lookback)).q;
  CHECK(nm <= std::min(b.source.size, b.lookback));
  CHECK(max_abs(subtract(matmul_tn(b.motifs, b.motifs), Matrix::identity(nm))) <= 1e-8);
  for (std::size_t i = 0; i < nm; ++i) {
    CHECK(b.eigenvalues[i] > 0.0);
    if (i) CHECK(b.eigenvalues[i - 1] >= b.eigenvalues[i]);
    auto m = b.motif(i);
    auto r = matvec(q, m);
    for (std::size_t k = 0; k < m.size(); ++k) r[k] -= b.eigenvalues[i] * m[k];
    CHECK(norm2(r) <= 1e-8 * b.eigenvalues[0]);
    for (double x : m) {
      if (std::abs(x) > 1e-12) {
        CHECK(x > 0.0);
        break;
      }
    }
  }
}

}  // namespace

TEST_CASE("near-zero memory reservoir has one dominant motif") {
  const auto b = extract_motifs(scr::build_reservoir(8, 1e-12, 0.5), 20);
  REQUIRE(b.count() == 1);
  CHECK(rel_diff(b.eigenvalues[0], 8 * 0.25) <= 1e-12);
  CHECK(std::abs(b.motifs(19, 0) - 1.0) <= 1e-12);
  check_basis_contract(b);
}

TEST_CASE("paper-scale reservoir keeps every direction") {
  const auto b = extract_motifs(scr::build_reservoir(150, 0.99, 1.0), 336);
  CHECK(b.count() == 150);
  check_basis_contract(b);
}

TEST_CASE("basis contract across reservoirs") {
  for (double rho : {0.3, 0.9, 0.99, 0.9999})
    for (std::size_t n : {1u, 4u, 13u, 32u})
      for (std::size_t tau : {3u, 24u, 70u}) check_basis_contract(extract_motifs(scr::build_reservoir(n, rho, 0.05), tau));
}

TEST_CASE("eigenvalues sum to the trace of Q") {
  for (double rho : {0.5, 0.9, 0.99}) {
    const std::size_t n = 12;
    const std::size_t tau = 50;
    const double r_in = 0.1;
    const auto b = extract_motifs(scr::build_reservoir(n, rho, r_in), tau, 0.0);
    double total = 0.0;
    for (double l : b.eigenvalues) total += l;
    double trace = 0.0;
    for (std::size_t k = 0; k < tau; ++k) trace += std::pow(rho, 2.0 * static_cast<double>(k)) * n * r_in * r_in;
    CHECK(rel_diff(total, trace) <= 1e-8);
  }
}

TEST_CASE("motifs from the SVD of A match eigenvectors of Q") {
  // Cycle reservoirs produce near-degenerate eigenvalue pairs; within a
  // cluster only the spanned subspace is determined, so compare projectors.
  for (std::size_t n : {3u, 8u, 17u, 32u}) {
    const std::size_t tau = 2 * n + 7;
    const auto spec = scr::build_reservoir(n, 0.8, 1.0);
    const auto b = extract_motifs(spec, tau);
    const auto e = numerics::sym_eig(scr::metric_tensor(scr::operator_a(spec, tau)).q);
    // the Q-based oracle only resolves eigenvectors well above its own tolerance
    std::size_t nm = 0;
    while (nm < b.count() && b.eigenvalues[nm] >= 1e-6 * b.eigenvalues[0]) ++nm;
    std::size_t i = 0;
    while (i < nm) {
      std::size_t j = i + 1;
      while (j < nm && (b.eigenvalues[j - 1] - b.eigenvalues[j]) <= 1e-4 * b.eigenvalues[0]) ++j;
      if (j == nm && nm < b.count() && b.eigenvalues[nm - 1] - b.eigenvalues[nm] <= 1e-4 * b.eigenvalues[0]) break;
      CHECK(std::abs(b.eigenvalues[i] - e.values[i]) <= 1e-10 * b.eigenvalues[0]);
      if (j == i + 1) {
        auto m = b.motif(i);
        auto v = e.vectors.col(i);
        const double sign = dot(m, v) < 0.0 ? -1.0 : 1.0;
        for (std::size_t k = 0; k < tau; ++k) CHECK(std::abs(m[k] - sign * v[k]) <= 1e-7);
      } else {
        for (std::size_t r = 0; r < tau; ++r)
          for (std::size_t c = 0; c < tau; ++c) {
            double pm = 0.0;
            double pe = 0.0;
            for (std::size_t k = i; k < j; ++k) {
              pm += b.motifs(r, k) * b.motifs(c, k);
              pe += e.vectors(r, k) * e.vectors(c, k);
            }
            CHECK(std::abs(pm - pe) <= 1e-7);
          }
      }
      i = j;
    }
  }
}

TEST_CASE("project") {
  const auto b = extract_motifs(scr::build_reservoir(6, 0.9, 1.0), 15);
  const auto f = project(b.motif(0), b);
  CHECK(std::abs(f[0] - 1.0) <= 1e-12);
  for (std::size_t i = 1; i < f.size(); ++i) CHECK(std::abs(f[i]) <= 1e-12);
  for (double v : project(std::vector<double>(15, 0.0), b)) CHECK(v == 0.0);
  CHECK_THROWS_AS(project(std::vector<double>(14, 0.0), b), DimensionError);

  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const auto u = testing::random_vector(rng, 15);
    CHECK(norm2(project(u, b)) <= norm2(u) * (1 + 1e-14));
  }
  Matrix blocks(2, 15);
  blocks.row(0)[14] = 1.0;
  const auto rows = project_rows(blocks, b);
  CHECK(std::vector<double>(rows.row(0).begin(), rows.row(0).end()) == project(blocks.row(0), b));
}

TEST_CASE("reservoir_features reproduce the kernel") {
  const auto spec = scr::build_reservoir(9, 0.95, 0.05);
  const auto b = extract_motifs(spec, 30);
  const auto f1 = reservoir_features(b.motif(0), b);
  CHECK(rel_diff(f1[0], std::sqrt(b.eigenvalues[0])) <= 1e-12);
  for (std::size_t i = 1; i < f1.size(); ++i) CHECK(std::abs(f1[i]) <= 1e-12 * f1[0]);
  for (double v : reservoir_features(std::vector<double>(30, 0.0), b)) CHECK(v == 0.0);

  std::mt19937_64 rng(12);
  for (int k = 0; k < 50; ++k) {
    const auto u = testing::random_vector(rng, 30);
    const auto v = testing::random_vector(rng, 30);
    const double sim = scr::reservoir_kernel(spec, u, v);
    const double feat = dot(reservoir_features(u, b), reservoir_features(v, b));
    const double scale = norm2(scr::final_state(spec, u)) * norm2(scr::final_state(spec, v));
    CHECK(std::abs(sim - feat) <= 1e-8 * std::max(std::abs(sim), scale));
  }
}

TEST_CASE("scaled_projection special cases") {
  const auto b = extract_motifs(scr::build_reservoir(5, 0.9, 1.0), 12);
  std::mt19937_64 rng(6);
  const auto u = testing::random_vector(rng, 12);
  CHECK(scaled_projection(u, b, std::vector<double>(b.count(), 1.0)) == project(u, b));
  std::vector<double> root(b.count());
  for (std::size_t i = 0; i < root.size(); ++i) root[i] = std::sqrt(b.eigenvalues[i]);
  CHECK(scaled_projection(u, b, root) == reservoir_features(u, b));
  for (double v : scaled_projection(u, b, std::vector<double>(b.count(), 0.0))) CHECK(v == 0.0);
  CHECK_THROWS_AS(scaled_projection(u, b, std::vector<double>(b.count() + 1, 1.0)), DimensionError);
  CHECK_THROWS_AS(scaled_projection(u, b, std::vector<double>(b.count(), NAN)), DataError);
}

TEST_CASE("motif coefficients fold into a linear readout") {
  std::mt19937_64 rng(33);
  const auto b = extract_motifs(scr::build_reservoir(10, 0.97, 0.1), 40);
  const std::size_t nm = b.count();
  const Matrix q = testing::random_matrix(rng, 3, nm);
  const auto bias = testing::random_vector(rng, 3);
  std::vector<double> c = testing::random_vector(rng, nm);
  Matrix folded = q;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t i = 0; i < nm; ++i) folded(r, i) *= c[i];
  for (int k = 0; k < 100; ++k) {
    const auto u = testing::random_vector(rng, 40);
    auto lhs = matvec(folded, project(u, b));
    auto rhs = matvec(q, scaled_projection(u, b, c));
    for (std::size_t r = 0; r < 3; ++r)
      CHECK(std::abs((lhs[r] + bias[r]) - (rhs[r] + bias[r])) <= 1e-10 * std::max(1.0, std::abs(rhs[r])));
  }
}

TEST_CASE("motif CSV export") {
  const auto b = extract_motifs(scr::build_reservoir(4, 0.9, 1.0), 9);
  std::ostringstream csv;
  write_motifs_csv(csv, b);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "motif_1,motif_2,motif_3,motif_4");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == 9);
  std::ostringstream ev;
  write_eigenvalues_csv(ev, b);
  CHECK(ev.str().rfind("index,eigenvalue\n1,", 0) == 0);
}
