#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>

#include "rmm/errors.hpp"
#include "rmm/numerics.hpp"
#include "rmm/pi_digits.hpp"
#include "rmm/scr.hpp"
#include "test_support.hpp"

using namespace rmm;
using namespace rmm::scr;
using rmm::testing::rel_diff;

TEST_CASE("bundled pi digits") {
  const auto d = pi_decimal_digits();
  CHECK(d.size() == 10000);
  CHECK(d.substr(0, 20) == "14159265358979323846");
  // six nines starting at decimal place 762
  CHECK(d.substr(761, 6) == "999999");
  CHECK(d.substr(9990) == "5256375678");
  for (char c : d) CHECK((c >= '0' && c <= '9'));
}

TEST_CASE("sign_pattern thresholds pi digits at 4") {
  CHECK(sign_pattern(1) == std::vector<int>{1});
  CHECK(sign_pattern(10) == std::vector<int>{1, 1, 1, -1, -1, 1, -1, -1, 1, -1});
  CHECK(sign_pattern(10000).size() == 10000);
  CHECK_THROWS_WITH_AS(sign_pattern(0), doctest::Contains("insufficient/invalid size"), ConfigError);
  CHECK_THROWS_WITH_AS(sign_pattern(10001), doctest::Contains("insufficient digits"), ConfigError);
}

TEST_CASE("build_reservoir") {
  const auto a = build_reservoir(3, 0.5, 1.0);
  CHECK(a.input_vector() == std::vector<double>{1, 1, 1});
  CHECK(apply_cycle(a, std::vector<double>{1, 2, 3}) == std::vector<double>{1.5, 0.5, 1.0});

  const auto b = build_reservoir(4, 0.9, 0.05);
  CHECK(b.input_vector() == std::vector<double>{0.05, 0.05, 0.05, -0.05});

  CHECK_THROWS_AS(build_reservoir(2, 1.2, 1.0), ConfigError);
  CHECK_THROWS_AS(build_reservoir(2, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_reservoir(2, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(build_reservoir(2, 0.5, 0.0), ConfigError);
  CHECK_THROWS_AS(build_reservoir(0, 0.5, 1.0), ConfigError);
}

TEST_CASE("reservoir spec serializes as a human-readable record") {
  const auto s = build_reservoir(7, 0.99, 0.1);
  const nlohmann::json j = s;
  CHECK(j.dump() == R"({"N":7,"r_in":0.1,"rho":0.99})");
  CHECK(j.get<ReservoirSpec>() == s);
}

TEST_CASE("reservoir_states") {
  const auto s = build_reservoir(3, 0.5, 1.0);
  const std::vector<double> x0(3, 0.0);
  const auto zero = reservoir_states(s, std::vector<double>(5, 0.0), x0);
  for (double v : zero.data()) CHECK(v == 0.0);

  const auto one = reservoir_states(s, std::vector<double>{1.0}, x0);
  CHECK(one.row(0)[0] == 1.0);

  const auto two = reservoir_states(s, std::vector<double>{1.0, 1.0}, x0);
  for (double v : two.row(1)) CHECK(v == 1.5);

  const auto from_x0 = reservoir_states(s, std::vector<double>{0.0}, std::vector<double>{2, 4, 6});
  CHECK(std::vector<double>(from_x0.row(0).begin(), from_x0.row(0).end()) == std::vector<double>{3, 1, 2});

  CHECK_THROWS_AS(reservoir_states(s, std::vector<double>{1.0}, std::vector<double>(2)), DimensionError);
}

TEST_CASE("operator_a") {
  const auto s = build_reservoir(3, 0.5, 1.0);
  const auto a1 = operator_a(s, 1);
  CHECK(a1.a.col(0) == s.input_vector());

  const auto a2 = operator_a(s, 2);
  CHECK(a2.a.col(0) == std::vector<double>{0.5, 0.5, 0.5});
  CHECK(a2.a.col(1) == std::vector<double>{1, 1, 1});

  CHECK_THROWS_AS(operator_a(s, 0), ConfigError);

  // columns equal iterated W applications bit for bit; A e_τ = w
  const auto r = build_reservoir(11, 0.93, 0.1);
  const auto op = operator_a(r, 40);
  std::vector<double> iter = r.input_vector();
  for (std::size_t k = 0; k < 40; ++k) {
    CHECK(op.a.col(39 - k) == iter);
    iter = apply_cycle(r, iter);
  }
  std::vector<double> e(40, 0.0);
  e.back() = 1.0;
  CHECK(matvec(op.a, e) == r.input_vector());
  CHECK(numerics::thin_svd(op.a).rank <= 11);
}

TEST_CASE("metric_tensor") {
  const auto t1 = metric_tensor(operator_a(build_reservoir(5, 0.7, 0.25), 1));
  CHECK(t1.q(0, 0) == 5 * 0.25 * 0.25);

  const std::size_t tau = 12;
  const auto tiny = metric_tensor(operator_a(build_reservoir(6, 1e-12, 0.5), tau));
  CHECK(tiny.q(tau - 1, tau - 1) == 6 * 0.25);
  for (std::size_t i = 0; i < tau; ++i)
    for (std::size_t j = 0; j < tau; ++j)
      if (i != tau - 1 || j != tau - 1) CHECK(std::abs(tiny.q(i, j)) < 1e-10);

  for (double r_in : {0.01, 0.05, 0.1, 1.0}) {
    const auto spec = build_reservoir(150, 0.99, r_in);
    const auto q = metric_tensor(operator_a(spec, 20)).q;
    CHECK(rel_diff(q(19, 19), 150 * r_in * r_in) <= 1e-13);
  }
  const auto exact = metric_tensor(operator_a(build_reservoir(150, 0.99, 1.0), 4)).q;
  CHECK(exact(3, 3) == 150.0);
}

TEST_CASE("metric tensor is symmetric PSD and equals AᵀA") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + trial % 16;
    const std::size_t tau = 5 + 6 * trial;
    const auto op = operator_a(build_reservoir(n, 0.5 + 0.049 * trial, 0.3), tau);
    const auto q = metric_tensor(op).q;
    const Matrix naive = testing::naive_mul(testing::naive_transpose(op.a), op.a);
    for (std::size_t i = 0; i < tau; ++i)
      for (std::size_t j = 0; j < tau; ++j) {
        CHECK(q(i, j) == q(j, i));
        CHECK(std::abs(q(i, j) - naive(i, j)) <= 1e-10 * std::max(1.0, std::abs(naive(i, j))));
      }
    const auto e = numerics::sym_eig(q);
    for (double v : e.values) CHECK(v >= -1e-10 * e.values[0]);
  }
}

TEST_CASE("state simulation, operator A and metric tensor agree") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> nd(1, 16);
  std::uniform_int_distribution<std::size_t> td(1, 64);
  std::uniform_real_distribution<double> rd(0.05, 0.99);
  for (int trial = 0; trial < 40; ++trial) {
    const auto spec = build_reservoir(nd(rng), rd(rng), 0.05 + rd(rng));
    const std::size_t tau = td(rng);
    const auto op = operator_a(spec, tau);
    const auto q = metric_tensor(op).q;
    for (int k = 0; k < 5; ++k) {
      const auto u = testing::random_vector(rng, tau);
      const auto v = testing::random_vector(rng, tau);
      const auto xu = final_state(spec, u);
      const auto au = matvec(op.a, u);
      for (std::size_t i = 0; i < xu.size(); ++i)
        CHECK(std::abs(xu[i] - au[i]) <= 1e-10 * std::max(1.0, norm2(au)));
      const double sim = reservoir_kernel(spec, u, v);
      const double quad = dot(u, matvec(q, v));
      CHECK(std::abs(sim - quad) <= 1e-8 * std::max(std::abs(sim), norm2(xu) * norm2(final_state(spec, v))));
      // ellipsoid identity on the unit sphere
      const auto unit = testing::random_unit_vector(rng, tau);
      const auto a_unit = matvec(op.a, unit);
      CHECK(rel_diff(dot(a_unit, a_unit), dot(unit, matvec(q, unit))) <= 1e-10);
    }
  }
}

TEST_CASE("cycle returns to itself after N steps scaled by rho^N") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {1u, 2u, 5u, 16u, 150u}) {
    const auto spec = build_reservoir(n, 0.9, 1.0);
    auto x = testing::random_vector(rng, n);
    const auto start = x;
    for (std::size_t k = 0; k < n; ++k) x = apply_cycle(spec, x);
    const double scale = std::pow(0.9, static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(scale * start[i]).epsilon(1e-13));
    CHECK(rel_diff(norm2(x), scale * norm2(start)) <= 1e-13);
  }
}

TEST_CASE("kernel objects are safe to build concurrently") {
  const auto spec = build_reservoir(40, 0.99, 0.1);
  const auto reference = metric_tensor(operator_a(spec, 90)).q;
  std::vector<Matrix> results(4);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < results.size(); ++i)
    threads.emplace_back([&, i] { results[i] = metric_tensor(operator_a(spec, 90)).q; });
  for (auto& t : threads) t.join();
  for (const auto& r : results) CHECK(r == reference);
}
