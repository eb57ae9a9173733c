#include "rmm/scr.hpp"

#include <cmath>
#include <string>

#include "rmm/errors.hpp"
#include "rmm/pi_digits.hpp"

namespace rmm::scr {

std::vector<double> ReservoirSpec::input_vector() const {
  std::vector<double> w(size);
  for (std::size_t i = 0; i < size; ++i) w[i] = input_weight * sign_pattern[i];
  return w;
}

std::vector<int> sign_pattern(std::size_t n) {
  if (n == 0) throw ConfigError("sign_pattern: insufficient/invalid size 0");
  const auto digits = pi_decimal_digits();
  if (n > digits.size()) {
    throw ConfigError("sign_pattern: insufficient digits (" + std::to_string(digits.size()) +
                      " bundled, " + std::to_string(n) + " requested)");
  }
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (digits[i] - '0') <= 4 ? 1 : -1;
  return s;
}

ReservoirSpec build_reservoir(std::size_t n, double rho, double r_in) {
  if (n == 0) throw ConfigError("build_reservoir: size must be >= 1");
  if (!(rho > 0.0 && rho < 1.0)) {
    throw ConfigError("build_reservoir: cycle weight must lie in (0, 1), got " + std::to_string(rho));
  }
  if (!(r_in > 0.0) || !std::isfinite(r_in)) {
    throw ConfigError("build_reservoir: input weight must be > 0, got " + std::to_string(r_in));
  }
  return ReservoirSpec{n, rho, r_in, sign_pattern(n)};
}

std::vector<double> apply_cycle(const ReservoirSpec& spec, std::span<const double> x) {
  const std::size_t n = spec.size;
  if (x.size() != n) throw DimensionError("apply_cycle: state length mismatch");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[(i + 1) % n] = spec.cycle_weight * x[i];
  return y;
}

Matrix reservoir_states(const ReservoirSpec& spec, std::span<const double> inputs,
                        std::span<const double> x0) {
  if (x0.size() != spec.size) throw DimensionError("reservoir_states: x0 length mismatch");
  const auto w = spec.input_vector();
  Matrix states(inputs.size(), spec.size);
  std::vector<double> x(x0.begin(), x0.end());
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    x = apply_cycle(spec, x);
    for (std::size_t i = 0; i < spec.size; ++i) x[i] += inputs[t] * w[i];
    std::copy(x.begin(), x.end(), states.row(t).begin());
  }
  return states;
}

std::vector<double> final_state(const ReservoirSpec& spec, std::span<const double> block) {
  std::vector<double> zero(spec.size, 0.0);
  if (block.empty()) return zero;
  Matrix states = reservoir_states(spec, block, zero);
  auto last = states.row(states.rows() - 1);
  return {last.begin(), last.end()};
}

OperatorA operator_a(const ReservoirSpec& spec, std::size_t lookback) {
  if (lookback == 0) throw ConfigError("operator_a: lookback must be >= 1");
  OperatorA op{Matrix(spec.size, lookback), lookback};
  std::vector<double> column = spec.input_vector();
  for (std::size_t j = lookback; j-- > 0;) {
    op.a.set_col(j, column);
    if (j > 0) column = apply_cycle(spec, column);
  }
  return op;
}

MetricTensor metric_tensor(const OperatorA& op) { return MetricTensor{gram(op.a)}; }

double reservoir_kernel(const ReservoirSpec& spec, std::span<const double> u,
                        std::span<const double> v) {
  if (u.size() != v.size()) throw DimensionError("reservoir_kernel: block lengths differ");
  return dot(final_state(spec, u), final_state(spec, v));
}

void to_json(nlohmann::json& j, const ReservoirSpec& spec) {
  j = nlohmann::json{{"N", spec.size}, {"rho", spec.cycle_weight}, {"r_in", spec.input_weight}};
}

void from_json(const nlohmann::json& j, ReservoirSpec& spec) {
  spec = build_reservoir(j.at("N").get<std::size_t>(), j.at("rho").get<double>(),
                         j.at("r_in").get<double>());
}

}  // namespace rmm::scr
