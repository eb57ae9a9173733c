#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "rmm/matrix.hpp"

/// Simple Cycle Reservoir and its temporal-kernel objects.
///
/// The coupling W is never stored: it is a forward cyclic shift
/// (W e_i = ρ e_{i+1 mod N}) scaled by the cycle weight ρ. Input weights are
/// w = r_in · s with s the π-digit sign pattern.
namespace rmm::scr {

struct ReservoirSpec {
  std::size_t size = 0;        // N
  double cycle_weight = 0.0;   // ρ, spectral radius of W
  double input_weight = 0.0;   // r_in
  std::vector<int> sign_pattern;

  std::vector<double> input_vector() const;
  bool operator==(const ReservoirSpec&) const = default;
};

/// A = [W^{τ-1}w, …, Ww, w]; column j (0-based) is W^{τ-1-j}w so the newest
/// sample multiplies the last column.
struct OperatorA {
  Matrix a;  // N×τ
  std::size_t lookback = 0;
};

/// Q = AᵀA, the reservoir kernel on raw τ-blocks: K(u, v) = uᵀQv.
struct MetricTensor {
  Matrix q;  // τ×τ
};

/// Entry i is +1 when the i-th decimal digit of π is 0..4, else −1.
std::vector<int> sign_pattern(std::size_t n);

ReservoirSpec build_reservoir(std::size_t n, double rho, double r_in);

/// y = W x.
std::vector<double> apply_cycle(const ReservoirSpec& spec, std::span<const double> x);

/// Iterates x(t) = W x(t−1) + u(t) w from x0; row t−1 of the result is x(t).
Matrix reservoir_states(const ReservoirSpec& spec, std::span<const double> inputs,
                        std::span<const double> x0);

/// State reached from zero after reading the block: Σ_j u_j W^{τ-j} w.
std::vector<double> final_state(const ReservoirSpec& spec, std::span<const double> block);

/// Built column by column from w with repeated cycle application, O(Nτ).
OperatorA operator_a(const ReservoirSpec& spec, std::size_t lookback);

MetricTensor metric_tensor(const OperatorA& op);

/// ⟨φ(u), φ(v)⟩ through explicit state simulation.
double reservoir_kernel(const ReservoirSpec& spec, std::span<const double> u,
                        std::span<const double> v);

void to_json(nlohmann::json& j, const ReservoirSpec& spec);
void from_json(const nlohmann::json& j, ReservoirSpec& spec);

}  // namespace rmm::scr
