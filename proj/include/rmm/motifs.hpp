#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rmm/matrix.hpp"
#include "rmm/scr.hpp"

namespace rmm::motifs {

inline constexpr double kDefaultRankTol = 1e-12;

/// Orthonormal motif basis of a reservoir kernel: eigenvectors of Q with
/// positive eigenvalue, i.e. right singular vectors of A.
struct MotifBasis {
  Matrix motifs;                 // τ×N_m, column i is m_i
  std::vector<double> eigenvalues;  // λ_1 ≥ … ≥ λ_{N_m} > 0
  std::size_t lookback = 0;
  scr::ReservoirSpec source;
  double rank_tol = kDefaultRankTol;

  std::size_t count() const { return eigenvalues.size(); }
  std::vector<double> motif(std::size_t i) const { return motifs.col(i); }
};

/// Keeps directions with σ_i² > rank_tol·σ_1². Each motif's first component
/// with magnitude above 1e-12 is made positive.
MotifBasis extract_motifs(const scr::ReservoirSpec& spec, std::size_t lookback,
                          double rank_tol = kDefaultRankTol);

/// Mᵀu.
std::vector<double> project(std::span<const double> block, const MotifBasis& basis);

/// Row-wise projection of many τ-blocks: blocks (rows × τ) · M.
Matrix project_rows(const Matrix& blocks, const MotifBasis& basis);

/// Λ^{1/2}Mᵀu; its dot products reproduce the reservoir kernel.
std::vector<double> reservoir_features(std::span<const double> block, const MotifBasis& basis);

/// (c_i ⟨m_i, u⟩)_i.
std::vector<double> scaled_projection(std::span<const double> block, const MotifBasis& basis,
                                      std::span<const double> coefficients);

/// One motif per column, header motif_1..motif_Nm, τ rows.
void write_motifs_csv(std::ostream& out, const MotifBasis& basis);
/// index,eigenvalue rows in basis order.
void write_eigenvalues_csv(std::ostream& out, const MotifBasis& basis);

}  // namespace rmm::motifs
