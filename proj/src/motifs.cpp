#include "rmm/motifs.hpp"

#include <cmath>
#include <ostream>

#include "rmm/errors.hpp"
#include "rmm/io.hpp"
#include "rmm/numerics.hpp"

namespace rmm::motifs {

namespace {

void check_block(std::span<const double> block, const MotifBasis& basis) {
  if (block.size() != basis.lookback) {
    throw DimensionError("motif projection: block length " + std::to_string(block.size()) +
                         " != lookback " + std::to_string(basis.lookback));
  }
}

}  // namespace

MotifBasis extract_motifs(const scr::ReservoirSpec& spec, std::size_t lookback, double rank_tol) {
  if (!(rank_tol >= 0.0)) throw ConfigError("extract_motifs: rank_tol must be >= 0");
  // A is linear in r_in, so the motifs come from the unit-input operator and
  // only the eigenvalues carry the scale. Motifs are then bitwise r_in-free.
  scr::ReservoirSpec unit = spec;
  unit.input_weight = 1.0;
  const numerics::SvdResult svd = numerics::thin_svd(scr::operator_a(unit, lookback).a);
  const double scale = spec.input_weight * spec.input_weight;

  MotifBasis basis;
  basis.lookback = lookback;
  basis.source = spec;
  basis.rank_tol = rank_tol;
  const double top = svd.sigma.empty() ? 0.0 : svd.sigma[0] * svd.sigma[0];
  std::size_t keep = 0;
  while (keep < svd.sigma.size() && keep < svd.rank &&
         svd.sigma[keep] * svd.sigma[keep] > rank_tol * top)
    ++keep;

  basis.motifs = Matrix(lookback, keep);
  basis.eigenvalues.resize(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    basis.eigenvalues[k] = scale * (svd.sigma[k] * svd.sigma[k]);
    std::vector<double> m = svd.v.col(k);
    for (double x : m) {
      if (std::abs(x) > 1e-12) {
        if (x < 0.0)
          for (double& y : m) y = -y;
        break;
      }
    }
    basis.motifs.set_col(k, m);
  }
  return basis;
}

std::vector<double> project(std::span<const double> block, const MotifBasis& basis) {
  check_block(block, basis);
  return matvec_t(basis.motifs, block);
}

Matrix project_rows(const Matrix& blocks, const MotifBasis& basis) {
  if (blocks.cols() != basis.lookback) throw DimensionError("project_rows: block length mismatch");
  return matmul(blocks, basis.motifs);
}

std::vector<double> reservoir_features(std::span<const double> block, const MotifBasis& basis) {
  auto f = project(block, basis);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= std::sqrt(basis.eigenvalues[i]);
  return f;
}

std::vector<double> scaled_projection(std::span<const double> block, const MotifBasis& basis,
                                      std::span<const double> coefficients) {
  if (coefficients.size() != basis.count())
    throw DimensionError("scaled_projection: coefficient count != motif count");
  if (!all_finite(coefficients)) throw DataError("scaled_projection: non-finite coefficients");
  auto f = project(block, basis);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= coefficients[i];
  return f;
}

void write_motifs_csv(std::ostream& out, const MotifBasis& basis) {
  std::vector<std::string> header;
  header.reserve(basis.count());
  for (std::size_t i = 0; i < basis.count(); ++i) header.push_back("motif_" + std::to_string(i + 1));
  io::write_matrix_csv(out, basis.motifs, header);
}

void write_eigenvalues_csv(std::ostream& out, const MotifBasis& basis) {
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < basis.count(); ++i)
    out << (i + 1) << ',' << io::format_double(basis.eigenvalues[i]) << '\n';
}

}  // namespace rmm::motifs
