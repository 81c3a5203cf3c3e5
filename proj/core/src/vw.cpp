#include "antimean/vw.hpp"

#include <cmath>

#include "antimean/errors.hpp"

namespace antimean {

EmbeddedPoint vw_embed(const ProjectivePoint& p) { return EmbeddedPoint{{outer(p.coords(), p.coords())}}; }

EmbeddedPoint vw_embed_shape(const ProjectiveShape& s) {
  EmbeddedPoint e;
  e.blocks.reserve(s.q());
  for (const auto& c : s.components()) e.blocks.push_back(outer(c.coords(), c.coords()));
  return e;
}

double chord_dist_sq(std::span<const Matrix> a, std::span<const Matrix> b) {
  if (a.size() != b.size()) throw InvalidInput("chord distance: block counts differ");
  double d = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s].rows() != b[s].rows() || a[s].cols() != b[s].cols())
      throw InvalidInput("chord distance: block shapes differ");
    const auto x = a[s].data();
    const auto y = b[s].data();
    for (std::size_t k = 0; k < x.size(); ++k) d += (x[k] - y[k]) * (x[k] - y[k]);
  }
  return d;
}

double chord_dist_sq(const EmbeddedPoint& a, const EmbeddedPoint& b) { return chord_dist_sq(a.blocks, b.blocks); }

// For unit x, y: ||xx^T - yy^T||_F^2 = 2 - 2 (x.y)^2.
double frechet_value(const ProjectivePoint& p, std::span<const ProjectivePoint> sample) {
  if (sample.empty()) throw InvalidInput("Frechet function of an empty sample");
  double total = 0.0;
  for (const auto& x : sample) {
    if (x.ambient() != p.ambient()) throw ShapeMismatch("Frechet function: dimension mismatch");
    const double c = dot(p.coords(), x.coords());
    total += 2.0 - 2.0 * c * c;
  }
  return total / static_cast<double>(sample.size());
}

double frechet_value(const ProjectiveShape& p, std::span<const ProjectiveShape> sample) {
  if (sample.empty()) throw InvalidInput("Frechet function of an empty sample");
  double total = 0.0;
  for (const auto& x : sample) {
    if (x.q() != p.q()) throw ShapeMismatch("Frechet function: q mismatch");
    for (std::size_t s = 0; s < p.q(); ++s) {
      const double c = dot(p[s].coords(), x[s].coords());
      total += 2.0 - 2.0 * c * c;
    }
  }
  return total / static_cast<double>(sample.size());
}

double focal_threshold(const Matrix& block, double gap_tol) { return gap_tol * std::abs(block.trace()); }

void require_nonfocal(const EigenDecomp& eig, const Matrix& block, std::size_t block_index, double gap_tol) {
  const double threshold = focal_threshold(block, gap_tol);
  const double gap = eig.values.size() > 1 ? eig.values[1] - eig.values[0] : INFINITY;
  if (!(gap > threshold)) throw FocalPointError(block_index, gap, threshold);
}

ProjectivePoint farthest_project(const Matrix& block, double gap_tol) {
  const EigenDecomp eig = eigh_sym(block);
  require_nonfocal(eig, block, 0, gap_tol);
  return canonicalize(eig.vector(0));
}

ProjectiveShape farthest_project(std::span<const Matrix> blocks, double gap_tol) {
  if (blocks.empty()) throw InvalidInput("farthest projection of an empty block list");
  std::vector<ProjectivePoint> out;
  out.reserve(blocks.size());
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    const EigenDecomp eig = eigh_sym(blocks[s]);
    require_nonfocal(eig, blocks[s], s, gap_tol);
    out.push_back(canonicalize(eig.vector(0)));
  }
  return ProjectiveShape(std::move(out));
}

}  // namespace antimean
