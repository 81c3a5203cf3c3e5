#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "antimean/inference.hpp"
#include "antimean/manifold.hpp"
#include "antimean/matrix.hpp"

namespace antimean {

using Homogeneous = std::array<double, 4>;

// k landmarks in homogeneous coordinates of RP^3 (3D points carry w = 1).
struct LandmarkConfig {
  std::string config_id;
  std::vector<Homogeneous> landmarks;
};

// Five distinct 0-based landmark positions forming the projective frame.
struct FrameSpec {
  std::array<std::size_t, 5> indices{};

  // From 1-based positions as written on the command line and in run configs.
  static FrameSpec from_one_based(std::span<const std::size_t> positions);
};

// Throws FrameDegenerateError unless the frame indices are distinct, in range
// and every 4 of the 5 frame landmarks are linearly independent
// (|det| > 1e-10 times the product of column norms).
void validate_frame(const LandmarkConfig& config, const FrameSpec& frame);

// Frame standardization: solve sum_i l_i u_i = u_5 for l, set
// B = (l_1 u_1 ... l_4 u_4) and send every non-frame landmark x to [B^{-1} x].
// Components follow the original order of the non-frame landmarks. The result
// is invariant under any invertible 4x4 transform of the whole configuration.
ProjectiveShape projective_coordinates(const LandmarkConfig& config, const FrameSpec& frame);
Sample projective_sample(std::span<const LandmarkConfig> configs, const FrameSpec& frame);

enum class LandmarkFormat { kCsv, kJson };

// csv unless the extension is .json.
LandmarkFormat landmark_format_for(const std::filesystem::path& path);

// CSV: header `config_id,landmark_id,x,y,z[,w]`, one landmark per row, rows
// of a configuration contiguous. JSON: [{"config_id": ..., "landmarks":
// [[x,y,z(,w)], ...]}, ...]. Missing w means 1. Configurations keep file
// order; every configuration must have the same k >= 6 (SchemaError).
// Malformed input throws ParseError with the offending line.
std::vector<LandmarkConfig> parse_landmarks_csv(std::istream& in);
std::vector<LandmarkConfig> parse_landmarks_json(std::istream& in);
std::vector<LandmarkConfig> load_landmarks(const std::filesystem::path& path, LandmarkFormat format);

void write_landmarks_csv(std::ostream& out, std::span<const LandmarkConfig> configs);
void write_landmarks_json(std::ostream& out, std::span<const LandmarkConfig> configs);

// Configuration whose first five landmarks are the standard frame
// e1, e2, e3, e4, e1+e2+e3+e4 followed by the components of `shape`; with
// frame positions 1..5 it registers back to `shape`.
LandmarkConfig standard_frame_config(std::string config_id, const ProjectiveShape& shape);

// Synthetic axial law on (RP^m)^q. For component s with mode c_s and
// orthonormal complement (t_1, ..., t_m) = columns 2..m+1 of the Householder
// reflection sending e_1 to c_s, each draw is
//   [ (1 + sigma z_0) c_s + sigma sum_k spread[k] z_k t_k ],  sigma = kappa^{-1/2},
// with z standard normal. Observation i uses RngStream(seed, i).
struct SynthSpec {
  ProjectiveShape center;
  double concentration = 20.0;
  // One scale in (0, 1] per tangent direction; empty means the default
  // linear ramp from 1 down to 0.3. All ones gives the isotropic law
  // [c + sigma z], z ~ N(0, I), whose antimean is undefined (focal).
  Vector spread;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

Vector default_spread(std::size_t m);
Matrix householder_frame(const ProjectivePoint& mode);
Sample synth_sample(const SynthSpec& spec);
// Exact population antimean of the synthetic law: per component, the tangent
// direction with the smallest spread. FocalPointError when that is not unique.
ProjectiveShape synth_population_antimean(const SynthSpec& spec);

}  // namespace antimean
