#include "antimean/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "antimean/errors.hpp"
#include "antimean/rng.hpp"

namespace antimean {

FrameSpec FrameSpec::from_one_based(std::span<const std::size_t> positions) {
  if (positions.size() != 5) throw InvalidInput("a projective frame needs exactly 5 landmark positions");
  FrameSpec f;
  for (std::size_t i = 0; i < 5; ++i) {
    if (positions[i] == 0) throw InvalidInput("frame positions are 1-based");
    f.indices[i] = positions[i] - 1;
  }
  return f;
}

namespace {

Vector as_vector(const Homogeneous& h) { return Vector(h.begin(), h.end()); }

double column_norm_product(const Matrix& m) {
  double p = 1.0;
  for (std::size_t j = 0; j < m.cols(); ++j) p *= norm(m.column(j));
  return p;
}

}  // namespace

void validate_frame(const LandmarkConfig& config, const FrameSpec& frame) {
  const std::size_t k = config.landmarks.size();
  for (std::size_t i = 0; i < 5; ++i) {
    if (frame.indices[i] >= k)
      throw FrameDegenerateError("frame position " + std::to_string(frame.indices[i] + 1) + " exceeds k = " +
                                 std::to_string(k));
    for (std::size_t j = 0; j < i; ++j)
      if (frame.indices[i] == frame.indices[j]) throw FrameDegenerateError("frame positions must be distinct");
  }
  for (std::size_t skip = 0; skip < 5; ++skip) {
    Matrix u(4, 4);
    std::size_t col = 0;
    for (std::size_t i = 0; i < 5; ++i) {
      if (i == skip) continue;
      u.set_column(col++, as_vector(config.landmarks[frame.indices[i]]));
    }
    const double scale = column_norm_product(u);
    if (!(scale > 0.0) || std::abs(determinant(u)) <= 1e-10 * scale)
      throw FrameDegenerateError("frame landmarks of configuration '" + config.config_id +
                                 "' are not in general position");
  }
}

ProjectiveShape projective_coordinates(const LandmarkConfig& config, const FrameSpec& frame) {
  validate_frame(config, frame);
  Matrix u(4, 4);
  for (std::size_t i = 0; i < 4; ++i) u.set_column(i, as_vector(config.landmarks[frame.indices[i]]));
  const Vector u5 = as_vector(config.landmarks[frame.indices[4]]);
  const Vector lambda = solve(u, u5);

  // Relative size of each coefficient: lambda_i u_i against u_5.
  const double u5_norm = norm(u5);
  Matrix basis(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    Vector col = u.column(i);
    if (std::abs(lambda[i]) * norm(col) <= 1e-10 * u5_norm)
      throw FrameDegenerateError("frame coefficient " + std::to_string(i + 1) + " vanishes");
    for (double& x : col) x *= lambda[i];
    basis.set_column(i, col);
  }

  std::vector<bool> in_frame(config.landmarks.size(), false);
  for (std::size_t idx : frame.indices) in_frame[idx] = true;

  std::vector<ProjectivePoint> comps;
  for (std::size_t j = 0; j < config.landmarks.size(); ++j) {
    if (in_frame[j]) continue;
    const Vector x = solve(basis, as_vector(config.landmarks[j]));
    if (norm(x) == 0.0)
      throw InvalidInput("landmark " + std::to_string(j + 1) + " of '" + config.config_id + "' maps to zero");
    comps.push_back(canonicalize(x));
  }
  if (comps.empty()) throw InvalidInput("configuration '" + config.config_id + "' has no landmark outside the frame");
  return ProjectiveShape(std::move(comps));
}

Sample projective_sample(std::span<const LandmarkConfig> configs, const FrameSpec& frame) {
  Sample out;
  out.reserve(configs.size());
  for (const auto& c : configs) out.push_back(projective_coordinates(c, frame));
  return out;
}

LandmarkFormat landmark_format_for(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".json" ? LandmarkFormat::kJson : LandmarkFormat::kCsv;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& field, std::size_t line) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || begin == end) throw ParseError(line, "not a number: '" + field + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite coordinate");
  return v;
}

// Groups rows by config id in order of first appearance and enforces the
// configuration invariants.
class ConfigCollector {
 public:
  void add(const std::string& id, const Homogeneous& h, std::size_t line) {
    if (id.empty()) throw ParseError(line, "empty config_id");
    if (h[0] == 0.0 && h[1] == 0.0 && h[2] == 0.0 && h[3] == 0.0) throw ParseError(line, "zero landmark vector");
    auto [it, inserted] = index_.try_emplace(id, configs_.size());
    if (inserted) configs_.push_back(LandmarkConfig{id, {}});
    configs_[it->second].landmarks.push_back(h);
  }

  std::vector<LandmarkConfig> finish() && {
    if (configs_.empty()) return {};
    const std::size_t k = configs_.front().landmarks.size();
    for (const auto& c : configs_) {
      if (c.landmarks.size() != k)
        throw SchemaError("configuration '" + c.config_id + "' has " + std::to_string(c.landmarks.size()) +
                          " landmarks, expected " + std::to_string(k));
    }
    if (k < 6) throw SchemaError("configurations need at least 6 landmarks, found " + std::to_string(k));
    return std::move(configs_);
  }

 private:
  std::vector<LandmarkConfig> configs_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace

std::vector<LandmarkConfig> parse_landmarks_csv(std::istream& in) {
  ConfigCollector collector;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (columns == 0) {
      const bool with_w = fields.size() == 6;
      const std::vector<std::string> expected = {"config_id", "landmark_id", "x", "y", "z", "w"};
      if (fields.size() != 5 && !with_w) throw ParseError(line_no, "header must be config_id,landmark_id,x,y,z[,w]");
      for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i] != expected[i]) throw ParseError(line_no, "unexpected header column '" + fields[i] + "'");
      columns = fields.size();
      continue;
    }
    if (fields.size() != columns)
      throw ParseError(line_no, "expected " + std::to_string(columns) + " fields, found " + std::to_string(fields.size()));
    Homogeneous h{0.0, 0.0, 0.0, 1.0};
    for (std::size_t i = 2; i < columns; ++i) h[i - 2] = parse_number(fields[i], line_no);
    collector.add(fields[0], h, line_no);
  }
  return std::move(collector).finish();
}

std::vector<LandmarkConfig> parse_landmarks_json(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (trim(text).empty()) return {};

  auto line_of = [&](std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
  };

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line_of(e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_array()) throw SchemaError("landmark JSON must be an array of configurations");

  ConfigCollector collector;
  for (std::size_t c = 0; c < doc.size(); ++c) {
    const auto& entry = doc[c];
    const std::string where = "configuration #" + std::to_string(c + 1);
    if (!entry.is_object() || !entry.contains("config_id") || !entry.contains("landmarks"))
      throw SchemaError(where + " needs config_id and landmarks");
    const auto& id_node = entry["config_id"];
    std::string id;
    if (id_node.is_string()) {
      id = id_node.get<std::string>();
    } else if (id_node.is_number_integer()) {
      id = std::to_string(id_node.get<long long>());
    } else {
      throw SchemaError(where + ": config_id must be a string or integer");
    }
    const auto& lms = entry["landmarks"];
    if (!lms.is_array()) throw SchemaError(where + ": landmarks must be an array");
    for (const auto& row : lms) {
      if (!row.is_array() || (row.size() != 3 && row.size() != 4))
        throw SchemaError(where + ": each landmark needs 3 or 4 coordinates");
      Homogeneous h{0.0, 0.0, 0.0, 1.0};
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (!row[i].is_number()) throw SchemaError(where + ": non-numeric coordinate");
        h[i] = row[i].get<double>();
      }
      if (h[0] == 0.0 && h[1] == 0.0 && h[2] == 0.0 && h[3] == 0.0) throw SchemaError(where + ": zero landmark vector");
      collector.add(id, h, 0);
    }
  }
  return std::move(collector).finish();
}

std::vector<LandmarkConfig> load_landmarks(const std::filesystem::path& path, LandmarkFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return format == LandmarkFormat::kJson ? parse_landmarks_json(in) : parse_landmarks_csv(in);
}

void write_landmarks_csv(std::ostream& out, std::span<const LandmarkConfig> configs) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "config_id,landmark_id,x,y,z,w\n";
  for (const auto& c : configs) {
    for (std::size_t j = 0; j < c.landmarks.size(); ++j) {
      const auto& h = c.landmarks[j];
      out << c.config_id << ',' << (j + 1) << ',' << h[0] << ',' << h[1] << ',' << h[2] << ',' << h[3] << '\n';
    }
  }
  out.precision(old_precision);
}

void write_landmarks_json(std::ostream& out, std::span<const LandmarkConfig> configs) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& c : configs) {
    nlohmann::json lms = nlohmann::json::array();
    for (const auto& h : c.landmarks) lms.push_back({h[0], h[1], h[2], h[3]});
    doc.push_back({{"config_id", c.config_id}, {"landmarks", std::move(lms)}});
  }
  out << doc.dump(2) << '\n';
}

LandmarkConfig standard_frame_config(std::string config_id, const ProjectiveShape& shape) {
  if (shape.dim() != 3) throw InvalidInput("landmark configurations live in RP^3");
  LandmarkConfig c{std::move(config_id), {}};
  c.landmarks = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 1, 1, 1}};
  for (const auto& p : shape.components()) c.landmarks.push_back({p[0], p[1], p[2], p[3]});
  return c;
}

Vector default_spread(std::size_t m) {
  if (m == 0) throw InvalidInput("dimension must be positive");
  Vector s(m, 1.0);
  for (std::size_t k = 1; k < m; ++k) s[k] = 1.0 - 0.7 * static_cast<double>(k) / static_cast<double>(m - 1);
  return s;
}

Matrix householder_frame(const ProjectivePoint& mode) {
  const std::size_t d = mode.ambient();
  Vector w(d, 0.0);
  w[0] = 1.0;
  for (std::size_t i = 0; i < d; ++i) w[i] -= mode[i];
  const double ww = dot(w, w);
  if (ww < 1e-30) return Matrix::identity(d);
  return Matrix::identity(d) - (2.0 / ww) * outer(w, w);
}

namespace {

Vector resolved_spread(const SynthSpec& spec) {
  const std::size_t m = spec.center.dim();
  Vector s = spec.spread.empty() ? default_spread(m) : spec.spread;
  if (s.size() != m) throw InvalidInput("synthetic spread needs one entry per tangent direction");
  for (double x : s)
    if (!(x > 0.0 && x <= 1.0)) throw InvalidInput("synthetic spread entries must lie in (0, 1]");
  return s;
}

void check_spec(const SynthSpec& spec) {
  if (!(std::isfinite(spec.concentration) && spec.concentration > 0.0))
    throw InvalidInput("concentration must be finite and positive");
}

}  // namespace

Sample synth_sample(const SynthSpec& spec) {
  check_spec(spec);
  const Vector spread = resolved_spread(spec);
  const std::size_t q = spec.center.q();
  const std::size_t d = spec.center.dim() + 1;
  const double sigma = 1.0 / std::sqrt(spec.concentration);

  std::vector<Matrix> frames;
  frames.reserve(q);
  for (const auto& c : spec.center.components()) frames.push_back(householder_frame(c));

  Sample out;
  out.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    Rng rng(RngStream{spec.seed, i});
    std::vector<ProjectivePoint> comps;
    comps.reserve(q);
    for (std::size_t s = 0; s < q; ++s) {
      // Coordinates in the frame (c, t_1, ..., t_m), then rotated back.
      Vector local(d);
      local[0] = 1.0 + sigma * rng.normal();
      for (std::size_t k = 1; k < d; ++k) local[k] = sigma * spread[k - 1] * rng.normal();
      comps.push_back(canonicalize(frames[s] * local));
    }
    out.emplace_back(std::move(comps));
  }
  return out;
}

ProjectiveShape synth_population_antimean(const SynthSpec& spec) {
  check_spec(spec);
  const Vector spread = resolved_spread(spec);
  const auto smallest = std::min_element(spread.begin(), spread.end());
  const double floor = *smallest;
  if (std::count(spread.begin(), spread.end(), floor) > 1)
    throw FocalPointError(0, 0.0, 0.0);
  const std::size_t col = static_cast<std::size_t>(smallest - spread.begin()) + 1;
  std::vector<ProjectivePoint> comps;
  for (const auto& c : spec.center.components()) comps.push_back(canonicalize(householder_frame(c).column(col)));
  return ProjectiveShape(std::move(comps));
}

}  // namespace antimean
