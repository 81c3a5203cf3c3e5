#include "app.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "antimean/bootstrap.hpp"
#include "antimean/calibration.hpp"
#include "antimean/data.hpp"
#include "antimean/errors.hpp"
#include "antimean/estimation.hpp"
#include "antimean/inference.hpp"
#include "antimean/numerics.hpp"
#include "antimean/pairwise.hpp"

namespace antimean::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// --- small parsers ---------------------------------------------------------

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw InvalidInput("cannot parse '" + text + "' in " + what);
  return v;
}

// "x1,x2,x3,x4;y1,y2,y3,y4" -> shape with one component per ';' group.
ProjectiveShape parse_shape(const std::string& text) {
  std::vector<ProjectivePoint> comps;
  for (const auto& part : split(text, ';')) {
    Vector v;
    for (const auto& x : split(part, ',')) v.push_back(parse_double(x, "shape '" + text + "'"));
    comps.push_back(canonicalize(v));
  }
  if (comps.empty()) throw InvalidInput("empty shape");
  return ProjectiveShape(std::move(comps));
}

std::vector<std::size_t> parse_frame(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& x : split(text, ',')) {
    const double v = parse_double(x, "frame");
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw InvalidInput("frame positions are 1-based integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// --- JSON helpers ----------------------------------------------------------

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const ProjectiveShape& s) {
  json comps = json::array();
  for (const auto& p : s.components()) comps.push_back(p.coords());
  return comps;
}

json to_json(const TestResult& r) {
  return {{"statistic", r.statistic},
          {"df", r.df},
          {"p_value", r.p_value},
          {"method", std::string(to_string(r.method))},
          {"cutoff", r.cutoff},
          {"alpha", r.alpha},
          {"reject", r.reject}};
}

json to_json(const BootstrapResult& b, const BootstrapPlan& plan, double alpha) {
  return {{"resamples", plan.resamples},
          {"seed", plan.seed},
          {"studentization", std::string(to_string(plan.studentization))},
          {"completed", b.values.size()},
          {"failed", b.n_failed},
          {"observed", b.observed},
          {"cutoff", b.cutoff},
          {"empirical_p", b.empirical_p},
          {"reject", b.observed > b.cutoff},
          {"alpha", alpha}};
}

// Smallest two eigenvalues of every block of every group.
json gap_diagnostics(const std::vector<Sample>& groups, const std::vector<std::string>& labels, double gap_tol) {
  json out = json::array();
  for (std::size_t a = 0; a < groups.size(); ++a) {
    const AxialEigensystem axial = axial_moments(groups[a]);
    for (std::size_t s = 0; s < axial.q(); ++s) {
      const auto& vals = axial.eigen[s].values;
      const double gap = vals[1] - vals[0];
      const double threshold = focal_threshold(axial.moments[s], gap_tol);
      out.push_back({{"group", labels[a]},
                     {"block", s},
                     {"smallest", {vals[0], vals[1]}},
                     {"gap", gap},
                     {"threshold", threshold},
                     {"focal", !(gap > threshold)}});
    }
  }
  return out;
}

// --- data loading ----------------------------------------------------------

struct Groups {
  std::vector<std::string> labels;
  std::vector<std::vector<LandmarkConfig>> configs;
  std::vector<Sample> samples;
};

fs::path resolve(const RunConfig& c, const std::string& p) {
  fs::path path(p);
  if (!c.data_dir.empty() && path.is_relative()) return fs::path(c.data_dir) / path;
  return path;
}

std::vector<std::pair<std::string, std::string>> load_group_map(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open group file " + path.string());
  std::vector<std::pair<std::string, std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (!header) {
      if (cells.size() != 2 || trim(cells[0]) != "config_id" || trim(cells[1]) != "group")
        throw ParseError(lineno, "group file header must be 'config_id,group'");
      header = true;
      continue;
    }
    if (cells.size() != 2 || trim(cells[0]).empty() || trim(cells[1]).empty())
      throw ParseError(lineno, "expected 'config_id,group'");
    rows.emplace_back(trim(cells[0]), trim(cells[1]));
  }
  return rows;
}

Groups load_groups(const RunConfig& c) {
  if (c.inputs.empty()) throw InvalidInput("no --input given");
  const FrameSpec frame = FrameSpec::from_one_based(c.frame);
  Groups g;
  if (c.groups.empty()) {
    for (const auto& input : c.inputs) {
      const fs::path path = resolve(c, input);
      g.labels.push_back(path.stem().string());
      g.configs.push_back(load_landmarks(path, landmark_format_for(path)));
      if (g.configs.back().empty()) throw SchemaError("input " + path.string() + " holds no configurations");
    }
  } else {
    std::vector<LandmarkConfig> all;
    for (const auto& input : c.inputs) {
      const fs::path path = resolve(c, input);
      auto part = load_landmarks(path, landmark_format_for(path));
      all.insert(all.end(), part.begin(), part.end());
    }
    std::map<std::string, std::size_t> group_of;
    for (const auto& [id, label] : load_group_map(resolve(c, c.groups))) {
      auto it = std::find(g.labels.begin(), g.labels.end(), label);
      if (it == g.labels.end()) {
        g.labels.push_back(label);
        g.configs.emplace_back();
        it = g.labels.end() - 1;
      }
      group_of[id] = static_cast<std::size_t>(it - g.labels.begin());
    }
    for (auto& config : all) {
      const auto it = group_of.find(config.config_id);
      if (it == group_of.end()) throw SchemaError("configuration '" + config.config_id + "' has no group");
      g.configs[it->second].push_back(std::move(config));
    }
    for (std::size_t a = 0; a < g.labels.size(); ++a)
      if (g.configs[a].empty()) throw SchemaError("group '" + g.labels[a] + "' has no configurations");
  }
  for (const auto& configs : g.configs) g.samples.push_back(projective_sample(configs, frame));
  return g;
}

Sample concatenated(const Groups& g) {
  Sample all;
  for (const auto& s : g.samples) all.insert(all.end(), s.begin(), s.end());
  return all;
}

BootstrapPlan bootstrap_plan(const RunConfig& c) {
  BootstrapPlan plan;
  plan.resamples = c.boot;
  plan.seed = c.seed;
  plan.studentization = parse_studentization(c.studentize);
  plan.threads = c.threads;
  return plan;
}

void check_common(const RunConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  if (!(c.gap_tol >= 0.0)) throw InvalidInput("gap tolerance must be nonnegative");
  if (c.format != "json" && c.format != "table") throw InvalidInput("format must be json or table");
  parse_df_mode(c.df_mode);
  parse_studentization(c.studentize);
  parse_pairwise_method(c.pairwise_method);
}

// --- commands --------------------------------------------------------------

json cmd_antimean(const RunConfig& c) {
  const Groups g = load_groups(c);
  const Sample sample = concatenated(g);
  json report;
  report["diagnostics"]["gaps"] = gap_diagnostics({sample}, {"all"}, c.gap_tol);
  const AntimeanEstimate est = sample_antimean(sample, c.gap_tol);
  json eigen = json::array();
  for (const auto& e : est.axial.eigen) eigen.push_back(e.values);
  report["result"] = {{"n", est.n},
                      {"q", est.q()},
                      {"m", est.dim()},
                      {"antimean", to_json(est.antimean)},
                      {"eigenvalues", eigen},
                      {"anticovariance", to_json(est.anticov)}};
  return report;
}

json cmd_test1(const RunConfig& c) {
  if (c.null_shape.empty()) throw InvalidInput("test1 needs --null");
  const Groups g = load_groups(c);
  const Sample sample = concatenated(g);
  const ProjectiveShape nu = parse_shape(c.null_shape);
  json report;
  report["diagnostics"]["gaps"] = gap_diagnostics({sample}, {"all"}, c.gap_tol);
  const AntimeanEstimate est = sample_antimean(sample, c.gap_tol);
  if (nu.q() != est.q() || nu.dim() != est.dim()) throw ShapeMismatch("--null does not match the data's (q, m)");
  report["result"] = {{"n", est.n}, {"antimean", to_json(est.antimean)}, {"null", to_json(nu)},
                      {"asymptotic", to_json(one_sample_test(est, nu, c.alpha))}};
  if (c.boot > 0) {
    const BootstrapPlan plan = bootstrap_plan(c);
    const BootstrapResult b = bootstrap_one_sample(sample, plan, 1.0 - c.alpha, nu, c.gap_tol);
    report["result"]["bootstrap"] = to_json(b, plan, c.alpha);
  }
  return report;
}

json cmd_test2(const RunConfig& c) {
  const Groups g = load_groups(c);
  if (g.samples.size() != 2) throw InvalidInput("test2 needs exactly two groups");
  json report;
  report["diagnostics"]["gaps"] = gap_diagnostics(g.samples, g.labels, c.gap_tol);
  const AntimeanEstimate e1 = sample_antimean(g.samples[0], c.gap_tol);
  const AntimeanEstimate e2 = sample_antimean(g.samples[1], c.gap_tol);
  const TwoSampleStatistic s = two_sample_statistic(e1, e2);
  report["result"] = {{"groups", g.labels},
                      {"sizes", {e1.n, e2.n}},
                      {"av", s.av},
                      {"covariance", to_json(s.covariance)},
                      {"asymptotic", to_json(two_sample_test(e1, e2, c.alpha))}};
  if (c.boot > 0) {
    const BootstrapPlan plan = bootstrap_plan(c);
    const BootstrapResult b = bootstrap_two_sample(g.samples[0], g.samples[1], plan, 1.0 - c.alpha, c.gap_tol);
    report["result"]["bootstrap"] = to_json(b, plan, c.alpha);
  }
  return report;
}

json cmd_manova(const RunConfig& c) {
  const Groups g = load_groups(c);
  if (g.samples.size() < 2) throw InvalidInput("manova needs at least two groups");
  json report;
  report["diagnostics"]["gaps"] = gap_diagnostics(g.samples, g.labels, c.gap_tol);
  const ManovaStatistic stat = manova_statistic(g.samples, ManovaBase::pooled_sample(), c.gap_tol);
  const std::size_t d = stat.pooled.antimean.q() * stat.pooled.antimean.dim();
  const DfMode mode = parse_df_mode(c.df_mode);

  json sizes = json::array();
  for (const auto& s : g.samples) sizes.push_back(s.size());
  json modes = json::object();
  for (auto m : {DfMode::kDim, DfMode::kGroupsTimesDim, DfMode::kGroupsMinusOneTimesDim})
    modes[std::string(to_string(m))] =
        to_json(asymptotic_result(stat.value, manova_df(m, d, g.samples.size()), c.alpha));
  report["result"] = {{"groups", g.labels},
                      {"sizes", sizes},
                      {"statistic", stat.value},
                      {"contributions", stat.contributions},
                      {"pooled_antimean", to_json(stat.pooled.antimean)},
                      {"df_mode", std::string(to_string(mode))},
                      {"asymptotic", modes[std::string(to_string(mode))]},
                      {"df_modes", modes}};

  const BootstrapPlan plan = bootstrap_plan(c);
  if (c.boot > 0) {
    const BootstrapResult b = bootstrap_manova(g.samples, plan, 1.0 - c.alpha, c.gap_tol);
    report["result"]["bootstrap"] = to_json(b, plan, c.alpha);
  }
  if (c.pairwise) {
    const Calibration cal = c.boot > 0 ? Calibration::kBootstrap : Calibration::kAsymptotic;
    json table = json::array();
    const PairwiseMethod method = parse_pairwise_method(c.pairwise_method);
    report["result"]["pairwise_method"] = std::string(to_string(method));
    for (const auto& entry : pairwise_manova(g.samples, c.alpha, cal, plan, c.gap_tol, method, mode)) {
      json row = {{"pair", {entry.first + 1, entry.second + 1}},
                  {"labels", {g.labels[entry.first], g.labels[entry.second]}}};
      if (entry.result) {
        row["result"] = to_json(*entry.result);
        row["decision"] = entry.result->reject ? "Reject" : "No";
      } else {
        row["error"] = entry.error;
        row["decision"] = "Error";
      }
      table.push_back(row);
    }
    report["result"]["pairwise"] = table;
  }
  return report;
}

json cmd_coords(const RunConfig& c) {
  const Groups g = load_groups(c);
  json rows = json::array();
  for (std::size_t a = 0; a < g.samples.size(); ++a)
    for (std::size_t i = 0; i < g.samples[a].size(); ++i)
      rows.push_back({{"config_id", g.configs[a][i].config_id},
                      {"group", g.labels[a]},
                      {"shape", to_json(g.samples[a][i])}});
  json report;
  report["result"] = {{"frame", c.frame}, {"shapes", rows}};
  return report;
}

SynthSpec synth_spec(const RunConfig& c, const ProjectiveShape& centre, std::size_t n, std::uint64_t seed) {
  return SynthSpec{centre, c.kappa, Vector(c.spread.begin(), c.spread.end()), n, seed};
}

json cmd_synth(const RunConfig& c) {
  if (c.centers.size() != 1) throw InvalidInput("synth needs exactly one --center");
  if (c.sizes.size() != 1) throw InvalidInput("synth needs exactly one --n");
  const ProjectiveShape centre = parse_shape(c.centers[0]);
  if (centre.dim() != 3) throw InvalidInput("synth writes landmarks, which need components in RP^3");
  const Sample sample = synth_sample(synth_spec(c, centre, c.sizes[0], c.seed));
  std::vector<LandmarkConfig> configs;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    std::ostringstream id;
    id << "s" << std::setw(4) << std::setfill('0') << i + 1;
    configs.push_back(standard_frame_config(id.str(), sample[i]));
  }
  json report;
  json result = {{"n", sample.size()}, {"q", centre.q()}, {"center", to_json(centre)}, {"seed", c.seed}};
  if (c.out.empty()) {
    std::ostringstream text;
    write_landmarks_csv(text, configs);
    result["landmarks_csv"] = text.str();
  } else {
    std::ofstream file(c.out);
    if (!file) throw IoError("cannot write " + c.out);
    if (landmark_format_for(c.out) == LandmarkFormat::kJson)
      write_landmarks_json(file, configs);
    else
      write_landmarks_csv(file, configs);
    if (!file) throw IoError("failed writing " + c.out);
    result["written"] = c.out;
  }
  report["result"] = result;
  return report;
}

json cmd_calibrate(const RunConfig& c) {
  if (c.centers.empty()) throw InvalidInput("calibrate needs --center");
  CalibrationPlan plan;
  plan.kind = parse_calibration_kind(c.kind);
  for (const auto& text : c.centers) plan.centers.push_back(parse_shape(text));
  plan.group_sizes = c.sizes;
  plan.concentration = c.kappa;
  plan.spread = Vector(c.spread.begin(), c.spread.end());
  plan.replications = c.reps;
  plan.alpha = c.alpha;
  plan.seed = c.seed;
  plan.df_mode = parse_df_mode(c.df_mode);
  plan.bootstrap = bootstrap_plan(c);
  plan.bootstrap.threads = 1;
  plan.bootstrap.seed = 0;
  plan.threads = c.threads;
  plan.gap_tol = c.gap_tol;
  const bool needs_boot = plan.kind == CalibrationKind::kOneSampleCoverage ||
                          plan.kind == CalibrationKind::kTwoSampleBootstrap ||
                          plan.kind == CalibrationKind::kManovaBootstrap;
  if (needs_boot && c.boot == 0) throw InvalidInput("calibration kind '" + c.kind + "' needs --boot");
  const CalibrationSummary s = calibrate(plan);
  json report;
  report["result"] = {{"kind", c.kind},
                      {"replications", s.replications},
                      {"completed", s.completed},
                      {"failed", s.failed},
                      {"hits", s.hits},
                      {"rate", s.rate},
                      {"std_error", s.std_error},
                      {"statistic_q95", s.statistic_q95},
                      {"df", s.df},
                      {"chisq_q95", chisq_quantile(0.95, s.df)}};
  if (!s.first_error.empty()) report["result"]["first_error"] = s.first_error;
  return report;
}

// --- text rendering --------------------------------------------------------

void render_test(std::ostream& out, const std::string& name, const json& r) {
  out << name << ": statistic " << r["statistic"].get<double>() << ", df " << r["df"].get<int>() << ", p "
      << r["p_value"].get<double>() << ", cutoff " << r["cutoff"].get<double>() << ", "
      << (r["reject"].get<bool>() ? "reject" : "do not reject") << "\n";
}

void render_boot(std::ostream& out, const json& b) {
  out << "bootstrap (" << b["completed"].get<std::size_t>() << "/" << b["resamples"].get<std::size_t>()
      << " resamples, " << b["studentization"].get<std::string>() << "): cutoff " << b["cutoff"].get<double>()
      << ", empirical p " << b["empirical_p"].get<double>() << ", "
      << (b["reject"].get<bool>() ? "reject" : "do not reject") << "\n";
}

void render_table(std::ostream& out, const json& report) {
  const std::string cmd = report["command"];
  const json& r = report["result"];
  out << std::setprecision(10);
  if (cmd == "antimean") {
    out << "n = " << r["n"] << ", q = " << r["q"] << "\n";
    for (std::size_t s = 0; s < r["antimean"].size(); ++s)
      out << "antimean[" << s << "] = " << r["antimean"][s].dump() << "  eigenvalues " << r["eigenvalues"][s].dump()
          << "\n";
  } else if (cmd == "test1" || cmd == "test2") {
    render_test(out, "asymptotic", r["asymptotic"]);
    if (r.contains("bootstrap")) render_boot(out, r["bootstrap"]);
  } else if (cmd == "manova") {
    out << "T_d = " << r["statistic"].get<double>() << "\n";
    for (const auto& [mode, t] : r["df_modes"].items()) render_test(out, "df mode " + mode, t);
    if (r.contains("bootstrap")) render_boot(out, r["bootstrap"]);
    if (r.contains("pairwise")) {
      out << "pair\tdecision\tstatistic\tp\n";
      for (const auto& row : r["pairwise"]) {
        out << "(" << row["pair"][0] << "," << row["pair"][1] << ")\t" << row["decision"].get<std::string>();
        if (row.contains("result"))
          out << "\t" << row["result"]["statistic"].get<double>() << "\t" << row["result"]["p_value"].get<double>();
        else
          out << "\t" << row["error"].get<std::string>();
        out << "\n";
      }
    }
  } else if (cmd == "coords") {
    for (const auto& row : r["shapes"])
      out << row["config_id"].get<std::string>() << "\t" << row["group"].get<std::string>() << "\t"
          << row["shape"].dump() << "\n";
  } else if (cmd == "synth") {
    if (r.contains("landmarks_csv"))
      out << r["landmarks_csv"].get<std::string>();
    else
      out << "wrote " << r["n"] << " configurations to " << r["written"].get<std::string>() << "\n";
  } else if (cmd == "calibrate") {
    out << r["kind"].get<std::string>() << ": rate " << r["rate"].get<double>() << " (se "
        << r["std_error"].get<double>() << ") over " << r["completed"] << "/" << r["replications"]
        << " replications; statistic q95 " << r["statistic_q95"].get<double>() << " vs chi2 "
        << r["chisq_q95"].get<double>() << "\n";
  }
  if (report.contains("diagnostics"))
    for (const auto& gap : report["diagnostics"]["gaps"])
      out << "gap " << gap["group"].get<std::string>() << "/" << gap["block"] << ": " << gap["gap"].get<double>()
          << (gap["focal"].get<bool>() ? " (focal)" : "") << "\n";
}

// --- config keys -------------------------------------------------------------

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

template <class T>
std::vector<T> as_list(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

json to_json(const RunConfig& c) {
  return {{"command", c.command}, {"input", c.inputs},         {"groups", c.groups},   {"data_dir", c.data_dir},
          {"frame", c.frame},     {"alpha", c.alpha},          {"boot", c.boot},       {"seed", c.seed},
          {"df_mode", c.df_mode}, {"gap_tol", c.gap_tol},      {"format", c.format},   {"out", c.out},
          {"null", c.null_shape}, {"studentize", c.studentize}, {"pairwise", c.pairwise},
          {"pairwise_method", c.pairwise_method}, {"threads", c.threads},
          {"center", c.centers},  {"n", c.sizes},              {"kappa", c.kappa},     {"spread", c.spread},
          {"reps", c.reps},       {"kind", c.kind}};
}

void apply_config(const json& object, RunConfig& c, const std::vector<std::string>& keep) {
  if (!object.is_object()) throw InvalidInput("run config must be a JSON object");
  for (const auto& [raw_key, v] : object.items()) {
    const std::string key = normalize_key(raw_key);
    if (std::find(keep.begin(), keep.end(), key) != keep.end()) continue;
    try {
      if (key == "command") c.command = v.get<std::string>();
      else if (key == "input") c.inputs = as_list<std::string>(v);
      else if (key == "groups") c.groups = v.get<std::string>();
      else if (key == "data_dir") c.data_dir = v.get<std::string>();
      else if (key == "frame") c.frame = v.is_string() ? parse_frame(v.get<std::string>()) : v.get<std::vector<std::size_t>>();
      else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "boot") c.boot = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "df_mode") c.df_mode = v.get<std::string>();
      else if (key == "gap_tol") c.gap_tol = v.get<double>();
      else if (key == "format") c.format = v.get<std::string>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "null") c.null_shape = v.get<std::string>();
      else if (key == "studentize") c.studentize = v.get<std::string>();
      else if (key == "pairwise") c.pairwise = v.get<bool>();
      else if (key == "pairwise_method") c.pairwise_method = v.get<std::string>();
      else if (key == "threads") c.threads = v.get<unsigned>();
      else if (key == "center") c.centers = as_list<std::string>(v);
      else if (key == "n") c.sizes = as_list<std::size_t>(v);
      else if (key == "kappa") c.kappa = v.get<double>();
      else if (key == "spread") c.spread = as_list<double>(v);
      else if (key == "reps") c.reps = v.get<std::size_t>();
      else if (key == "kind") c.kind = v.get<std::string>();
      else if (key == "description") continue;
      else throw InvalidInput("unknown run-config key '" + raw_key + "'");
    } catch (const json::exception& e) {
      throw InvalidInput("run-config key '" + raw_key + "': " + e.what());
    }
  }
}

json run_command(const RunConfig& c) {
  check_common(c);
  json report;
  if (c.command == "antimean") report = cmd_antimean(c);
  else if (c.command == "test1") report = cmd_test1(c);
  else if (c.command == "test2") report = cmd_test2(c);
  else if (c.command == "manova") report = cmd_manova(c);
  else if (c.command == "coords") report = cmd_coords(c);
  else if (c.command == "synth") report = cmd_synth(c);
  else if (c.command == "calibrate") report = cmd_calibrate(c);
  else throw InvalidInput("unknown command '" + c.command + "'");
  report["schema"] = kReportSchema;
  report["command"] = c.command;
  report["config"] = to_json(c);
  if (!report.contains("diagnostics")) report["diagnostics"] = {{"gaps", json::array()}};
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extrinsic antimeans on real projective spaces and projective shape spaces"};
  app.set_version_flag("--version", "antimean 1.0.0");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string frame_text;
  std::map<std::string, CLI::Option*> options;
  std::vector<CLI::App*> subs;

  auto add = [&](CLI::App* sub, const std::string& key, CLI::Option* opt) {
    options[sub->get_name() + ":" + key] = opt;
  };
  auto common = [&](CLI::App* sub) {
    add(sub, "config", sub->add_option("--config", config_path, "Flat JSON run config; flags win"));
    add(sub, "alpha", sub->add_option("--alpha", cfg.alpha, "Significance level"));
    add(sub, "seed", sub->add_option("--seed", cfg.seed, "Random seed"));
    add(sub, "gap_tol", sub->add_option("--gap-tol", cfg.gap_tol, "Relative eigengap tolerance"));
    add(sub, "format", sub->add_option("--format", cfg.format, "json or table"));
    add(sub, "out", sub->add_option("--out", cfg.out, "Output file (stdout when empty)"));
    add(sub, "threads", sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)"));
  };
  auto data = [&](CLI::App* sub) {
    add(sub, "input", sub->add_option("--input", cfg.inputs, "Landmark file (.csv or .json); repeatable"));
    add(sub, "groups", sub->add_option("--groups", cfg.groups, "CSV mapping config_id,group"));
    add(sub, "data_dir", sub->add_option("--data-dir", cfg.data_dir, "Directory for relative input paths"));
    add(sub, "frame", sub->add_option("--frame", frame_text, "Five 1-based frame positions, e.g. 1,2,3,4,5"));
  };
  auto boot = [&](CLI::App* sub) {
    add(sub, "boot", sub->add_option("--boot", cfg.boot, "Bootstrap resamples (0 = none)"));
    add(sub, "studentize", sub->add_option("--studentize", cfg.studentize, "resample or original"));
  };
  auto synthetic = [&](CLI::App* sub) {
    add(sub, "center", sub->add_option("--center", cfg.centers, "Shape 'x1,..;y1,..' (repeatable per group)"));
    add(sub, "n", sub->add_option("--n", cfg.sizes, "Sample size (repeatable per group)"));
    add(sub, "kappa", sub->add_option("--kappa", cfg.kappa, "Concentration"));
    add(sub, "spread", sub->add_option("--spread", cfg.spread, "Tangent spreads in (0, 1]"));
  };

  CLI::App* run_sub = app.add_subcommand("run", "Run the command named in --config");
  common(run_sub);
  data(run_sub);
  boot(run_sub);
  add(run_sub, "df_mode", run_sub->add_option("--df-mode", cfg.df_mode, "3q, g3q or gminus1"));
  add(run_sub, "pairwise", run_sub->add_flag("--pairwise", cfg.pairwise, "Pairwise table"));
  add(run_sub, "pairwise_method",
      run_sub->add_option("--pairwise-method", cfg.pairwise_method, "two-sample or manova"));
  subs.push_back(run_sub);

  CLI::App* s_antimean = app.add_subcommand("antimean", "Sample antimean, anticovariance and gap diagnostics");
  common(s_antimean);
  data(s_antimean);
  subs.push_back(s_antimean);

  CLI::App* s_test1 = app.add_subcommand("test1", "One-sample test of a hypothesized antimean");
  common(s_test1);
  data(s_test1);
  boot(s_test1);
  add(s_test1, "null", s_test1->add_option("--null", cfg.null_shape, "Hypothesized antimean 'x1,..;y1,..'"));
  subs.push_back(s_test1);

  CLI::App* s_test2 = app.add_subcommand("test2", "Two-sample test (two groups, RP^3 components)");
  common(s_test2);
  data(s_test2);
  boot(s_test2);
  subs.push_back(s_test2);

  CLI::App* s_manova = app.add_subcommand("manova", "Anti-MANOVA test of equal antimeans");
  common(s_manova);
  data(s_manova);
  boot(s_manova);
  add(s_manova, "df_mode", s_manova->add_option("--df-mode", cfg.df_mode, "3q, g3q or gminus1"));
  add(s_manova, "pairwise", s_manova->add_flag("--pairwise", cfg.pairwise, "Pairwise table"));
  add(s_manova, "pairwise_method",
      s_manova->add_option("--pairwise-method", cfg.pairwise_method, "two-sample or manova"));
  subs.push_back(s_manova);

  CLI::App* s_coords = app.add_subcommand("coords", "Projective coordinates of landmark configurations");
  common(s_coords);
  data(s_coords);
  subs.push_back(s_coords);

  CLI::App* s_synth = app.add_subcommand("synth", "Write synthetic landmark configurations");
  common(s_synth);
  synthetic(s_synth);
  subs.push_back(s_synth);

  CLI::App* s_cal = app.add_subcommand("calibrate", "Monte Carlo size, coverage or power");
  common(s_cal);
  boot(s_cal);
  synthetic(s_cal);
  add(s_cal, "df_mode", s_cal->add_option("--df-mode", cfg.df_mode, "3q, g3q or gminus1"));
  add(s_cal, "reps", s_cal->add_option("--reps", cfg.reps, "Outer replications"));
  add(s_cal, "kind", s_cal->add_option("--kind", cfg.kind,
                                       "one-sample, two-sample, manova, coverage, two-sample-boot, manova-boot"));
  subs.push_back(s_cal);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* chosen = nullptr;
  for (auto* sub : subs)
    if (sub->parsed()) chosen = sub;

  try {
    std::vector<std::string> given;
    for (const auto& [name, opt] : options) {
      const auto colon = name.find(':');
      if (name.substr(0, colon) == chosen->get_name() && opt->count() > 0) given.push_back(name.substr(colon + 1));
    }
    if (!frame_text.empty()) cfg.frame = parse_frame(frame_text);
    if (chosen != run_sub) cfg.command = chosen->get_name();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot open run config " + config_path);
      json object;
      try {
        object = json::parse(in);
      } catch (const json::parse_error& e) {
        throw SchemaError(std::string("run config is not valid JSON: ") + e.what());
      }
      if (chosen != run_sub) given.push_back("command");
      apply_config(object, cfg, given);
      if (!cfg.data_dir.empty() && std::find(given.begin(), given.end(), "data_dir") == given.end() &&
          fs::path(cfg.data_dir).is_relative())
        cfg.data_dir = (fs::path(config_path).parent_path() / cfg.data_dir).string();
    }
    if (cfg.command.empty()) throw InvalidInput("run needs a config with a \"command\" key");
    if (cfg.command == "run") throw InvalidInput("config command cannot be 'run'");

    const json report = run_command(cfg);
    std::ostringstream text;
    if (cfg.format == "json")
      text << report.dump(2) << "\n";
    else
      render_table(text, report);
    if (!cfg.out.empty() && cfg.command != "synth") {
      std::ofstream file(cfg.out);
      if (!file || !(file << text.str())) throw IoError("cannot write " + cfg.out);
    } else {
      out << text.str();
    }
    return kOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace antimean::app
