#include "quadagg/catalog.hpp"
#include "quadagg/certsearch.hpp"
#include "quadagg/hull.hpp"
#include "quadagg/io.hpp"
#include "quadagg/quadcore.hpp"
#include "quadagg/sdprank.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace quadagg;

// Exit statuses are a stable contract:
// 0 success, 1 input error, 2 inconclusive / no certificate, 3 inside hull.
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInconclusive = 2;
constexpr int kInsideHull = 3;

Vector parse_point(const std::string& text, int n) {
  std::vector<double> values;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    try {
      values.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw IoError("point must be comma-separated floats: " + text);
    }
  }
  if (static_cast<int>(values.size()) != n) {
    throw IoError("point has " + std::to_string(values.size()) + " coordinates, expected " +
                  std::to_string(n));
  }
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = values[i];
  return x;
}

std::filesystem::path out_path(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out_dir);
  return std::filesystem::path(config.out_dir) / name;
}

int cmd_pdlc(const std::string& instancePath, const RunConfig& config) {
  const QuadSystem sys = load_quad_system(instancePath);
  if (sys.m() != 3) throw IoError("pdlc requires an instance with exactly 3 constraints");
  std::vector<SymMatrix> ms;
  for (const auto& q : sys.constraints) ms.push_back(homogenized_matrix(q));

  SearchOptions opts;
  opts.grid = config.grid;
  opts.seed = config.seed;
  const PdlcOutcome out = check_pdlc(ms[0], ms[1], ms[2], opts);

  if (const auto* w = std::get_if<PdlcWitness>(&out)) {
    atomic_write(out_path(config, "pdlc_certificate.json"), to_certificate_text(*w));
    std::cout << "pdlc witness found, margin " << format_double(w->margin) << "\n";
    return kOk;
  }
  if (const auto* w = std::get_if<DualWitness>(&out)) {
    atomic_write(out_path(config, "pdlc_certificate.json"), to_certificate_text(*w));
    std::cout << "dual witness found: no definite combination exists\n";
    return kOk;
  }
  const auto& miss = std::get<NoWitness>(out);
  atomic_write(out_path(config, "pdlc_certificate.json"),
               inconclusive_certificate_text(miss.diagnostics));
  std::cout << "inconclusive: " << miss.diagnostics << "\n";
  return kInconclusive;
}

int cmd_separate(const std::string& instancePath, const std::string& pointText,
                 const RunConfig& config) {
  const QuadSystem sys = load_quad_system(instancePath);
  if (sys.m() != 3) throw IoError("separate requires an instance with exactly 3 constraints");
  const Vector query = parse_point(pointText, sys.n);

  const Box box = Box::cube(sys.n, config.box_lo, config.box_hi);
  // closed systems sample the interior (negative margin) per the closed-case
  // route through conv(int(T))
  const double interiorMargin = sys.sense() == Sense::Nonstrict ? -1e-6 : config.margin;
  const SampledHull hull = sample_set(sys, box, config.samples, config.seed, interiorMargin);
  if (hull.points.empty()) {
    std::cout << "no sample accepted; cannot build the inner hull\n";
    return kInconclusive;
  }
  if (hull_membership(hull, query) == Membership::Inside) {
    std::cout << "query lies inside the sampled hull\n";
    return kInsideHull;
  }
  const auto plane = best_separating_hyperplane(hull, query);
  if (!plane) {
    std::cout << "query not separable from the sampled hull\n";
    return kInsideHull;
  }
  // Put the hyperplane through the query: the exclusion argument needs the
  // lifted query on the restricted subspace.
  const double beta = plane->alpha.dot(query);
  const SeparationOutcome out =
      sys.sense() == Sense::Strict
          ? separate(sys, query, plane->alpha, beta, hull, std::max(config.grid, 128))
          : closed_separate(sys, query, plane->alpha, beta, hull, std::max(config.grid, 128));

  if (const auto* cert = std::get_if<SeparationCertificate>(&out)) {
    atomic_write(out_path(config, "separation_certificate.json"), to_certificate_text(*cert));
    std::cout << "separation certificate with lambda = (" << format_double(cert->lambda.values(0))
              << ", " << format_double(cert->lambda.values(1)) << ", "
              << format_double(cert->lambda.values(2)) << ")\n";
    return kOk;
  }
  std::cout << "no aggregation found: " << std::get<NoAggregation>(out).diagnostics << "\n";
  return kInconclusive;
}

int cmd_exclude(const std::string& instancePath, const std::string& excludeText,
                const std::string& keepText, const RunConfig& config) {
  const QuadSystem sys = load_quad_system(instancePath);
  const Vector exclude = parse_point(excludeText, sys.n);
  const Vector keep = parse_point(keepText, sys.n);
  const auto out = find_excluding_aggregation(sys, keep, exclude);
  if (const auto* w = std::get_if<Weights>(&out)) {
    atomic_write(out_path(config, "exclusion_weights.json"), to_certificate_text(*w));
    std::cout << "aggregation weights found\n";
    return kOk;
  }
  const auto& cert = std::get<FarkasCertificate>(out);
  atomic_write(out_path(config, "exclusion_farkas.json"), to_certificate_text(cert));
  std::cout << "no aggregation separates: Farkas certificate written\n";
  return kInconclusive;
}

int cmd_reproduce(const std::string& id, const RunConfig& config) {
  std::vector<std::string> ids;
  if (id == "all") {
    ids = kInstanceIds;
  } else {
    ids.push_back(id);
  }
  bool allPass = true;
  std::string fullText;
  for (const auto& one : ids) {
    const Report report = reproduce(one, config);
    const std::string text = to_text(report);
    std::cout << text;
    fullText += text;
    allPass = allPass && report.all_pass();
  }
  atomic_write(out_path(config, "reproduction_report.txt"), fullText);
  return allPass ? kOk : kInconclusive;
}

int cmd_plot_data(const std::string& instancePath, const std::vector<std::string>& lambdaTexts,
                  const RunConfig& config) {
  const QuadSystem sys = load_quad_system(instancePath);
  if (sys.n > 3) throw IoError("plot-data exports instances with n <= 3 only");
  const Box box = Box::cube(sys.n, config.box_lo, config.box_hi);
  const SampledHull hull = sample_set(sys, box, config.samples, config.seed, config.margin);
  atomic_write(out_path(config, "S_cloud.txt"), to_point_cloud_text(hull.points));
  std::cout << "wrote " << hull.points.size() << " points of S\n";

  for (size_t k = 0; k < lambdaTexts.size(); ++k) {
    const Vector lam = parse_point(lambdaTexts[k], sys.m());
    const QuadConstraint agg = aggregate(sys, Weights(lam, false));
    QuadSystem one(sys.n, {agg});
    const SampledHull cloud =
        sample_set(one, box, config.samples, config.seed + 1 + k, config.margin);
    atomic_write(out_path(config, "S_lambda_" + std::to_string(k) + "_cloud.txt"),
                 to_point_cloud_text(cloud.points));
    std::cout << "wrote " << cloud.points.size() << " points of S_lambda[" << k << "]\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aggregation machinery for sets cut out by quadratic inequalities"};
  app.require_subcommand(1);

  RunConfig config;
  std::string instancePath;
  std::string pointText;
  std::string keepText;
  std::string reproduceId = "all";
  std::vector<std::string> lambdaTexts;
  std::pair<double, double> boxPair{config.box_lo, config.box_hi};

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", config.seed, "counter-based RNG seed");
    cmd->add_option("--samples", config.samples, "rejection-sampling proposals");
    cmd->add_option("--grid", config.grid, "search grid resolution");
    cmd->add_option("--tol", config.margin, "membership margin");
    cmd->add_option("--box", [&](const std::vector<std::string>& vals) {
      // accepted as "lo,hi"
      if (vals.size() != 1) return false;
      const auto comma = vals[0].find(',');
      if (comma == std::string::npos) return false;
      try {
        boxPair.first = std::stod(vals[0].substr(0, comma));
        boxPair.second = std::stod(vals[0].substr(comma + 1));
      } catch (const std::exception&) {
        return false;
      }
      return boxPair.first < boxPair.second;
    }, "sampling box as lo,hi");
    cmd->add_option("--out", config.out_dir, "output directory");
  };

  CLI::App* pdlc = app.add_subcommand("pdlc", "definite-combination check on 3 constraints");
  pdlc->add_option("--instance", instancePath, "instance file")->required();
  add_common(pdlc);

  CLI::App* sep = app.add_subcommand("separate", "aggregation separation oracle");
  sep->add_option("--instance", instancePath, "instance file")->required();
  sep->add_option("--point", pointText, "query point, comma-separated")->required();
  add_common(sep);

  CLI::App* exc = app.add_subcommand("exclude", "aggregation excluding one point, keeping another");
  exc->add_option("--instance", instancePath, "instance file")->required();
  exc->add_option("--point", pointText, "point to exclude, comma-separated")->required();
  exc->add_option("--keep", keepText, "point to keep, comma-separated")->required();
  add_common(exc);

  CLI::App* rep = app.add_subcommand("reproduce", "scripted reproduction runs");
  rep->add_option("id", reproduceId, "instance id or 'all'");
  add_common(rep);

  CLI::App* plot = app.add_subcommand("plot-data", "export point clouds for plotting");
  plot->add_option("--instance", instancePath, "instance file")->required();
  plot->add_option("--lambda", lambdaTexts, "aggregation weights, comma-separated (repeatable)");
  add_common(plot);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  config.box_lo = boxPair.first;
  config.box_hi = boxPair.second;

  try {
    config.validate();
    if (pdlc->parsed()) return cmd_pdlc(instancePath, config);
    if (sep->parsed()) return cmd_separate(instancePath, pointText, config);
    if (exc->parsed()) return cmd_exclude(instancePath, pointText, keepText, config);
    if (rep->parsed()) return cmd_reproduce(reproduceId, config);
    if (plot->parsed()) return cmd_plot_data(instancePath, lambdaTexts, config);
  } catch (const IoError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kInconclusive;
  }
  return kInputError;
}
