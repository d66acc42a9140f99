#include "ordcif/cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ordcif/cli/dataset.hpp"
#include "ordcif/cli/json_writer.hpp"
#include "ordcif/cli/svg_plot.hpp"
#include "ordcif/error.hpp"
#include "ordcif/estimators.hpp"
#include "ordcif/isotonic.hpp"
#include "ordcif/simulation.hpp"

namespace ordcif::cli {
namespace {

struct Options {
  std::string input;
  std::optional<int> k;
  std::string output;
  // estimate
  bool only_restricted = false;
  bool only_unrestricted = false;
  std::string format = "json";
  std::string plot;
  // ci
  double level = 0.95;
  std::vector<double> times;
  // simulate
  std::string study;
  std::string config;
  std::optional<std::uint64_t> seed;
};

void emit(const Options& opt, const std::string& text, std::ostream& out) {
  if (opt.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(opt.output, std::ios::binary);
  if (!f) throw Error(Errc::ParseError, "cannot write '" + opt.output + "'");
  f << text;
}

void describe_sample(nlohmann::ordered_json& doc, const Sample& sample, const Dataset& data) {
  doc["k"] = sample.k();
  doc["n"] = sample.size();
  doc["censored"] = sample.has_censoring();
  doc["provenance"]["input_hash"] = data.hash;
}

std::string cifs_csv(const CifSet* raw, const CifSet* iso) {
  std::ostringstream csv;
  csv << "estimator,cause,time,value\n";
  auto rows = [&](const CifSet& set, const char* label) {
    for (int j = 1; j <= set.k; ++j) {
      const StepFunction& f = set.cif(j);
      csv << label << ',' << j << ",0," << format_double(f.initial_value()) << '\n';
      for (std::size_t m = 0; m < f.size(); ++m) {
        csv << label << ',' << j << ',' << format_double(f.knots()[m]) << ','
            << format_double(f.values()[m]) << '\n';
      }
    }
  };
  if (raw) rows(*raw, "unrestricted");
  if (iso) rows(*iso, "restricted");
  return csv.str();
}

int cmd_estimate(const Options& opt, std::ostream& out) {
  const Dataset data = read_dataset(opt.input);
  const Sample sample = to_sample(data, opt.k);
  const CifSet raw = estimate_cifs(sample);
  const CifSet iso = restrict_cifs(raw);
  const bool want_raw = !opt.only_restricted;
  const bool want_iso = !opt.only_unrestricted;

  if (!opt.plot.empty()) {
    const CifSet& shown = want_iso ? iso : raw;
    std::ofstream svg(opt.plot, std::ios::binary);
    if (!svg) throw Error(Errc::ParseError, "cannot write '" + opt.plot + "'");
    svg << render_cifs_svg(shown, sample.tau(),
                           want_iso ? "Restricted CIF estimates" : "Unrestricted CIF estimates");
  }

  if (opt.format == "csv") {
    emit(opt, cifs_csv(want_raw ? &raw : nullptr, want_iso ? &iso : nullptr), out);
    return kSuccess;
  }
  auto doc = result_document("estimate");
  describe_sample(doc, sample, data);
  doc["cifs"]["unrestricted"] = want_raw ? to_json(raw) : nlohmann::ordered_json(nullptr);
  doc["cifs"]["restricted"] = want_iso ? to_json(iso) : nlohmann::ordered_json(nullptr);
  emit(opt, dump_json(doc), out);
  return kSuccess;
}

int cmd_test(const Options& opt, std::ostream& out, std::ostream& err) {
  const Dataset data = read_dataset(opt.input);
  const Sample sample = to_sample(data, opt.k);
  const TestReport report = ordered_test(sample);
  auto doc = result_document("test");
  describe_sample(doc, sample, data);
  doc["test"] = to_json(report);
  emit(opt, dump_json(doc), out);
  char line[128];
  std::snprintf(line, sizeof line, "T = %.4f, p = %.6g\n", report.statistic, report.p_value);
  err << (report.censored ? "(weighted censored-data statistic) " : "") << line;
  return kSuccess;
}

int cmd_ci(const Options& opt, std::ostream& out) {
  if (!(opt.level > 0.0 && opt.level < 1.0)) {
    throw Error(Errc::BadLevel, "--level must lie in (0, 1), got " + std::to_string(opt.level));
  }
  const Dataset data = read_dataset(opt.input);
  const Sample sample = to_sample(data, opt.k);
  const CifSet iso = restrict_cifs(estimate_cifs(sample));
  std::vector<double> grid = opt.times;
  if (grid.empty()) {
    for (const auto& o : sample.observations()) grid.push_back(o.time);
  }
  const Band raw = pointwise_ci(iso, sample, opt.level, grid);
  const Band tight = tighten_bands(raw);
  auto doc = result_document("ci");
  describe_sample(doc, sample, data);
  doc["bands"] = to_json(raw, tight, iso);
  emit(opt, dump_json(doc), out);
  return kSuccess;
}

int cmd_simulate(const Options& opt, std::ostream& out) {
  std::ifstream in(opt.config, std::ios::binary);
  if (!in) throw Error(Errc::BadConfig, "cannot open config '" + opt.config + "'");
  std::ostringstream raw_text;
  raw_text << in.rdbuf();
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(raw_text.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::BadConfig, e.what());
  }
  SimConfig config = config_from_json(parsed);
  if (opt.seed) config.seed = *opt.seed;

  McReport report;
  if (opt.study == "consistency") {
    report = mc_consistency(config);
  } else if (opt.study == "null") {
    report = mc_null_distribution(config);
  } else if (opt.study == "dominance") {
    report = mc_dominance(config);
  } else if (opt.study == "fixed-t") {
    report = mc_fixed_t_limit(config);
  } else if (opt.study == "covariance") {
    report = mc_covariance(config);
  } else {
    throw Error(Errc::BadConfig, "unknown study '" + opt.study + "'");
  }

  auto doc = result_document("simulate");
  doc["k"] = config.k;
  doc["n"] = config.n;
  doc["censored"] = config.censor_rate > 0.0;
  doc["study"] = to_json(report);
  doc["study"]["config"] = to_json(config);
  doc["provenance"]["seed"] = config.seed;
  doc["provenance"]["input_hash"] = fnv1a64(raw_text.str());
  emit(opt, dump_json(doc), out);
  return report.verdict() == Verdict::Pass ? kSuccess : kStudyFailed;
}

}  // namespace

nlohmann::ordered_json result_document(const std::string& command) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["k"] = nullptr;
  doc["n"] = nullptr;
  doc["censored"] = nullptr;
  doc["cifs"] = {{"unrestricted", nullptr}, {"restricted", nullptr}};
  doc["test"] = nullptr;
  doc["bands"] = nullptr;
  doc["study"] = nullptr;
  doc["provenance"] = {{"seed", nullptr}, {"version", kVersion}, {"input_hash", nullptr}};
  return doc;
}

nlohmann::ordered_json to_json(const CifSet& cifs) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (int j = 1; j <= cifs.k; ++j) {
    nlohmann::ordered_json row;
    row["cause"] = j;
    row["knots"] = cifs.cif(j).knots();
    row["values"] = cifs.cif(j).values();
    arr.push_back(std::move(row));
  }
  return arr;
}

nlohmann::ordered_json to_json(const TestReport& report) {
  nlohmann::ordered_json j;
  j["statistic"] = report.statistic;
  j["p_value"] = report.p_value;
  j["censored"] = report.censored;
  j["argmax_time"] = report.argmax;
  j["argmax_j"] = report.argmax_j;
  nlohmann::ordered_json subs = nlohmann::ordered_json::array();
  for (const auto& s : report.subtests) {
    nlohmann::ordered_json row;
    row["j"] = s.j;
    row["c_j"] = subtest_weight(report.k, s.j);
    row["statistic"] = s.statistic;
    row["argmax_time"] = s.argmax;
    subs.push_back(std::move(row));
  }
  j["subtests"] = std::move(subs);
  return j;
}

nlohmann::ordered_json to_json(const Band& raw, const Band& tightened, const CifSet& restricted) {
  nlohmann::ordered_json j;
  j["level"] = raw.level;
  j["times"] = raw.times;
  nlohmann::ordered_json causes = nlohmann::ordered_json::array();
  auto row_of = [](const Eigen::MatrixXd& m, int i) {
    const Eigen::VectorXd r = m.row(i).transpose();
    return std::vector<double>(r.begin(), r.end());
  };
  for (int i = 0; i < raw.k(); ++i) {
    std::vector<double> estimate;
    for (double t : raw.times) estimate.push_back(restricted.cif(i + 1)(t));
    nlohmann::ordered_json row;
    row["cause"] = i + 1;
    row["estimate"] = estimate;
    row["lower"] = row_of(raw.lower, i);
    row["upper"] = row_of(raw.upper, i);
    row["lower_tightened"] = row_of(tightened.lower, i);
    row["upper_tightened"] = row_of(tightened.upper, i);
    causes.push_back(std::move(row));
  }
  j["causes"] = std::move(causes);
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Order-restricted estimation and testing of cumulative incidence functions", "ordcif"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options opt;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", opt.input, "CSV file with header 'time,cause'")->required();
    sub->add_option("--k", opt.k, "Number of causes (default: largest cause code)");
    sub->add_option("-o,--output", opt.output, "Write the result here instead of stdout");
  };

  auto* estimate = app.add_subcommand("estimate", "Estimate unrestricted and restricted CIFs");
  add_input(estimate);
  auto* r_flag = estimate->add_flag("--restricted", opt.only_restricted, "Only the restricted estimates");
  estimate->add_flag("--unrestricted", opt.only_unrestricted, "Only the unrestricted estimates")->excludes(r_flag);
  estimate->add_option("--out", opt.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  estimate->add_option("--plot", opt.plot, "Write an SVG plot of the estimates");

  auto* test = app.add_subcommand("test", "Test equality of the CIFs against the ordered alternative");
  add_input(test);

  auto* ci = app.add_subcommand("ci", "Pointwise intervals for the restricted CIFs, tightened across causes");
  add_input(ci);
  ci->add_option("--level", opt.level, "Confidence level in (0, 1)");
  ci->add_option("--times", opt.times, "Evaluation times (default: every observed time)");

  auto* simulate = app.add_subcommand("simulate", "Run a seeded Monte Carlo study");
  simulate->add_option("--study", opt.study, "Study name")
      ->required()
      ->check(CLI::IsMember({"consistency", "null", "dominance", "fixed-t", "covariance"}));
  simulate->add_option("--config", opt.config, "JSON configuration file")->required();
  simulate->add_option("--seed", opt.seed, "Override the configured seed");
  simulate->add_option("-o,--output", opt.output, "Write the result here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (estimate->parsed()) return cmd_estimate(opt, out);
    if (test->parsed()) return cmd_test(opt, out, err);
    if (ci->parsed()) return cmd_ci(opt, out);
    if (simulate->parsed()) return cmd_simulate(opt, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace ordcif::cli
