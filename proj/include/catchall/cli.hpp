#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catchall/arma.hpp"
#include "catchall/core.hpp"
#include "catchall/garch.hpp"
#include "catchall/ingest.hpp"
#include "catchall/simulate.hpp"

namespace catchall::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kSuccess = 0, kNotConverged = 1, kUsage = 2 };

/// Flags shared by every command that reads a data file.
struct DataOptions {
  std::string path;
  std::string data_format = "csv";
  std::size_t label_column = 0;
  std::size_t value_column = 1;
  std::optional<bool> has_header;
  bool prices = false;
  std::string convention = "log-percent";
  bool center = false;
  std::optional<long long> from_year;
  std::optional<long long> to_year;
};

struct OutputOptions {
  std::string format = "json";
  std::string path;
};

namespace detail {

inline std::string format_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// GARCH coefficients below 1e-8 are printed as 0.
inline double display(const std::string& name, double v) {
  if ((name == "alpha" || name == "beta") && v < 1e-8) return 0.0;
  return v;
}

inline Json report_json(const OptimizerReport& r) {
  Json j;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  j["final_loss"] = r.final_loss;
  j["restarts_used"] = r.restarts_used;
  j["boundary_suspect"] = r.boundary_suspect;
  return j;
}

inline Json named(const std::vector<std::string>& names, const std::vector<double>& values, bool clamp = true) {
  Json j = Json::object();
  for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = clamp ? display(names[i], values[i]) : values[i];
  return j;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = catchall::detail::parse_number(item);
    if (!v) throw Error(ErrorKind::Usage, flag + ": '" + item + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

inline ingest::ReturnConvention convention(const std::string& name) {
  if (name == "log") return ingest::ReturnConvention::Log;
  if (name == "simple") return ingest::ReturnConvention::Simple;
  return ingest::ReturnConvention::LogPercent;
}

inline Series load_data(const DataOptions& d) {
  ingest::DataSourceFormat format;
  if (d.data_format == "giss") format = ingest::GissAnnual{};
  else if (d.data_format == "noaa") format = ingest::NoaaAnnual{};
  else format = ingest::GenericCsv{d.label_column, d.value_column, d.has_header, ','};
  Series s = ingest::load(d.path, format, ingest::YearRange{d.from_year, d.to_year});
  if (d.prices) s = ingest::to_returns(s, convention(d.convention));
  if (d.center) s = ingest::center(s);
  return s;
}

inline void add_data_options(CLI::App& cmd, DataOptions& d) {
  cmd.add_option("--data", d.path, "Input data file")->required();
  cmd.add_option("--data-format", d.data_format, "Input layout")->check(CLI::IsMember({"csv", "giss", "noaa"}));
  cmd.add_option("--label-column", d.label_column, "CSV label column (0-based)");
  cmd.add_option("--value-column", d.value_column, "CSV value column (0-based)");
  cmd.add_flag("--header,!--no-header", d.has_header, "CSV has a header row (default: detect)");
  cmd.add_flag("--prices", d.prices, "Data are prices; convert to returns");
  cmd.add_option("--convention", d.convention, "Return convention for --prices")
      ->check(CLI::IsMember({"log-percent", "log", "simple"}));
  cmd.add_flag("--center", d.center, "Subtract the sample mean after loading");
  cmd.add_option("--from-year", d.from_year, "First year to keep");
  cmd.add_option("--to-year", d.to_year, "Last year to keep");
}

inline void add_output_options(CLI::App& cmd, OutputOptions& o) {
  cmd.add_option("--format", o.format, "Result document format")->check(CLI::IsMember({"json", "csv"}));
  cmd.add_option("--out", o.path, "Write the result here instead of standard output");
}

inline void emit(const OutputOptions& o, const std::string& text, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw Error(ErrorKind::FileNotFound, "cannot write: " + o.path);
  f << text;
}

inline std::string csv_row(int m, const std::vector<double>& values, double loss, const std::vector<double>& tail) {
  std::string row = std::to_string(m);
  for (double v : values) row += "," + format_g(v, 6);
  row += "," + format_g(loss, 6);
  for (double v : tail) row += "," + format_g(v, 6);
  return row + "\n";
}

inline std::vector<double> displayed(const std::vector<std::string>& names, std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = display(names[i], values[i]);
  return values;
}

inline std::string fit_csv(int m, const std::vector<std::string>& names, const std::vector<double>& values, double loss,
                           const OptimizerReport& r) {
  std::string header = "m";
  for (const auto& n : names) header += "," + n;
  header += ",loss,converged,iterations,restarts_used\n";
  return header + csv_row(m, displayed(names, values), loss,
                          {r.converged ? 1.0 : 0.0, static_cast<double>(r.iterations),
                           static_cast<double>(r.restarts_used)});
}

template <class Model>
std::string sweep_csv(const SweepResult<Model>& sweep) {
  const auto names = sweep.entries.front().model.names();
  std::string text = "m";
  for (const auto& n : names) text += "," + n;
  text += ",loss";
  for (const auto& n : names) text += ",delta_" + n;
  text += "\n";
  for (const auto& e : sweep.entries) text += csv_row(e.m, displayed(names, e.model.values()), e.loss, e.delta_from_m1);
  return text;
}

template <class Model>
Json trajectory_json(const SweepResult<Model>& sweep) {
  Json rows = Json::array();
  for (const auto& e : sweep.entries) {
    const auto names = e.model.names();
    Json row;
    row["m"] = e.m;
    row["params"] = named(names, e.model.values());
    row["loss"] = e.loss;
    row["delta_from_m1"] = named(names, e.delta_from_m1, false);
    row["report"] = report_json(e.report);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline arma::ArmaKind arma_kind(const std::string& name) {
  return name == "arima111" ? arma::ArmaKind::Arima111 : arma::ArmaKind::TrendArma11;
}

inline std::optional<arma::ArmaModel> arma_init(const std::string& text, arma::ArmaKind kind) {
  if (text.empty()) return std::nullopt;
  const auto v = parse_list(text, "--init");
  if (kind == arma::ArmaKind::Arima111) {
    if (v.size() != 2) throw Error(ErrorKind::Usage, "--init for arima111 needs phi,theta");
    return arma::ArmaModel::arima111(v[0], v[1]);
  }
  if (v.size() != 4) throw Error(ErrorKind::Usage, "--init for trend-arma11 needs c0,c1,phi,theta");
  return arma::ArmaModel::trend_arma11(v[0], v[1], v[2], v[3]);
}

inline std::optional<garch::GarchParams> garch_init(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = parse_list(text, "--init");
  if (v.size() != 3) throw Error(ErrorKind::Usage, "--init for garch needs omega,alpha,beta");
  return garch::GarchParams{v[0], v[1], v[2]};
}

struct FitGarchArgs {
  DataOptions data;
  OutputOptions output;
  std::string method = "gaussian";
  int m = 1;
  std::string weights;
  std::string init;
  bool no_series = false;
};

inline int fit_garch(const FitGarchArgs& a, std::ostream& out) {
  const Series returns = load_data(a.data);
  garch::Method method = garch::Gaussian{};
  int m = 1;
  if (a.method == "catchall") {
    m = a.m;
    method = a.weights.empty() ? CatchAllConfig(m) : CatchAllConfig(m, parse_list(a.weights, "--weights"));
  }
  const garch::GarchFit f = garch::fit(returns, method, garch_init(a.init));
  const auto names = garch::GarchParams::names();

  if (a.output.format == "csv") {
    emit(a.output, fit_csv(m, names, f.params.values(), f.loss, f.report), out);
  } else {
    Json j;
    j["command"] = "fit-garch";
    j["model"] = "garch";
    Json method_json;
    method_json["name"] = a.method;
    method_json["m"] = m;
    if (const auto* cfg = std::get_if<CatchAllConfig>(&f.method)) method_json["weights"] = cfg->weights();
    j["method"] = method_json;
    j["params"] = named(names, f.params.values());
    j["loss"] = f.loss;
    j["report"] = report_json(f.report);
    j["n"] = returns.size();
    if (!a.no_series) {
      Json series = Json::array();
      for (std::size_t t = 0; t < returns.size(); ++t)
        series.push_back(
            Json{{"label", returns.labels()[t]}, {"value", returns[t]}, {"variance", f.one_step_variances[t]}});
      j["series"] = std::move(series);
    }
    emit(a.output, dump(j), out);
  }
  return f.report.converged ? kSuccess : kNotConverged;
}

struct FitArmaArgs {
  DataOptions data;
  OutputOptions output;
  std::string model = "trend-arma11";
  int m = 1;
  std::string init;
};

inline int fit_arma(const FitArmaArgs& a, std::ostream& out) {
  const Series series = load_data(a.data);
  const auto kind = arma_kind(a.model);
  const arma::ArmaFit f = arma::fit(series, kind, a.m, arma_init(a.init, kind));
  const auto names = f.model.names();

  if (a.output.format == "csv") {
    emit(a.output, fit_csv(a.m, names, f.model.values(), f.loss, f.report), out);
  } else {
    Json j;
    j["command"] = "fit-arma";
    j["model"] = a.model;
    j["m"] = a.m;
    j["params"] = named(names, f.model.values());
    j["loss"] = f.loss;
    j["report"] = report_json(f.report);
    j["n"] = series.size();
    j["psi_weights"] = arma::psi_weights(f.model, static_cast<std::size_t>(a.m)).coeffs;
    j["horizon_weights"] = arma::harmonic_weights(f.model, a.m);
    emit(a.output, dump(j), out);
  }
  return f.report.converged ? kSuccess : kNotConverged;
}

struct SweepArgs {
  DataOptions data;
  OutputOptions output;
  std::string model = "garch";
  int m_max = 30;
  std::string init;
};

template <class Model>
int write_sweep(const SweepArgs& a, const SweepResult<Model>& s, std::size_t n, std::ostream& out) {
  bool converged = true;
  for (const auto& e : s.entries) converged = converged && e.report.converged;
  if (a.output.format == "csv") {
    emit(a.output, sweep_csv(s), out);
  } else {
    const auto& last = s.entries.back();
    Json j;
    j["command"] = "sweep";
    j["model"] = a.model;
    j["m_max"] = a.m_max;
    j["params"] = named(last.model.names(), last.model.values());
    j["loss"] = last.loss;
    j["report"] = report_json(last.report);
    j["n"] = n;
    j["trajectory"] = trajectory_json(s);
    emit(a.output, dump(j), out);
  }
  return converged ? kSuccess : kNotConverged;
}

inline int sweep(const SweepArgs& a, std::ostream& out) {
  const Series series = load_data(a.data);
  if (a.model == "garch") return write_sweep(a, garch::sweep(series, a.m_max, garch_init(a.init)), series.size(), out);
  const auto kind = arma_kind(a.model);
  return write_sweep(a, arma::sweep(series, kind, a.m_max, arma_init(a.init, kind)), series.size(), out);
}

struct SimulateArgs {
  std::string model;
  std::string params;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t burn_in = 500;
  double sigma = 1.0;
  std::string out;
};

inline int simulate(const SimulateArgs& a, std::ostream& out) {
  const auto v = parse_list(a.params, "--params");
  catchall::simulate::SimSpec spec;
  if (a.model == "garch") {
    if (v.size() != 3) throw Error(ErrorKind::Usage, "--params for garch needs omega,alpha,beta");
    spec.model = garch::GarchParams{v[0], v[1], v[2]};
  } else if (a.model == "arima111") {
    if (v.size() != 2) throw Error(ErrorKind::Usage, "--params for arima111 needs phi,theta");
    spec.model = arma::ArmaModel::arima111(v[0], v[1]);
  } else {
    if (v.size() != 4) throw Error(ErrorKind::Usage, "--params for trend-arma11 needs c0,c1,phi,theta");
    spec.model = arma::ArmaModel::trend_arma11(v[0], v[1], v[2], v[3]);
  }
  spec.length = a.n;
  spec.burn_in = a.burn_in;
  spec.seed = a.seed;
  spec.innovation_scale = a.sigma;
  const Series s = catchall::simulate::simulate(spec);

  std::string text = "t,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) text += s.labels()[i] + "," + format_g(s[i], 17) + "\n";
  emit(OutputOptions{"csv", a.out}, text, out);
  return kSuccess;
}

inline void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace detail

/// Runs one command line (args[0] is the program name). Result documents go to
/// `out` unless --out is given; failures are reported as one JSON line on `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-horizon catch-all estimation for GARCH(1,1) and ARIMA models", "catchall"};
  app.require_subcommand(1);

  detail::FitGarchArgs fg;
  auto* fit_garch = app.add_subcommand("fit-garch", "Fit GARCH(1,1) by Gaussian QMLE or catch-all matching");
  detail::add_data_options(*fit_garch, fg.data);
  detail::add_output_options(*fit_garch, fg.output);
  fit_garch->add_option("--method", fg.method, "Estimation method")->check(CLI::IsMember({"gaussian", "catchall"}));
  fit_garch->add_option("--m", fg.m, "Horizon count for catch-all")->check(CLI::PositiveNumber);
  fit_garch->add_option("--weights", fg.weights, "Comma-separated horizon weights (default equal)");
  fit_garch->add_option("--init", fg.init, "Starting omega,alpha,beta");
  fit_garch->add_flag("--no-series", fg.no_series, "Omit the fitted variance series");

  detail::FitArmaArgs fa;
  auto* fit_arma = app.add_subcommand("fit-arma", "Fit ARIMA(1,1,1) or linear trend + ARMA(1,1)");
  detail::add_data_options(*fit_arma, fa.data);
  detail::add_output_options(*fit_arma, fa.output);
  fit_arma->add_option("--model", fa.model, "Model")->required()->check(CLI::IsMember({"arima111", "trend-arma11"}));
  fit_arma->add_option("--m", fa.m, "Horizon count")->check(CLI::PositiveNumber);
  fit_arma->add_option("--init", fa.init, "Starting phi,theta or c0,c1,phi,theta");

  detail::SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Warm-started catch-all fits for m = 1..m-max");
  detail::add_data_options(*sweep, sw.data);
  detail::add_output_options(*sweep, sw.output);
  sweep->add_option("--model", sw.model, "Model")->check(CLI::IsMember({"garch", "arima111", "trend-arma11"}));
  sweep->add_option("--m-max", sw.m_max, "Largest horizon count")->check(CLI::PositiveNumber);
  sweep->add_option("--init", sw.init, "Starting parameters for m = 1");

  detail::SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Write a simulated series as CSV");
  simulate->add_option("--model", sim.model, "Model")->required()->check(
      CLI::IsMember({"garch", "arima111", "trend-arma11"}));
  simulate->add_option("--params", sim.params, "omega,alpha,beta | phi,theta | c0,c1,phi,theta")->required();
  simulate->add_option("--n", sim.n, "Number of observations")->required()->check(CLI::Range(2ul, 100000000ul));
  simulate->add_option("--seed", sim.seed, "64-bit seed");
  simulate->add_option("--burn-in", sim.burn_in, "Discarded initial samples");
  simulate->add_option("--sigma", sim.sigma, "Innovation standard deviation (ARMA family)")->check(
      CLI::PositiveNumber);
  simulate->add_option("--out", sim.out, "Output file (default standard output)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    for (auto& c : message)
      if (c == '\n') c = ' ';
    detail::print_error(err, "Usage", message);
    return kUsage;
  }

  try {
    if (*fit_garch) return detail::fit_garch(fg, out);
    if (*fit_arma) return detail::fit_arma(fa, out);
    if (*sweep) return detail::sweep(sw, out);
    return detail::simulate(sim, out);
  } catch (const Error& e) {
    detail::print_error(err, to_string(e.kind()), e.what());
    return e.kind() == ErrorKind::OptimizerDiverged ? kNotConverged : kUsage;
  } catch (const std::exception& e) {
    detail::print_error(err, "Internal", e.what());
    return kUsage;
  }
}

}  // namespace catchall::cli
