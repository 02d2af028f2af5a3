#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pgchoice/pgchoice.hpp"

namespace fs = std::filesystem;
using namespace pgchoice;

namespace {

struct JobSpec {
  std::string data;
  std::string outcome;
  std::vector<std::string> covariates;
  std::string trials;
  std::string intercept;
  bool no_intercept = false;
  std::string type = "logit";
  int draws = 1000;
  int burnin = 1000;
  double a0 = 4.0;
  double g0 = 100.0;
  std::string baseline;
  std::uint64_t seed = 42;
  std::vector<double> q{0.025, 0.975};
  bool no_boost = false;
  bool verbose = false;
  std::string out = "out";
  std::vector<std::string> formats{"md"};
  int digits = 2;
  bool esr = false;
  std::vector<std::string> names;
  std::vector<std::string> include;
  std::string caption;
  bool sort = false;
  bool svg = false;
};

std::string join(const std::vector<std::string>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void status(const JobSpec& job, const char* msg) {
  if (job.verbose) std::cerr << msg << '\n';
}

int run_fit(const JobSpec& job) {
  const ModelType type = parse_model_type(job.type);
  if (job.q.size() != 2) throw InvalidParameter("--q needs two values");
  const std::pair<double, double> q{job.q[0], job.q[1]};
  check_quantiles(q);
  std::vector<TableFormat> formats;
  for (const auto& f : job.formats) formats.push_back(parse_table_format(f));

  status(job, "Checking data & inputs ...");
  LoadSpec spec;
  spec.outcome = job.outcome;
  spec.covariates = job.covariates;
  if (!job.trials.empty()) spec.trials = job.trials;
  if (!job.intercept.empty()) spec.intercept = job.intercept;
  spec.add_intercept = !job.no_intercept;
  spec.detect_intercept = !job.no_intercept;
  if (!job.baseline.empty()) spec.baseline = job.baseline;
  const LoadedData loaded = load_dataset(job.data, spec, type);

  PriorSpec prior;
  prior.a0 = job.a0;
  prior.g0 = job.g0;
  prior.intercept = loaded.intercept;
  SamplerConfig config;
  config.draws = job.draws;
  config.burnin = job.burnin;
  config.boost = !job.no_boost;
  config.seed = job.seed;
  config.verbose = job.verbose;

  status(job, "Initializing Gibbs Sampler ...");
  const FitResult f = fit(loaded.data, type, prior, config);
  status(job, "Sampling successful!");
  status(job, "Saving output ...");

  SummaryOptions so;
  so.q = q;
  so.digits = job.digits;
  so.names = job.names;
  so.include = job.include;
  const SummaryTable table = summary(f, so);

  fs::create_directories(job.out);
  const fs::path out = job.out;
  atomic_write(out / "draws.csv", draws_csv(f.draws));
  for (TableFormat fmt : formats) {
    std::string body = render_summary(table, fmt, job.caption);
    if (fmt == TableFormat::Markdown) body = results_header(f) + body;
    atomic_write(out / ("summary." + std::string(file_extension(fmt))), body);
  }
  atomic_write(out / "diag.csv", diag_csv(diag(f), job.esr));
  CoefPlotOptions po;
  po.q = q;
  po.names = job.names;
  po.include = job.include;
  po.sort = job.sort;
  const auto plot_rows = emit_coefplot(f, po);
  atomic_write(out / "coefplot.csv", coefplot_csv(plot_rows));
  if (job.svg) atomic_write(out / "coefplot.svg", coefplot_svg(plot_rows));

  const LogLik ll = loglik(f);
  atomic_write(out / "manifest.txt",
               manifest_text({{"version", kVersion},
                              {"data", job.data},
                              {"type", std::string(to_string(type))},
                              {"outcome", job.outcome},
                              {"covariates", join(f.coef_names)},
                              {"trials", job.trials},
                              {"intercept_column", f.coef_names[static_cast<std::size_t>(prior.intercept)]},
                              {"baseline", f.baseline},
                              {"a0", num(prior.a0)},
                              {"g0", num(prior.g0)},
                              {"draws", std::to_string(config.draws)},
                              {"burnin", std::to_string(config.burnin)},
                              {"boost", config.boost ? "true" : "false"},
                              {"seed", std::to_string(config.seed)},
                              {"q", num(q.first) + "," + num(q.second)},
                              {"digits", std::to_string(job.digits)},
                              {"N", std::to_string(f.data.rows())},
                              {"loglik", num(ll.value)},
                              {"loglik_df", std::to_string(ll.df)},
                              {"runtime_seconds", num(f.runtime_seconds)}}));

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", f.runtime_seconds);
  status(job, ("Finished! Sampling took " + std::string(buf) + " seconds.").c_str());
  std::cout << results_header(f, f.runtime_seconds) << render_markdown(table, job.caption);
  std::snprintf(buf, sizeof buf, "%.3f", ll.value);
  std::cout << "\n'log Lik.' " << buf << " (df=" << ll.df << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian probit, logit, multinomial logit and binomial logit estimation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  JobSpec job;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate a model from a CSV file");
  fit_cmd->add_option("--data", job.data, "input CSV with a header row")->required();
  fit_cmd->add_option("--outcome", job.outcome, "outcome column")->required();
  fit_cmd->add_option("--covariates", job.covariates, "covariate columns (default: all others)")->delimiter(',');
  fit_cmd->add_option("--trials", job.trials, "trial-count column (binomial)");
  fit_cmd->add_option("--intercept", job.intercept, "column holding the intercept");
  fit_cmd->add_flag("--no-intercept", job.no_intercept, "neither detect nor prepend an intercept");
  fit_cmd->add_option("--type", job.type, "probit | logit | mnl | binomial")->capture_default_str();
  fit_cmd->add_option("--draws", job.draws, "saved draws")->capture_default_str();
  fit_cmd->add_option("--burnin", job.burnin, "burn-in iterations")->capture_default_str();
  fit_cmd->add_option("--a0", job.a0, "prior variance of the coefficients")->capture_default_str();
  fit_cmd->add_option("--g0", job.g0, "extra prior variance of the intercept")->capture_default_str();
  fit_cmd->add_option("--baseline", job.baseline, "MNL baseline category (default: most frequent)");
  fit_cmd->add_option("--seed", job.seed, "random seed")->capture_default_str();
  fit_cmd->add_option("--q", job.q, "interval quantiles lo,hi")->delimiter(',')->expected(2)->capture_default_str();
  fit_cmd->add_flag("--no-boost", job.no_boost, "disable the boosting moves");
  fit_cmd->add_flag("--verbose", job.verbose, "progress on stderr");
  fit_cmd->add_option("--out", job.out, "output directory")->capture_default_str();
  fit_cmd->add_option("--format", job.formats, "summary formats: md, tex, csv")->delimiter(',');
  fit_cmd->add_option("--digits", job.digits, "digits in summary tables")->capture_default_str();
  fit_cmd->add_flag("--esr", job.esr, "write effective sampling rates to diag.csv");
  fit_cmd->add_option("--names", job.names, "display names for the design columns")->delimiter(',');
  fit_cmd->add_option("--include", job.include, "subset of names to report")->delimiter(',');
  fit_cmd->add_option("--caption", job.caption, "table caption");
  fit_cmd->add_flag("--sort", job.sort, "order coefficient-plot rows by |mean|");
  fit_cmd->add_flag("--svg", job.svg, "also write coefplot.svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 1;
  }

  try {
    return run_fit(job);
  } catch (const Error& e) {
    std::cerr << "error: " << e.error_class() << ": " << e.what() << '\n';
    return e.numerical() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 2;
  }
}
