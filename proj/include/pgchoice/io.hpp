#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "pgchoice/diagnostics.hpp"
#include "pgchoice/error.hpp"
#include "pgchoice/model.hpp"

namespace pgchoice {

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line;  // 1-based source line of each row

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == name) return j;
    return std::nullopt;
  }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& s, int line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < s.size() && s[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("parse-error", "line " + std::to_string(line_no) + ": unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline bool missing_cell(const std::string& s) { return s.empty() || s == "NA" || s == "NaN" || s == "nan"; }

inline std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last) return std::nullopt;
  return v;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline CsvTable parse_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (t.header.empty()) {
      if (line.empty()) continue;
      for (auto& h : detail::split_csv_line(line, line_no)) t.header.push_back(detail::trim(h));
      continue;
    }
    if (line.empty()) continue;
    auto cells = detail::split_csv_line(line, line_no);
    if (cells.size() != t.header.size())
      throw DataError("parse-error", "line " + std::to_string(line_no) + ": " + std::to_string(cells.size()) +
                                         " fields, header has " + std::to_string(t.header.size()));
    for (auto& c : cells) c = detail::trim(std::move(c));
    t.rows.push_back(std::move(cells));
    t.line.push_back(line_no);
  }
  if (t.header.empty()) throw DataError("parse-error", "empty CSV input");
  return t;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("io-error", "cannot open '" + path.string() + "'");
  return parse_csv(in);
}

// Column selection for load_dataset. Empty covariates means every column other
// than outcome and trials. The intercept is the named column, else the first
// selected column of all ones; failing both a column of ones named "Intercept"
// is prepended, unless add_intercept is false.
struct LoadSpec {
  std::string outcome;
  std::vector<std::string> covariates;
  std::optional<std::string> trials;
  std::optional<std::string> intercept;
  bool detect_intercept = true;
  bool add_intercept = true;
  std::optional<std::string> baseline;
};

struct LoadedData {
  Dataset data;
  Eigen::Index intercept = 0;  // 0-based design column
};

inline LoadedData load_dataset(const CsvTable& t, const LoadSpec& spec, ModelType type) {
  auto need = [&](const std::string& name) {
    const auto j = t.column(name);
    if (!j) throw DataError("missing-column", "column '" + name + "' not found");
    return *j;
  };
  const std::size_t y_col = need(spec.outcome);
  std::optional<std::size_t> n_col;
  if (spec.trials) n_col = need(*spec.trials);
  else if (type == ModelType::Binomial) throw DataError("missing-trials", "binomial model needs --trials");

  std::vector<std::string> names = spec.covariates;
  if (names.empty())
    for (const auto& h : t.header)
      if (h != spec.outcome && (!spec.trials || h != *spec.trials)) names.push_back(h);
  std::optional<std::string> intercept = spec.intercept;
  if (intercept && std::find(names.begin(), names.end(), *intercept) == names.end())
    names.insert(names.begin(), *intercept);

  std::vector<std::size_t> cols;
  for (const auto& nm : names) cols.push_back(need(nm));

  if (!intercept && spec.detect_intercept && !t.rows.empty())
    for (std::size_t c = 0; c < cols.size() && !intercept; ++c)
      if (std::all_of(t.rows.begin(), t.rows.end(),
                      [&](const auto& row) { return detail::parse_double(row[cols[c]]) == 1.0; }))
        intercept = names[c];

  LoadedData out;
  Dataset& d = out.data;
  const bool prepend = !intercept && spec.add_intercept;
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  const auto p = static_cast<Eigen::Index>(cols.size()) + (prepend ? 1 : 0);
  d.X.resize(n, p);
  if (prepend) {
    d.X.col(0).setOnes();
    d.covariate_names.push_back("Intercept");
  }
  for (const auto& nm : names) d.covariate_names.push_back(nm);
  if (intercept) out.intercept = std::find(names.begin(), names.end(), *intercept) - names.begin();
  d.baseline = spec.baseline;

  if (type != ModelType::Mnl) d.y.resize(n);
  if (n_col) d.trials = Eigen::VectorXd(n);
  auto number = [&](std::size_t i, std::size_t j) {
    const std::string& cell = t.rows[i][j];
    const std::string where = "line " + std::to_string(t.line[i]) + ", column '" + t.header[j] + "'";
    if (detail::missing_cell(cell)) throw DataError("missing-value", where + " is missing");
    const auto v = detail::parse_double(cell);
    if (!v) throw DataError("parse-error", where + ": '" + cell + "' is not a number");
    return *v;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (std::size_t c = 0; c < cols.size(); ++c)
      d.X(i, static_cast<Eigen::Index>(c) + (prepend ? 1 : 0)) = number(ui, cols[c]);
    if (type == ModelType::Mnl) {
      const std::string& cell = t.rows[ui][y_col];
      if (detail::missing_cell(cell))
        throw DataError("missing-value", "line " + std::to_string(t.line[ui]) + ", column '" + spec.outcome +
                                             "' is missing");
      d.labels.push_back(cell);
    } else {
      d.y(i) = number(ui, y_col);
    }
    if (n_col) (*d.trials)(i) = number(ui, *n_col);
  }
  return out;
}

inline LoadedData load_dataset(const std::filesystem::path& path, const LoadSpec& spec, ModelType type) {
  return load_dataset(read_csv(path), spec, type);
}

// ---------------------------------------------------------------------------
// Number formatting

inline std::string format_fixed(double v, int digits) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline std::string format_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string quantile_label(double q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "Q%g", 100.0 * q);
  return buf;
}

inline std::string interval_label(std::pair<double, double> q) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g%% CI excl. 0", std::round(1e6 * 100.0 * (q.second - q.first)) / 1e6);
  return buf;
}

// ---------------------------------------------------------------------------
// Summary tables

enum class TableFormat { Markdown, Latex, Csv };

inline TableFormat parse_table_format(std::string_view s) {
  if (s == "md" || s == "markdown") return TableFormat::Markdown;
  if (s == "tex" || s == "latex") return TableFormat::Latex;
  if (s == "csv") return TableFormat::Csv;
  throw InvalidParameter("unknown table format '" + std::string(s) + "'");
}

inline std::string_view file_extension(TableFormat f) {
  switch (f) {
    case TableFormat::Markdown: return "md";
    case TableFormat::Latex: return "tex";
    case TableFormat::Csv: return "csv";
  }
  return "txt";
}

namespace detail {

enum class Align { Left, Right, Center };

inline std::string pad(const std::string& s, std::size_t w, Align a) {
  if (s.size() >= w) return s;
  const std::size_t gap = w - s.size();
  switch (a) {
    case Align::Left: return s + std::string(gap, ' ');
    case Align::Right: return std::string(gap, ' ') + s;
    case Align::Center: return std::string(gap / 2, ' ') + s + std::string(gap - gap / 2, ' ');
  }
  return s;
}

inline std::string latex_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '%' || c == '&' || c == '#' || c == '$' || c == '{' || c == '}') out += '\\';
    out += c;
  }
  return out;
}

// Rendered cells per line, including MNL group headers and spacer lines.
struct DisplayRow {
  std::vector<std::string> cells;
  bool group = false;
  bool spacer = false;
};

inline std::vector<DisplayRow> display_rows(const SummaryTable& t) {
  std::vector<DisplayRow> out;
  std::string current;
  bool first = true;
  for (const auto& r : t.rows) {
    if (t.type == ModelType::Mnl && (first || r.category != current)) {
      if (!first) out.push_back({std::vector<std::string>(6), false, true});
      std::vector<std::string> g(6);
      g[0] = "Category '" + r.category + "'";
      out.push_back({std::move(g), true, false});
      current = r.category;
    }
    first = false;
    out.push_back({{r.name, format_fixed(r.mean, t.digits), format_fixed(r.sd, t.digits),
                    format_fixed(r.lower, t.digits), format_fixed(r.upper, t.digits),
                    r.excludes_zero ? "*" : ""},
                   false,
                   false});
  }
  return out;
}

inline std::vector<std::string> table_header(const SummaryTable& t) {
  return {"", "Mean", "SD", quantile_label(t.q.first), quantile_label(t.q.second), interval_label(t.q)};
}

}  // namespace detail

inline std::string render_markdown(const SummaryTable& t, const std::string& caption = {}) {
  using detail::Align;
  const auto head = detail::table_header(t);
  const auto rows = detail::display_rows(t);
  const Align align[6] = {Align::Left, Align::Right, Align::Right, Align::Right, Align::Right, Align::Center};
  std::size_t w[6];
  for (int c = 0; c < 6; ++c) {
    std::size_t m = head[c].size();
    for (const auto& r : rows) m = std::max(m, r.cells[c].size());
    w[c] = m + (align[c] == Align::Center ? 2 : 1);
  }
  std::ostringstream os;
  if (!caption.empty()) os << "Table: " << caption << "\n\n";
  auto line = [&](const std::vector<std::string>& cells) {
    os << '|';
    for (int c = 0; c < 6; ++c) os << detail::pad(cells[c], w[c], align[c]) << '|';
    os << '\n';
  };
  line(head);
  os << '|';
  for (int c = 0; c < 6; ++c) {
    switch (align[c]) {
      case Align::Left: os << ':' << std::string(w[c] - 1, '-'); break;
      case Align::Right: os << std::string(w[c] - 1, '-') << ':'; break;
      case Align::Center: os << ':' << std::string(w[c] - 2, '-') << ':'; break;
    }
    os << '|';
  }
  os << '\n';
  for (const auto& r : rows) line(r.cells);
  return os.str();
}

inline std::string render_latex(const SummaryTable& t, const std::string& caption = {}) {
  const auto head = detail::table_header(t);
  std::ostringstream os;
  os << "\\begin{table}\n\\centering\n";
  if (!caption.empty()) os << "\\caption{" << detail::latex_escape(caption) << "}\n";
  os << "\\begin{tabular}{lrrrrc}\n\\toprule\n";
  for (int c = 0; c < 6; ++c) os << (c ? " & " : "") << detail::latex_escape(head[c]);
  os << "\\\\\n\\midrule\n";
  for (const auto& r : detail::display_rows(t)) {
    if (r.spacer) {
      os << "\\addlinespace\n";
    } else if (r.group) {
      os << "\\multicolumn{6}{l}{" << detail::latex_escape(r.cells[0]) << "}\\\\\n";
    } else {
      for (int c = 0; c < 6; ++c) os << (c ? " & " : "") << detail::latex_escape(r.cells[c]);
      os << "\\\\\n";
    }
  }
  os << "\\bottomrule\n\\end{tabular}\n\\end{table}\n";
  return os.str();
}

inline std::string render_csv(const SummaryTable& t) {
  std::ostringstream os;
  os << "name,category,mean,sd," << quantile_label(t.q.first) << ',' << quantile_label(t.q.second)
     << ",excludes_zero\n";
  for (const auto& r : t.rows)
    os << detail::csv_quote(r.name) << ',' << detail::csv_quote(r.category) << ','
       << format_fixed(r.mean, t.digits) << ',' << format_fixed(r.sd, t.digits) << ','
       << format_fixed(r.lower, t.digits) << ',' << format_fixed(r.upper, t.digits) << ','
       << (r.excludes_zero ? "true" : "false") << '\n';
  return os.str();
}

inline std::string render_summary(const SummaryTable& t, TableFormat format, const std::string& caption = {}) {
  switch (format) {
    case TableFormat::Markdown: return render_markdown(t, caption);
    case TableFormat::Latex: return render_latex(t, caption);
    case TableFormat::Csv: return render_csv(t);
  }
  throw InvalidParameter("unknown table format");
}

inline std::string model_title(ModelType t) {
  switch (t) {
    case ModelType::Probit: return "Probit";
    case ModelType::Logit: return "Logit";
    case ModelType::Mnl: return "Multinomial Logit";
    case ModelType::Binomial: return "Binomial Logit";
  }
  return {};
}

// Console-style header block. The runtime line is included only when given.
inline std::string results_header(const FitResult& f, std::optional<double> runtime = std::nullopt) {
  std::ostringstream os;
  os << "--- Bayesian " << model_title(f.type) << " Results ---\n\n";
  os << "N = " << f.data.rows() << "\n";
  os << "Analysis based on " << f.draws.size() << " posterior draws after a burn-in period of "
     << f.draws.burnin << " iterations.\n";
  if (runtime) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", *runtime);
    os << "MCMC sampling took a total of " << buf << " seconds.\n";
  }
  os << "\n";
  if (f.type == ModelType::Mnl) os << "Category '" << f.baseline << "' is the baseline category.\n\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Draws, diagnostics, coefficient plots

inline std::string draws_csv(const PosteriorDraws& d) {
  std::ostringstream os;
  for (std::size_t j = 0; j < d.names.size(); ++j) os << (j ? "," : "") << detail::csv_quote(d.names[j]);
  os << '\n';
  for (Eigen::Index s = 0; s < d.values.rows(); ++s) {
    for (Eigen::Index j = 0; j < d.values.cols(); ++j) os << (j ? "," : "") << format_exact(d.values(s, j));
    os << '\n';
  }
  return os.str();
}

// Parses draws.csv back into `like`'s layout (type, dimensions, metadata).
inline PosteriorDraws parse_draws_csv(std::istream& in, const PosteriorDraws& like) {
  const CsvTable t = parse_csv(in);
  PosteriorDraws d = like;
  d.names = t.header;
  if (static_cast<Eigen::Index>(t.header.size()) != like.coef_dim * like.blocks)
    throw DataError("parse-error", "draws file has " + std::to_string(t.header.size()) + " columns, expected " +
                                       std::to_string(like.coef_dim * like.blocks));
  d.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(t.header.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.header.size(); ++j) {
      const auto v = detail::parse_double(t.rows[i][j]);
      if (!v) throw DataError("parse-error", "line " + std::to_string(t.line[i]) + ": bad value");
      d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
    }
  return d;
}

// ESR is written as NA unless requested: it depends on wall-clock time.
inline std::string diag_csv(const DiagReport& r, bool with_esr = false) {
  std::ostringstream os;
  os << "name,ess,ie,esr\n";
  auto esr_cell = [&](std::optional<double> v) { return with_esr && v ? format_fixed(*v, 4) : std::string("NA"); };
  for (std::size_t j = 0; j < r.names.size(); ++j)
    os << detail::csv_quote(r.names[j]) << ',' << format_fixed(r.ess[j], 4) << ',' << format_fixed(r.ie[j], 4)
       << ',' << esr_cell(r.esr ? std::optional<double>((*r.esr)[j]) : std::nullopt) << '\n';
  const std::pair<const char*, double MeasureSummary::*> rows[] = {
      {"Min", &MeasureSummary::min}, {"Median", &MeasureSummary::median}, {"Max", &MeasureSummary::max}};
  for (const auto& [label, field] : rows)
    os << label << ',' << format_fixed(r.ess_summary.*field, 4) << ',' << format_fixed(r.ie_summary.*field, 4)
       << ',' << esr_cell(r.esr_summary ? std::optional<double>((*r.esr_summary).*field) : std::nullopt) << '\n';
  return os.str();
}

struct CoefPlotRow {
  std::string name;
  std::string category;
  double mean = 0.0, lower = 0.0, upper = 0.0;
};

struct CoefPlotOptions {
  std::pair<double, double> q{0.025, 0.975};
  std::vector<std::string> names;
  std::vector<std::string> include;
  bool sort = false;
};

// One row per coefficient (grouped per category for MNL). `sort` orders rows by
// |posterior mean|, largest first, within each group.
inline std::vector<CoefPlotRow> emit_coefplot(const FitResult& f, const CoefPlotOptions& opt = {}) {
  SummaryOptions so = summary_options(f, opt.q);
  if (!opt.names.empty()) so.names = opt.names;
  so.include = opt.include;
  const SummaryTable t = posterior_summary(f.draws, so);
  std::vector<CoefPlotRow> rows;
  for (const auto& r : t.rows) rows.push_back({r.name, r.category, r.mean, r.lower, r.upper});
  if (opt.sort) {
    auto begin = rows.begin();
    while (begin != rows.end()) {
      auto end = std::find_if(begin, rows.end(), [&](const CoefPlotRow& r) { return r.category != begin->category; });
      std::stable_sort(begin, end, [](const CoefPlotRow& a, const CoefPlotRow& b) {
        return std::abs(a.mean) > std::abs(b.mean);
      });
      begin = end;
    }
  }
  return rows;
}

inline std::string coefplot_csv(const std::vector<CoefPlotRow>& rows) {
  std::ostringstream os;
  os << "name,category,mean,lower,upper\n";
  for (const auto& r : rows)
    os << detail::csv_quote(r.name) << ',' << detail::csv_quote(r.category) << ',' << format_exact(r.mean) << ','
       << format_exact(r.lower) << ',' << format_exact(r.upper) << '\n';
  return os.str();
}

// Dot-and-whisker chart, one line per row, zero marked by a dashed rule.
inline std::string coefplot_svg(const std::vector<CoefPlotRow>& rows, const std::string& xlab = "Posterior estimate") {
  const double row_h = 24.0, left = 190.0, width = 640.0, plot_w = width - left - 30.0, top = 20.0;
  double lo = 0.0, hi = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.lower);
    hi = std::max(hi, r.upper);
  }
  if (hi - lo <= 0.0) hi = lo + 1.0;
  const double padx = 0.05 * (hi - lo);
  lo -= padx;
  hi += padx;
  auto x = [&](double v) { return left + (v - lo) / (hi - lo) * plot_w; };
  const double height = top + row_h * static_cast<double>(rows.size()) + 50.0;
  char buf[256];
  std::ostringstream os;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" font-family=\"sans-serif\" "
                "font-size=\"12\">\n",
                width, height);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#888\" stroke-dasharray=\"4,3\"/>\n", x(0.0),
                top, x(0.0), top + row_h * static_cast<double>(rows.size()));
  os << buf;
  auto escape = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '&') o += "&amp;";
      else if (c == '<') o += "&lt;";
      else if (c == '>') o += "&gt;";
      else o += c;
    }
    return o;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double y = top + row_h * (static_cast<double>(i) + 0.5);
    const std::string label = r.category.empty() ? r.name : r.name + " (" + r.category + ")";
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">", left - 8.0, y + 4.0);
    os << buf << escape(label) << "</text>\n";
    std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                  x(r.lower), y, x(r.upper), y);
    os << buf;
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\"/>\n", x(r.mean), y);
    os << buf;
  }
  const double axis_y = top + row_h * static_cast<double>(rows.size()) + 6.0;
  std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n", left,
                axis_y, left + plot_w, axis_y);
  os << buf;
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%.2f</text>\n", x(v),
                  axis_y + 16.0, v);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">", left + plot_w / 2.0,
                axis_y + 36.0);
  os << buf << escape(xlab) << "</text>\n</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Files

// Writes via a temporary file in the same directory and renames it into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("io-error", "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw DataError("io-error", "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("io-error", "cannot rename into '" + path.string() + "': " + ec.message());
}

inline std::string manifest_text(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ostringstream os;
  for (const auto& [k, v] : entries) os << k << " = " << v << '\n';
  return os.str();
}

}  // namespace pgchoice
