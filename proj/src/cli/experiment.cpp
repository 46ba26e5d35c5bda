#include "experiment.hpp"

#include <gkq/gkq.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace gkq::cli {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommandNames{{
    {Command::Rule, "rule"},
    {Command::WeightsCompare, "weights-compare"},
    {Command::PositivitySweep, "positivity-sweep"},
    {Command::WceSweep, "wce-sweep"},
    {Command::Integrate, "integrate"},
    {Command::TensorIntegrate, "tensor-integrate"},
    {Command::Constants, "constants"},
}};

const std::vector<double> kSweepLengthScales{0.05, 0.1, 0.2, 0.4, 1.0, 4.0};

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

int to_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw DomainError("not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw DomainError("not an integer: '" + s + "'");
  return v;
}

double to_real(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw DomainError("not a number: '" + s + "'");
  return v;
}

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

Cell flag(bool b) { return Cell(std::int64_t(b ? 1 : 0)); }
Cell integer(long long v) { return Cell(std::int64_t(v)); }

double relative_weight_error(const VectorXd& reference, const VectorXd& approx) {
  return ((reference - approx).array() / reference.array()).matrix().norm();
}

// --- rule ---------------------------------------------------------------

Table cmd_rule(const ExperimentSpec& spec) {
  const auto approx = approx_weights(spec.length_scales[0], spec.n_values[0], spec.alpha);
  Table t;
  t.columns = {"n", "node", "approx_weight", "gh_node", "gh_weight"};
  for (Eigen::Index i = 0; i < approx.size(); ++i) {
    t.add_row({integer(i + 1), approx.nodes()[i], approx.weights()[i],
               approx.gh_source.nodes[i], approx.gh_source.weights[i]});
  }
  return t;
}

// --- weights-compare ------------------------------------------------------

Table cmd_weights_compare(const ExperimentSpec& spec) {
  Table t;
  t.columns = {"ell", "N", "M", "rel_err", "symmetry_proxy", "cutoff"};
  for (double ell : spec.length_scales) {
    const auto basis = basis_from(ell, spec.alpha);
    const int m_eps = machine_precision_truncation(basis);
    for (int n : spec.n_values) {
      const auto approx = approx_weights(basis, n);
      const int m = std::clamp(m_eps, n, kHermiteDegreeGuard);
      VectorXd reference;
      try {
        reference = qr_weights(basis, approx.nodes(), m);
      } catch (const NumericalFailure&) {
        const double nan = std::nan("");
        t.add_row({ell, integer(n), integer(m), nan, nan, flag(true)});
        break;
      }
      const double proxy = std::abs(1.0 - reference[n - 1] / reference[0]);
      const bool cut = !(proxy <= kSymmetryBreakdown);
      t.add_row({ell, integer(n), integer(m), relative_weight_error(reference, approx.weights()),
                 proxy, flag(cut)});
      if (cut) break;
    }
  }
  return t;
}

// --- positivity-sweep -------------------------------------------------------

Table cmd_positivity_sweep(const ExperimentSpec& spec) {
  Table t;
  t.columns = {"ell", "N", "min_weight", "weight_sum", "abs_weight_sum", "sum_error"};
  for (double ell : spec.length_scales) {
    const auto basis = basis_from(ell, spec.alpha);
    for (int n : spec.n_values) {
      const auto approx = approx_weights(basis, n);
      CompensatedSum<double> sum, abs_sum;
      for (Eigen::Index i = 0; i < approx.size(); ++i) {
        sum += approx.weights()[i];
        abs_sum += std::abs(approx.weights()[i]);
      }
      const double s = sum.value();
      t.add_row({ell, integer(n), approx.weights().minCoeff(), s, abs_sum.value(),
                 std::abs(s - 1.0)});
    }
  }
  return t;
}

// --- wce-sweep ----------------------------------------------------------------

struct WceRow {
  double wce = std::nan("");
  double wce_sq = std::nan("");
  double terms[3] = {std::nan(""), std::nan(""), std::nan("")};
  std::optional<double> condition;
  bool reliable = true;
};

WceRow wce_row(const QuadratureRule<double>& rule, double ell) {
  WceRow row;
  try {
    const auto r = worst_case_error(rule, ell);
    row.wce = r.wce;
    row.wce_sq = r.wce_squared;
    row.terms[0] = r.term_mean_mean;
    row.terms[1] = r.term_quadratic;
    row.terms[2] = r.term_cross;
  } catch (const NumericalFailure&) {
    row.reliable = false;
  }
  return row;
}

// Exact kernel weights on the given nodes. Failures stay in the row.
WceRow exact_wce_row(const VectorXd& nodes, double ell) {
  try {
    const auto ex = exact_weights(nodes, ell);
    WceRow row = wce_row(QuadratureRule<double>{nodes, ex.weights, Measure::StandardGaussian}, ell);
    row.condition = ex.condition_estimate;
    row.reliable = row.reliable && ex.reliable;
    return row;
  } catch (const IllConditionedError& e) {
    WceRow row;
    row.condition = e.condition_estimate();
    row.reliable = false;
    return row;
  }
}

Table cmd_wce_sweep(const ExperimentSpec& spec) {
  Table t;
  t.columns = {"ell", "N", "rule", "wce", "wce_sq", "term_mean_mean", "term_quadratic",
               "term_cross", "condition", "reliable"};
  const std::array<std::string, 3> rules{"sghkq", "ukq", "gh"};
  for (double ell : spec.length_scales) {
    const auto basis = basis_from(ell, spec.alpha);
    std::array<bool, 3> active{true, true, true};
    for (int n : spec.n_values) {
      if (std::none_of(active.begin(), active.end(), [](bool a) { return a; })) break;
      const auto approx = approx_weights(basis, n);
      for (std::size_t r = 0; r < rules.size(); ++r) {
        if (!active[r]) continue;
        WceRow row;
        if (r == 0) {
          row = wce_row(approx.rule, ell);
        } else if (r == 1) {
          row = exact_wce_row(uniform_nodes(approx.nodes().minCoeff(), approx.nodes().maxCoeff(), n),
                              ell);
        } else {
          row = wce_row(approx.gh_source, ell);
        }
        t.add_row({ell, integer(n), rules[r], row.wce, row.wce_sq, row.terms[0], row.terms[1],
                   row.terms[2], row.condition ? Cell(*row.condition) : Cell(std::monostate{}),
                   flag(row.reliable)});
        if (row.wce < kWceDisplayFloor) active[r] = false;
      }
    }
  }
  return t;
}

// --- integrate / tensor-integrate ---------------------------------------------------

struct Estimate {
  double value = std::nan("");
  std::optional<double> condition;
  bool reliable = true;
};

// Exact kernel rule on the nodes; nullopt weights on breakdown.
std::pair<std::optional<QuadratureRule<double>>, Estimate> kernel_rule(const VectorXd& nodes,
                                                                       double ell) {
  Estimate meta;
  try {
    const auto ex = exact_weights(nodes, ell);
    meta.condition = ex.condition_estimate;
    meta.reliable = ex.reliable;
    return {QuadratureRule<double>{nodes, ex.weights, Measure::StandardGaussian}, meta};
  } catch (const IllConditionedError& e) {
    meta.condition = e.condition_estimate();
    meta.reliable = false;
    return {std::nullopt, meta};
  }
}

Table integrate_table(const ExperimentSpec& spec, int d) {
  Table t;
  t.columns = {"ell", "N", "points", "rule", "estimate", "exact", "abs_error", "condition",
               "reliable"};
  const std::array<std::string, 4> rules{"sghkq", "kq", "ukq", "gh"};
  for (double ell : spec.length_scales) {
    const auto f = test_integrand<double>(d, spec.powers, spec.decays, ell);
    const auto basis = basis_from(ell, spec.alpha);
    for (int n : spec.n_values) {
      const auto approx = approx_weights(basis, n);
      std::int64_t points = 1;
      for (int i = 0; i < d; ++i) points *= n;
      for (std::size_t r = 0; r < rules.size(); ++r) {
        std::optional<QuadratureRule<double>> rule;
        Estimate est;
        if (r == 0) {
          rule = approx.rule;
        } else if (r == 1) {
          std::tie(rule, est) = kernel_rule(approx.nodes(), ell);
        } else if (r == 2) {
          std::tie(rule, est) = kernel_rule(
              uniform_nodes(approx.nodes().minCoeff(), approx.nodes().maxCoeff(), n), ell);
        } else {
          rule = approx.gh_source;
        }
        if (rule) {
          const auto grid = tensor_rule(std::vector<QuadratureRule<double>>(d, *rule));
          est.value = tensor_integrate(grid, f, spec.workers);
        }
        t.add_row({ell, integer(n), integer(points), rules[r], est.value, f.exact,
                   std::abs(est.value - f.exact),
                   est.condition ? Cell(*est.condition) : Cell(std::monostate{}),
                   flag(est.reliable)});
      }
    }
  }
  return t;
}

// --- constants -------------------------------------------------------------------

Table cmd_constants(const ExperimentSpec& spec) {
  Table t;
  t.columns = {"ell", "alpha", "epsilon", "beta", "delta_sq", "gamma", "tau", "lambda",
               "eta", "c_theory", "C1", "C2"};
  if (spec.dims) {
    for (const char* c : {"dims", "weight_bound", "C_multi"}) t.columns.emplace_back(c);
  }
  for (double ell : spec.length_scales) {
    const auto basis = basis_from(ell, spec.alpha);
    const auto c = theoretical_constants(basis);
    std::vector<Cell> row{ell,     spec.alpha, basis.epsilon(), basis.beta(),
                          basis.delta_sq(), basis.gamma(), c.tau, c.lambda,
                          c.eta,   c.c_theory(), c.C1,       c.C2};
    if (spec.dims) {
      const auto mc = multivariate_constants(basis, *spec.dims, spec.weight_bound);
      row.push_back(integer(*spec.dims));
      row.push_back(spec.weight_bound);
      row.push_back(mc.C);
    }
    t.add_row(std::move(row));
  }
  return t;
}

// --- plotting ----------------------------------------------------------------------

struct PlotLayout {
  std::string x;
  std::vector<std::string> ys;
  bool log_y = true;
};

PlotLayout plot_layout(Command c) {
  switch (c) {
    case Command::Rule:
      return {"node", {"approx_weight", "gh_weight"}, true};
    case Command::WeightsCompare:
      return {"N", {"rel_err"}, true};
    case Command::PositivitySweep:
      return {"N", {"min_weight", "sum_error"}, true};
    case Command::WceSweep:
      return {"N", {"wce"}, true};
    case Command::Integrate:
    case Command::TensorIntegrate:
      return {"N", {"abs_error"}, true};
    case Command::Constants:
      return {"ell", {"c_theory"}, true};
  }
  return {};
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommandNames) {
    if (n == name) return cmd;
  }
  return std::nullopt;
}

std::vector<int> parse_int_list(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw DomainError("empty integer list");
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() < 2 || parts.size() > 3) throw DomainError("range must be a:b or a:b:step");
    const int lo = to_int(parts[0]);
    const int hi = to_int(parts[1]);
    const int step = parts.size() == 3 ? to_int(parts[2]) : 1;
    if (step < 1) throw DomainError("range step must be positive");
    if (hi < lo) throw DomainError("range end below start: " + s);
    std::vector<int> out;
    for (int n = lo; n <= hi; n += step) out.push_back(n);
    return out;
  }
  std::vector<int> out;
  for (const auto& p : split(s, ',')) out.push_back(to_int(p));
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw DomainError("empty number list");
  std::vector<double> out;
  for (const auto& p : split(s, ',')) out.push_back(to_real(p));
  return out;
}

ExperimentSpec normalized(ExperimentSpec spec) {
  const bool tensor = spec.command == Command::TensorIntegrate;
  const bool integrate = spec.command == Command::Integrate || tensor;

  if (spec.length_scales.empty()) {
    switch (spec.command) {
      case Command::Rule:
      case Command::Constants:
        spec.length_scales = {1.0};
        break;
      case Command::Integrate:
      case Command::TensorIntegrate:
        spec.length_scales = {1.2};
        break;
      default:
        spec.length_scales = kSweepLengthScales;
    }
  }
  if (spec.n_values.empty()) {
    switch (spec.command) {
      case Command::Rule:
        throw DomainError("rule needs --n");
      case Command::WeightsCompare:
        spec.n_values = range(1, 100);
        break;
      case Command::PositivitySweep:
      case Command::WceSweep:
        spec.n_values = range(1, kGaussHermiteMaxNodes);
        break;
      case Command::Integrate:
        spec.n_values = range(1, 40);
        break;
      case Command::TensorIntegrate:
        spec.n_values = range(2, 15);
        break;
      case Command::Constants:
        break;
    }
  }
  if (integrate) {
    const int d = tensor ? spec.dims.value_or(3) : spec.dims.value_or(1);
    if (!tensor && d != 1) throw DomainError("integrate is one-dimensional; use tensor-integrate");
    if (d < 1 || d > kTensorMaxDimension) {
      throw SizeError("dimension must lie in [1, " + std::to_string(kTensorMaxDimension) + "]");
    }
    spec.dims = d;
    if (spec.powers.empty()) {
      const std::vector<int> m{6, 4, 2};
      if (d > 3 && spec.decays.empty()) throw DomainError("give --m and --c for d > 3");
      spec.powers.assign(m.begin(), m.begin() + std::min(d, 3));
    }
    if (spec.decays.empty()) {
      const std::vector<double> c{1.5, 3.0, 0.5};
      spec.decays.assign(c.begin(), c.begin() + std::min(d, 3));
    }
    if (spec.powers.size() != std::size_t(d) || spec.decays.size() != std::size_t(d)) {
      throw DomainError("--m and --c need one entry per dimension");
    }
  }

  sort_unique(spec.length_scales);
  sort_unique(spec.n_values);
  for (double ell : spec.length_scales) {
    if (!(ell > 0) || !std::isfinite(ell)) throw DomainError("length-scales must be positive");
  }
  if (!(spec.alpha > 0) || !std::isfinite(spec.alpha)) throw DomainError("alpha must be positive");
  for (int n : spec.n_values) {
    if (n < 1 || n > kGaussHermiteMaxNodes) {
      throw SizeError("node count " + std::to_string(n) + " outside [1, " +
                      std::to_string(kGaussHermiteMaxNodes) + "]");
    }
  }
  if (spec.command == Command::Rule &&
      (spec.length_scales.size() != 1 || spec.n_values.size() != 1)) {
    throw DomainError("rule takes a single length-scale and a single N");
  }
  if (spec.workers < 1) throw DomainError("workers must be positive");
  if (!spec.plot_path.empty()) {
    if (spec.format != Format::Csv) throw DomainError("plot scripts read CSV; use --format csv");
    if (spec.output_path.empty()) throw DomainError("plot scripts need --out");
  }
  return spec;
}

Table run(const ExperimentSpec& spec) {
  switch (spec.command) {
    case Command::Rule:
      return cmd_rule(spec);
    case Command::WeightsCompare:
      return cmd_weights_compare(spec);
    case Command::PositivitySweep:
      return cmd_positivity_sweep(spec);
    case Command::WceSweep:
      return cmd_wce_sweep(spec);
    case Command::Integrate:
      return integrate_table(spec, 1);
    case Command::TensorIntegrate:
      return integrate_table(spec, spec.dims.value_or(3));
    case Command::Constants:
      return cmd_constants(spec);
  }
  throw DomainError("unknown command");
}

void write_plot_script(std::ostream& os, const ExperimentSpec& spec, const Table& t,
                       const std::string& csv_path) {
  const PlotLayout layout = plot_layout(spec.command);
  const int xi = t.column_index(layout.x);
  const int ell_i = t.column_index("ell");
  const int rule_i = t.column_index("rule");

  // Series keys in first-appearance order.
  std::vector<std::pair<std::string, std::string>> series;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& row : t.rows) {
    std::pair<std::string, std::string> key{
        ell_i >= 0 && spec.command != Command::Constants ? format_cell(row[ell_i]) : "",
        rule_i >= 0 ? format_cell(row[rule_i]) : ""};
    if (seen.insert(key).second) series.push_back(key);
  }

  os << "# gnuplot script for " << csv_path << "\n";
  os << "set datafile separator ','\n";
  os << "set key outside right\n";
  os << "set xlabel '" << layout.x << "'\n";
  if (layout.log_y) os << "set logscale y\n";
  os << "plot \\\n";
  bool first = true;
  for (const auto& y : layout.ys) {
    const int yi = t.column_index(y);
    for (const auto& [ell, rule] : series) {
      std::string filter;
      if (!ell.empty()) filter += "$" + std::to_string(ell_i + 1) + "==" + ell;
      if (!rule.empty()) {
        if (!filter.empty()) filter += " && ";
        filter += "strcol(" + std::to_string(rule_i + 1) + ") eq '" + rule + "'";
      }
      const std::string ycol = "$" + std::to_string(yi + 1);
      const std::string expr = filter.empty() ? "(abs(" + ycol + "))"
                                              : "((" + filter + ") ? abs(" + ycol + ") : 1/0)";
      std::string title = y;
      if (!ell.empty()) {
        char short_ell[32];
        std::snprintf(short_ell, sizeof short_ell, "%g", cell_as_double(ell));
        title += std::string(" ell=") + short_ell;
      }
      if (!rule.empty()) title += " " + rule;
      os << (first ? "  " : ", \\\n  ") << "'" << csv_path << "' every ::1 using "
         << (xi + 1) << ":" << expr << " with linespoints title '" << title << "'";
      first = false;
    }
  }
  os << "\n";
}

void emit(const ExperimentSpec& spec, const Table& t, std::ostream& stdout_stream) {
  auto write = [&](std::ostream& os) {
    if (spec.format == Format::Json) {
      write_json(os, t);
    } else {
      write_csv(os, t);
    }
  };
  if (spec.output_path.empty()) {
    write(stdout_stream);
  } else {
    std::ofstream out(spec.output_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open output file '" + spec.output_path + "'");
    write(out);
    out.flush();
    if (!out) throw IoError("failed writing '" + spec.output_path + "'");
  }
  if (!spec.plot_path.empty()) {
    std::ofstream plot(spec.plot_path, std::ios::binary | std::ios::trunc);
    if (!plot) throw IoError("cannot open plot file '" + spec.plot_path + "'");
    write_plot_script(plot, spec, t, spec.output_path);
    if (!plot) throw IoError("failed writing '" + spec.plot_path + "'");
  }
}

}  // namespace gkq::cli
