#include "app.hpp"

#include "experiment.hpp"

#include <gkq/errors.hpp>

#include <CLI11.hpp>

#include <ostream>

namespace gkq::cli {

namespace {

struct RawOptions {
  std::string ell, ells, n, ns, m, c, out, format = "csv", plot;
  double alpha = 0.70710678118654752440;
  int dims = 0;
  double weight_bound = 1.0;
  int workers = 1;
};

void add_options(CLI::App& sub, RawOptions& o) {
  auto* ell = sub.add_option("--ell", o.ell, "single length-scale");
  sub.add_option("--ells", o.ells, "comma-separated length-scales")->excludes(ell);
  auto* n = sub.add_option("--n", o.n, "single node count");
  sub.add_option("--ns", o.ns, "node counts: a:b, a:b:step or v1,v2,...")->excludes(n);
  sub.add_option("--alpha", o.alpha, "global scale of the Mercer basis");
  sub.add_option("--dims", o.dims, "dimension (tensor-integrate, constants)");
  sub.add_option("--m", o.m, "integrand powers, one per dimension");
  sub.add_option("--c", o.c, "integrand decays in (0, 4), one per dimension");
  sub.add_option("--weight-bound", o.weight_bound, "W >= 1 for multivariate constants");
  sub.add_option("--workers", o.workers, "threads for tensor sums");
  sub.add_option("--out", o.out, "output file (default stdout)");
  sub.add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--plot", o.plot, "also write a gnuplot script here");
}

ExperimentSpec to_spec(Command cmd, const RawOptions& o) {
  ExperimentSpec spec;
  spec.command = cmd;
  if (!o.ell.empty()) spec.length_scales = parse_real_list(o.ell);
  if (!o.ells.empty()) spec.length_scales = parse_real_list(o.ells);
  if (!o.n.empty()) spec.n_values = parse_int_list(o.n);
  if (!o.ns.empty()) spec.n_values = parse_int_list(o.ns);
  if (!o.ell.empty() && spec.length_scales.size() != 1) throw DomainError("--ell takes one value");
  if (!o.n.empty() && spec.n_values.size() != 1) throw DomainError("--n takes one value");
  spec.alpha = o.alpha;
  if (o.dims != 0) spec.dims = o.dims;
  if (!o.m.empty()) spec.powers = parse_int_list(o.m);
  if (!o.c.empty()) spec.decays = parse_real_list(o.c);
  spec.weight_bound = o.weight_bound;
  spec.workers = o.workers;
  spec.output_path = o.out;
  spec.format = o.format == "json" ? Format::Json : Format::Csv;
  spec.plot_path = o.plot;
  return normalized(std::move(spec));
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian kernel quadrature at scaled Gauss-Hermite nodes", "gkq"};
  app.require_subcommand(1);

  RawOptions opts;
  std::vector<std::pair<Command, CLI::App*>> subs;
  const std::pair<Command, const char*> commands[] = {
      {Command::Rule, "nodes and approximate weights for one (ell, N)"},
      {Command::WeightsCompare, "relative error against QR reference weights"},
      {Command::PositivitySweep, "minimal weights and weight sums"},
      {Command::WceSweep, "worst-case errors of SGHKQ, UKQ and GH"},
      {Command::Integrate, "test integral in one dimension"},
      {Command::TensorIntegrate, "test integral on tensor grids"},
      {Command::Constants, "convergence constants"},
  };
  for (const auto& [cmd, help] : commands) {
    auto* sub = app.add_subcommand(std::string(command_name(cmd)), help);
    add_options(*sub, opts);
    subs.emplace_back(cmd, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    for (const auto& [cmd, sub] : subs) {
      if (!sub->parsed()) continue;
      const ExperimentSpec spec = to_spec(cmd, opts);
      emit(spec, run(spec), out);
    }
    return kExitOk;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

}  // namespace gkq::cli
