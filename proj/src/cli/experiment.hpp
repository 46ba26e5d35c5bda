#pragma once

#include "table.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gkq::cli {

enum class Command {
  Rule,
  WeightsCompare,
  PositivitySweep,
  WceSweep,
  Integrate,
  TensorIntegrate,
  Constants,
};

enum class Format { Csv, Json };

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);

struct ExperimentSpec {
  Command command = Command::Rule;
  std::vector<double> length_scales;
  std::vector<int> n_values;
  double alpha = 0.70710678118654752440;
  std::optional<int> dims;
  std::vector<int> powers;
  std::vector<double> decays;
  double weight_bound = 1.0;
  int workers = 1;
  std::string output_path;  // empty: stdout
  Format format = Format::Csv;
  std::string plot_path;
};

// Fills per-command defaults for anything left empty, sorts the sweeps
// ascending and checks guards. Throws gkq::DomainError.
ExperimentSpec normalized(ExperimentSpec spec);

// "a:b", "a:b:step" or "v1,v2,...".
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

Table run(const ExperimentSpec& spec);

// gnuplot commands over the CSV columns of a table produced by run().
void write_plot_script(std::ostream& os, const ExperimentSpec& spec, const Table& t,
                       const std::string& csv_path);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Writes the table (and the plot script when requested) to the experiment's paths.
void emit(const ExperimentSpec& spec, const Table& t, std::ostream& stdout_stream);

// Values in the wce-sweep and weights-compare outputs.
inline constexpr double kWceDisplayFloor = 1.4901e-8;
inline constexpr double kSymmetryBreakdown = 1e-6;

}  // namespace gkq::cli
