#pragma once

#include <map>
#include <string>
#include <vector>

namespace gfcd::experiment {

struct FigureOptions {
  /// Output directories of earlier solve runs (each with aggregate.csv,
  /// summaries/ and traces/).
  std::vector<std::string> inputs;
  std::string output_dir = "figures";
  bool svg = false;
  /// Points on the common iteration / time grid used for medians.
  int grid_points = 200;
};

/// One row of a long-format figure table.
struct FigureRow {
  std::string figure;
  std::string series;
  std::string seed;  // seed number or "median"
  double x = 0.0;
  double y = 0.0;
};

struct FigureSet {
  std::vector<FigureRow> fig1;  // suboptimality vs iteration per policy, unquantized inputs
  std::vector<FigureRow> fig2;  // P_md vs wall seconds per policy, unquantized inputs
  std::vector<FigureRow> fig3;  // suboptimality vs iteration per <adc>/<policy>
  std::vector<FigureRow> fig4;  // final P_md vs ADC bits per policy (x = inf when unquantized)

  /// Distinct series names of a figure table.
  static std::vector<std::string> series_of(const std::vector<FigureRow>& rows);
};

/// Reads and validates the inputs. Throws SchemaError on unknown schema
/// versions or missing columns/fields.
FigureSet build_figures(const FigureOptions& options);

/// "# gfcd-figure v1.0" + "figure,series,seed,x,y".
inline constexpr const char* kFigureHeader = "figure,series,seed,x,y";
std::string figure_csv(const std::vector<FigureRow>& rows);

/// Builds and writes fig{1..4}_*.csv (and .svg with options.svg); returns the
/// written paths.
std::vector<std::string> write_figures(const FigureOptions& options);

}  // namespace gfcd::experiment
