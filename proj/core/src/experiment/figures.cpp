#include "gfcd/experiment/figures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gfcd/experiment/csv.hpp"
#include "gfcd/experiment/curves.hpp"
#include "gfcd/trace_io.hpp"

namespace gfcd::experiment {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Run {
  std::string policy;
  std::string adc;
  std::uint64_t seed = 0;
  double F_star = 0.0;
  double p_md = 1.0;
  Trace trace;
  GroundTruth truth;
};

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

const json& field(const json& j, const char* key, const std::string& source) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(source + ": missing field '" + key + "'");
  return j.at(key);
}

double json_number(const json& j, const char* key, const std::string& source) {
  const json& v = field(j, key, source);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_double_field(v.get<std::string>());
  throw SchemaError(source + ": field '" + key + "' is not a number");
}

GroundTruth truth_from_summary(const json& j, const std::string& source) {
  try {
    GroundTruth t;
    t.messages_per_device = field(j, "messages_per_device", source).get<int>();
    const json& tj = field(j, "truth", source);
    t.active_devices = field(tj, "active_devices", source).get<std::vector<int>>();
    t.message_index = field(tj, "message_index", source).get<std::vector<int>>();
    const auto pl = field(tj, "pathloss", source).get<std::vector<double>>();
    t.pathloss = Eigen::Map<const RVector>(pl.data(), static_cast<Eigen::Index>(pl.size()));
    t.gamma_true = RVector::Zero(t.pathloss.size() * t.messages_per_device);
    return t;
  } catch (const json::exception& e) {
    throw SchemaError(source + ": " + e.what());
  }
}

std::vector<Run> load_input(const std::string& dir) {
  const fs::path root(dir);
  const std::string agg_path = (root / "aggregate.csv").string();
  if (!fs::exists(agg_path)) throw SchemaError(agg_path + ": aggregate file not found");
  const CsvTable table = parse_csv(read_file(agg_path), "gfcd-aggregate", 1, agg_path);
  const auto c_policy = table.column("policy", agg_path);
  const auto c_seed = table.column("seed", agg_path);
  const auto c_adc = table.column("adc", agg_path);
  const auto c_fstar = table.column("F_star", agg_path);
  const auto c_final = table.column("final_F", agg_path);
  const auto c_pmd = table.column("p_md", agg_path);
  const auto c_status = table.column("status", agg_path);

  std::vector<Run> runs;
  for (const auto& row : table.rows) {
    if (row[c_status] != "ok") continue;
    Run r;
    r.policy = row[c_policy];
    r.adc = row[c_adc];
    r.seed = std::stoull(row[c_seed]);
    r.F_star = parse_double_field(row[c_fstar]);
    r.p_md = parse_double_field(row[c_pmd]);
    const std::string name = r.policy + "_seed" + row[c_seed];
    const std::string sum_path = (root / "summaries" / (name + ".json")).string();
    json sj;
    try {
      sj = json::parse(read_file(sum_path));
    } catch (const json::parse_error& e) {
      throw SchemaError(sum_path + ": " + e.what());
    }
    r.truth = truth_from_summary(sj, sum_path);
    const fs::path trace_path = root / "traces" / (name + ".csv");
    if (fs::exists(trace_path)) {
      std::istringstream is(read_file(trace_path.string()));
      try {
        r.trace = read_trace_csv(is);
      } catch (const std::exception& e) {
        throw SchemaError(trace_path.string() + ": " + e.what());
      }
      r.trace.initial_F = json_number(sj, "initial_F", sum_path);
    } else {
      r.trace.initial_F = parse_double_field(row[c_final]);
    }
    r.trace.final_F = parse_double_field(row[c_final]);
    runs.push_back(std::move(r));
  }
  return runs;
}

// F* fallback when no reference run was recorded: smallest objective seen
// for the same (seed, adc) across the loaded runs.
void fill_missing_fstar(std::vector<Run>& runs) {
  std::map<std::pair<std::uint64_t, std::string>, double> best;
  for (const auto& r : runs) {
    double m = r.trace.initial_F;
    for (const auto& rec : r.trace.records) m = std::min(m, rec.F);
    m = std::min(m, r.trace.final_F);
    auto [it, fresh] = best.emplace(std::make_pair(r.seed, r.adc), m);
    if (!fresh) it->second = std::min(it->second, m);
  }
  for (auto& r : runs)
    if (!std::isfinite(r.F_star)) r.F_star = best[{r.seed, r.adc}];
}

std::vector<std::int64_t> iteration_grid(std::int64_t tmax, int points) {
  std::vector<std::int64_t> g;
  points = std::max(points, 2);
  for (int i = 0; i < points; ++i) {
    const auto t = static_cast<std::int64_t>(std::llround(static_cast<double>(i) * static_cast<double>(tmax) /
                                                           static_cast<double>(points - 1)));
    if (g.empty() || g.back() != t) g.push_back(t);
  }
  return g;
}

void suboptimality_rows(const std::string& fig, const std::map<std::string, std::vector<const Run*>>& groups,
                        int points, std::vector<FigureRow>& out) {
  for (const auto& [series, runs] : groups) {
    std::int64_t tmax = 0;
    for (const Run* r : runs) tmax = std::max<std::int64_t>(tmax, static_cast<std::int64_t>(r->trace.records.size()));
    const auto grid = iteration_grid(tmax, points);
    std::vector<std::vector<double>> columns(grid.size());
    for (const Run* r : runs) {
      const auto eps = suboptimality_series(r->trace, r->F_star);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto t = std::min<std::size_t>(static_cast<std::size_t>(grid[i]), eps.size() - 1);
        out.push_back({fig, series, std::to_string(r->seed), static_cast<double>(grid[i]), eps[t]});
        columns[i].push_back(eps[t]);
      }
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
      out.push_back({fig, series, "median", static_cast<double>(grid[i]), median(columns[i])});
  }
}

void pmd_time_rows(const std::map<std::string, std::vector<const Run*>>& groups, int points,
                   std::vector<FigureRow>& out) {
  for (const auto& [series, runs] : groups) {
    std::vector<std::vector<DetectionPoint>> curves;
    double tmax = 0.0;
    for (const Run* r : runs) {
      const auto n = static_cast<std::int64_t>(r->trace.records.size());
      const std::int64_t stride = std::max<std::int64_t>(1, (n + 99) / 100);
      curves.push_back(detection_curve(r->trace, r->truth, stride));
      for (const auto& p : curves.back()) out.push_back({"fig2", series, std::to_string(r->seed), p.elapsed_s, p.p_md});
      tmax = std::max(tmax, curves.back().back().elapsed_s);
    }
    const int g = std::max(points, 2);
    for (int i = 0; i < g; ++i) {
      const double x = tmax * i / (g - 1);
      std::vector<double> ys;
      for (const auto& c : curves) {
        double y = c.front().p_md;
        for (const auto& p : c) {
          if (p.elapsed_s > x) break;
          y = p.p_md;
        }
        ys.push_back(y);
      }
      out.push_back({"fig2", series, "median", x, median(ys)});
    }
  }
}

// "unquantized" -> (inf, ""), "b3" -> (3, ""), "b3-literal" -> (3, "/literal").
std::pair<double, std::string> parse_adc_label(const std::string& label) {
  if (label == "unquantized") return {std::numeric_limits<double>::infinity(), ""};
  if (label.size() < 2 || label[0] != 'b') throw SchemaError("unknown adc label '" + label + "'");
  const auto dash = label.find('-');
  const double bits = parse_double_field(label.substr(1, dash == std::string::npos ? std::string::npos : dash - 1));
  return {bits, dash == std::string::npos ? "" : "/" + label.substr(dash + 1)};
}

std::string fmt(double v) { return format_double(v); }

std::string svg_plot(const std::string& title, const std::vector<FigureRow>& rows, bool log_y) {
  const double W = 640, H = 420, ml = 70, mr = 150, mt = 40, mb = 50;
  std::map<std::string, std::vector<std::pair<double, double>>> lines;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& r : rows) {
    if (r.seed != "median" || !std::isfinite(r.x) || !std::isfinite(r.y)) continue;
    if (log_y && r.y <= 0.0) continue;
    const double y = log_y ? std::log10(r.y) : r.y;
    lines[r.series].emplace_back(r.x, y);
    x0 = std::min(x0, r.x), x1 = std::max(x1, r.x), y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  if (lines.empty()) {
    os << "</svg>\n";
    return os.str();
  }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << ml << "\" y=\"" << H - mb + 18 << "\" font-size=\"11\">" << fmt(x0) << "</text>\n"
     << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 18 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(x1)
     << "</text>\n"
     << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb << "\" font-size=\"11\" text-anchor=\"end\">"
     << (log_y ? "1e" : "") << fmt(y0) << "</text>\n"
     << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
     << (log_y ? "1e" : "") << fmt(y1) << "</text>\n";
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  std::size_t i = 0;
  for (const auto& [name, pts] : lines) {
    const char* color = colors[i % 7];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts) os << px(x) << ',' << py(y) << ' ';
    os << "\"/>\n<text x=\"" << W - mr + 8 << "\" y=\"" << mt + 16 * (i + 1) << "\" font-size=\"12\" fill=\"" << color
       << "\">" << name << "</text>\n";
    ++i;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::vector<std::string> FigureSet::series_of(const std::vector<FigureRow>& rows) {
  std::set<std::string> s;
  for (const auto& r : rows) s.insert(r.series);
  return {s.begin(), s.end()};
}

FigureSet build_figures(const FigureOptions& options) {
  if (options.inputs.empty()) throw SchemaError("figures: no input directories");
  std::vector<Run> runs;
  for (const auto& dir : options.inputs) {
    auto part = load_input(dir);
    std::move(part.begin(), part.end(), std::back_inserter(runs));
  }
  fill_missing_fstar(runs);

  std::map<std::string, std::vector<const Run*>> by_policy, by_adc_policy;
  for (const auto& r : runs) {
    if (r.adc == "unquantized") by_policy[r.policy].push_back(&r);
    by_adc_policy[r.adc + "/" + r.policy].push_back(&r);
  }

  FigureSet fs;
  suboptimality_rows("fig1", by_policy, options.grid_points, fs.fig1);
  pmd_time_rows(by_policy, options.grid_points, fs.fig2);
  suboptimality_rows("fig3", by_adc_policy, options.grid_points, fs.fig3);

  std::map<std::pair<std::string, double>, std::vector<double>> fig4;
  for (const auto& r : runs) {
    const auto [bits, suffix] = parse_adc_label(r.adc);
    fs.fig4.push_back({"fig4", r.policy + suffix, std::to_string(r.seed), bits, r.p_md});
    fig4[{r.policy + suffix, bits}].push_back(r.p_md);
  }
  for (const auto& [key, ys] : fig4) fs.fig4.push_back({"fig4", key.first, "median", key.second, median(ys)});
  return fs;
}

std::string figure_csv(const std::vector<FigureRow>& rows) {
  std::string out = "# gfcd-figure v1.0\n";
  out += kFigureHeader;
  out += '\n';
  for (const auto& r : rows) out += csv_line({r.figure, r.series, r.seed, fmt(r.x), fmt(r.y)});
  return out;
}

std::vector<std::string> write_figures(const FigureOptions& options) {
  const FigureSet set = build_figures(options);
  const fs::path out(options.output_dir);
  struct Item {
    const char* stem;
    const std::vector<FigureRow>* rows;
    const char* title;
    bool log_y;
  };
  const Item items[] = {
      {"fig1_suboptimality", &set.fig1, "Suboptimality vs iteration (median)", true},
      {"fig2_pmd_vs_time", &set.fig2, "P_md vs wall seconds (median)", false},
      {"fig3_adc_suboptimality", &set.fig3, "Suboptimality vs iteration per ADC resolution (median)", true},
      {"fig4_adc_pmd", &set.fig4, "Final P_md vs ADC bits (median)", false},
  };
  std::vector<std::string> written;
  for (const auto& it : items) {
    const auto csv = (out / (std::string(it.stem) + ".csv")).string();
    write_file_atomic(csv, figure_csv(*it.rows));
    written.push_back(csv);
    if (options.svg) {
      const auto svg = (out / (std::string(it.stem) + ".svg")).string();
      write_file_atomic(svg, svg_plot(it.title, *it.rows, it.log_y));
      written.push_back(svg);
    }
  }
  return written;
}

}  // namespace gfcd::experiment
