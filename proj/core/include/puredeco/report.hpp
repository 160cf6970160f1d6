// report.hpp: CSV and SVG output

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "puredeco/scenario.hpp"

namespace puredeco {

inline constexpr const char* kTraceHeader = "t,S,sigma_loc,Sigma_loc,U_loc,W_loc,Q_loc,Q_gl,Sigma_gl,U_elb,W_elb,U_lp,W_lp";

/// Real number with 17 significant digits ("nan" for unselected columns).
std::string format_real(double x);

/// One row per record. With `cutoff`, a leading cutoff column is added.
void write_trace_csv(std::ostream& out, const ThermoTrace& trace, std::optional<double> cutoff = std::nullopt,
                     bool header = true);
void write_trace_csv(const std::filesystem::path& path, const ThermoTrace& trace);

void write_oracle_csv(std::ostream& out, const OracleReport& report);
void write_oracle_csv(const std::filesystem::path& path, const OracleReport& report);
/// Human-readable table: one line per check with deviation, tolerance and verdict.
void write_oracle_summary(std::ostream& out, const OracleReport& report);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct PlotPanel {
    std::string title;
    std::string xlabel = "t";
    std::string ylabel;
    std::vector<PlotSeries> series;
};

/// Self-contained SVG with the panels side by side.
std::string render_svg(const std::vector<PlotPanel>& panels);

enum class Figure { EntropyProduction, FirstLaw };

struct FigureResult {
    std::vector<std::filesystem::path> files;
    /// One trace per cutoff value, in sweep order.
    std::vector<std::pair<double, ThermoTrace>> traces;
};

/// fig1: Σ_loc and Σ_gl for each cutoff in `cfg.cutoff_sweep`.
/// fig2: U, W, Q in the local, ELB and LP conventions at `cfg.cutoff`.
/// Writes <name>.csv, <name>.svg and <name>_meta.txt into `out_dir`.
FigureResult reproduce_figure(Figure which, const std::filesystem::path& out_dir, const ScenarioConfig& cfg = {});

} // namespace puredeco
