#pragma once

#include "spectv/decomp.hpp"
#include "spectv/spectral.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace spectv::io {

/// Format is chosen by extension: .csv (1D, one value per line, optional
/// "# h=<spacing>" header), .pgm (2D, P2/P5, 8/16-bit, rescaled to [0,1]),
/// .raw (lossless f64 little-endian with a .json sidecar next to it).
Signal read_signal(const std::filesystem::path& path);
void write_signal(const Signal& s, const std::filesystem::path& path);

Signal read_csv_1d(const std::filesystem::path& path);
void write_csv_1d(const Signal& s, const std::filesystem::path& path);

Signal read_pgm(const std::filesystem::path& path);
void write_pgm(const Signal& s, const std::filesystem::path& path);

Signal read_raw(const std::filesystem::path& path);
void write_raw(const Signal& s, const std::filesystem::path& path);

/// One series of a line plot.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone deterministic SVG line plot with axes, labels and optional
/// vertical cutoff markers.
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series,
                    const std::vector<double>& vertical_markers = {});

void write_spectrum_csv(const Spectrum& sp, const std::filesystem::path& path);
void write_curve_csv(const MeasureCurve& curve, const std::filesystem::path& path);
void write_report_text(const MeasureReport& r, const std::filesystem::path& path);
void write_report_csv_row(const MeasureReport& r, const std::filesystem::path& path,
                          bool with_header);

/// Flow trajectory persistence: <dir>/trajectory.json plus states.f64 and
/// subgradients.f64 (step-major, lossless).
void save_trajectory(const FlowTrajectory& traj, const std::filesystem::path& dir);
FlowTrajectory load_trajectory(const std::filesystem::path& dir);

/// Band stack persistence: <dir>/bands.json plus bands.f64 and residual.f64.
void save_decomposition(const SpectralDecomposition& dec, const std::filesystem::path& dir);
SpectralDecomposition load_decomposition(const std::filesystem::path& dir);

/// JSON manifest of all parameters of a run.
void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace spectv::io
