#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jcd/experiments.hpp"
#include "jcd/model.hpp"
#include "jcd/optimizer.hpp"

namespace jcd {

inline constexpr const char* kToolVersion = "0.1.0";
// Default output directory when --out is not given.
inline constexpr const char* kOutputDirEnv = "JCD_OUTPUT_DIR";

// ---- configuration ---------------------------------------------------------

ScenarioSpec SpecFromJson(const nlohmann::json& doc);
nlohmann::json SpecToJson(const ScenarioSpec& spec);
ScenarioSpec LoadConfig(const std::filesystem::path& path);
// A builtin scenario name, or else a path to a config file.
ScenarioSpec LoadScenario(const std::string& name_or_path);

// ---- results ---------------------------------------------------------------

struct NamedConstellation {
  std::string file;  // e.g. "constellation.csv"
  Constellation constellation;
  MessageSpace space;
};

struct MiRow {
  int experiment = 0;
  double snr_db = 0.0;
  std::string encoder;
  int user = 0;
  std::optional<double> mi;  // empty for unavailable encoders
  std::optional<double> std_error;
};

struct SummaryRow {
  double snr_db = 0.0;
  std::string encoder;
  std::optional<double> min_mi;
  std::optional<double> mean_mi;
};

struct ResultBundle {
  std::string command;
  std::uint64_t seed = 0;
  nlohmann::json config;
  std::vector<NamedConstellation> constellations;
  std::vector<MiRow> mi;
  std::vector<SummaryRow> summary;
  std::vector<IterationRecord> loss_history;
};

ResultBundle BundleFromRun(const RunResult& run, const ScenarioSpec& spec, double snr_db);
ResultBundle BundleFromScenario(const ScenarioResult& result);
ResultBundle BundleFromSweep(const SweepResult& result);

// Writes the CSV files and manifest.json into out_dir (created if missing).
// Every file is written to a temporary name and renamed into place.
std::vector<std::filesystem::path> WriteResults(const ResultBundle& bundle,
                                                const std::filesystem::path& out_dir);

std::string RunId(const ResultBundle& bundle);
std::uint64_t Fnv1a64(std::string_view data);

// %.17g
std::string FormatNumber(double v);

std::string ConstellationCsv(const Constellation& constellation, const MessageSpace& space);
std::string MiCsv(const std::vector<MiRow>& rows);
std::string SummaryCsv(const std::vector<SummaryRow>& rows);
std::string LossHistoryCsv(const std::vector<IterationRecord>& rows);

struct LabeledConstellation {
  Constellation constellation;
  std::vector<std::string> labels;  // one per point
};

LabeledConstellation ReadConstellationCsv(const std::filesystem::path& path);
LabeledConstellation ParseConstellationCsv(const std::string& text);

// ---- figures ---------------------------------------------------------------

// Scatter of a real two-antenna constellation with one labeled marker per
// point and an arrow per channel direction.
std::string ConstellationSvg(const Constellation& constellation,
                             const std::vector<std::string>& labels,
                             const std::vector<Eigen::VectorXd>& channel_directions);
void ExportSvg(const Constellation& constellation, const ChannelSet& channels,
               const MessageSpace& space, const std::filesystem::path& path);

void WriteFileAtomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace jcd
