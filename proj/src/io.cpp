#include "jcd/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "jcd/error.hpp"

namespace jcd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys{
    "name",  "T",        "K",         "R",          "alphabet", "channels",
    "snr",   "P_m",      "P_c",       "eta",        "n_samples", "iterations",
    "n_eval", "restarts", "seed",     "convention", "real_constellation",
    "encoders", "plateau"};

[[noreturn]] void Invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kValidationError, "config field '" + field + "': " + what);
}

template <typename T>
T Get(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key) || doc.at(key).is_null()) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    Invalid(key, e.what());
  }
}

Complex ParseComplex(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  Invalid(field, "expected a number or an [re, im] pair");
}

Eigen::MatrixXcd ParseMatrix(const json& v, int rows, int cols, const std::string& field) {
  if (!v.is_array() || static_cast<int>(v.size()) != rows)
    Invalid(field, "expected " + std::to_string(rows) + " rows (one per transmit antenna)");
  Eigen::MatrixXcd m(rows, cols);
  for (int t = 0; t < rows; ++t) {
    const json& row = v[t];
    // With R = 1 a row may be written as a bare [re, im] pair.
    const bool bare = cols == 1 && row.is_array() && row.size() == 2 && row[0].is_number();
    if (bare) {
      m(t, 0) = ParseComplex(row, field);
      continue;
    }
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      Invalid(field, "expected " + std::to_string(cols) + " entries per row (one per receive antenna)");
    for (int r = 0; r < cols; ++r) m(t, r) = ParseComplex(row[r], field);
  }
  return m;
}

json MatrixToJson(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    json row = json::array();
    for (Eigen::Index r = 0; r < m.cols(); ++r) row.push_back({m(t, r).real(), m(t, r).imag()});
    rows.push_back(row);
  }
  return rows;
}

std::string Cell(const std::optional<double>& v) { return v ? FormatNumber(*v) : "NA"; }

}  // namespace

ScenarioSpec SpecFromJson(const json& doc) {
  if (!doc.is_object())
    throw Error(ErrorCode::kParseError, "config must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (!kConfigKeys.contains(key)) Invalid(key, "unknown field");

  ScenarioSpec spec;
  spec.name = Get<std::string>(doc, "name", "custom");
  if (!doc.contains("T")) Invalid("T", "missing");
  if (!doc.contains("K")) Invalid("K", "missing");
  spec.antennas = Get<int>(doc, "T", 0);
  spec.users = Get<int>(doc, "K", 0);
  spec.rx = Get<int>(doc, "R", 1);
  if (spec.antennas < 1) Invalid("T", "must be >= 1");
  if (spec.users < 1) Invalid("K", "must be >= 1");
  if (spec.rx < 1) Invalid("R", "must be >= 1");
  spec.alphabet = Get<std::vector<int>>(doc, "alphabet",
                                        std::vector<int>(static_cast<std::size_t>(spec.users), 2));
  if (static_cast<int>(spec.alphabet.size()) != spec.users)
    Invalid("alphabet", "expected one size per user");
  for (int s : spec.alphabet)
    if (s < 2) Invalid("alphabet", "sizes must be >= 2");

  if (!doc.contains("channels") || (doc["channels"].is_string() && doc["channels"] == "random")) {
    spec.channels = RandomChannels{};
  } else {
    const json& ch = doc["channels"];
    if (!ch.is_array() || static_cast<int>(ch.size()) != spec.users)
      Invalid("channels", "expected \"random\" or one matrix per user");
    ExplicitChannels ex;
    for (int k = 0; k < spec.users; ++k)
      ex.h.push_back(ParseMatrix(ch[k], spec.antennas, spec.rx,
                                 "channels[" + std::to_string(k) + "]"));
    for (std::size_t k = 0; k < ex.h.size(); ++k)
      if (ex.h[k].squaredNorm() == 0.0)
        Invalid("channels[" + std::to_string(k) + "]", "channel is all zero");
    spec.channels = std::move(ex);
  }

  if (!doc.contains("snr")) Invalid("snr", "missing");
  const json& snr = doc["snr"];
  if (snr.is_array()) {
    ExplicitSnr ex;
    for (const auto& v : snr) {
      if (!v.is_number()) Invalid("snr", "values must be numbers");
      ex.db.push_back(v.get<double>());
    }
    if (static_cast<int>(ex.db.size()) != spec.users) Invalid("snr", "expected one value per user");
    spec.snr = ex;
  } else if (snr.is_object()) {
    JitteredSnr j;
    j.mean = Get<double>(snr, "mean", std::nan(""));
    j.jitter_std = Get<double>(snr, "jitter_std", 1.0);
    if (!std::isfinite(j.mean)) Invalid("snr.mean", "missing or not finite");
    if (!(j.jitter_std >= 0.0)) Invalid("snr.jitter_std", "must be >= 0");
    spec.snr = j;
  } else {
    Invalid("snr", "expected a list or {mean, jitter_std}");
  }

  spec.pc.mean_power = Get<double>(doc, "P_m", 1.0);
  spec.pc.peak_antenna_power = Get<double>(doc, "P_c", 4.0);
  if (!(spec.pc.mean_power > 0.0)) Invalid("P_m", "must be positive");
  if (!(spec.pc.peak_antenna_power > 0.0)) Invalid("P_c", "must be positive");
  if (spec.pc.peak_antenna_power < spec.pc.mean_power) Invalid("P_c", "must be >= P_m");

  auto& opt = spec.opt;
  opt.eta = Get<double>(doc, "eta", 0.1);
  const auto n_samples = Get<long long>(doc, "n_samples", 10000);
  const auto n_eval = Get<long long>(doc, "n_eval", 100000);
  opt.max_iterations = Get<int>(doc, "iterations", 100);
  opt.restarts = Get<int>(doc, "restarts", 1);
  opt.seed = Get<std::uint64_t>(doc, "seed", 0);
  opt.kernel.convention = ParseConvention(Get<std::string>(doc, "convention", "paper"));
  opt.real_constellation = Get<bool>(doc, "real_constellation", false);
  if (!(opt.eta > 0.0)) Invalid("eta", "must be positive");
  if (n_samples < 1) Invalid("n_samples", "must be >= 1");
  if (n_eval < 1000) Invalid("n_eval", "must be >= 1000");
  if (opt.max_iterations < 1) Invalid("iterations", "must be >= 1");
  if (opt.restarts < 1) Invalid("restarts", "must be >= 1");
  opt.n_samples = static_cast<std::size_t>(n_samples);
  opt.n_eval = static_cast<std::size_t>(n_eval);
  if (doc.contains("plateau") && !doc["plateau"].is_null()) {
    const json& p = doc["plateau"];
    if (p.is_boolean()) {
      if (p.get<bool>()) opt.plateau = PlateauRule{};
    } else if (p.is_object()) {
      opt.plateau = PlateauRule{Get<int>(p, "window", 20), Get<double>(p, "min_improvement", 1e-4)};
    } else {
      Invalid("plateau", "expected a boolean or {window, min_improvement}");
    }
  }
  if (doc.contains("encoders"))
    spec.encoders = Get<std::vector<std::string>>(doc, "encoders", spec.encoders);

  try {
    spec.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kValidationError, e.what());
  }
  return spec;
}

json SpecToJson(const ScenarioSpec& spec) {
  json doc;
  doc["name"] = spec.name;
  doc["T"] = spec.antennas;
  doc["K"] = spec.users;
  doc["R"] = spec.rx;
  doc["alphabet"] = spec.alphabet;
  if (const auto* ex = std::get_if<ExplicitChannels>(&spec.channels)) {
    json ch = json::array();
    for (const auto& h : ex->h) ch.push_back(MatrixToJson(h));
    doc["channels"] = ch;
  } else {
    doc["channels"] = "random";
  }
  if (const auto* ex = std::get_if<ExplicitSnr>(&spec.snr))
    doc["snr"] = ex->db;
  else
    doc["snr"] = {{"mean", std::get<JitteredSnr>(spec.snr).mean},
                  {"jitter_std", std::get<JitteredSnr>(spec.snr).jitter_std}};
  doc["P_m"] = spec.pc.mean_power;
  doc["P_c"] = spec.pc.peak_antenna_power;
  doc["eta"] = spec.opt.eta;
  doc["n_samples"] = spec.opt.n_samples;
  doc["iterations"] = spec.opt.max_iterations;
  doc["n_eval"] = spec.opt.n_eval;
  doc["restarts"] = spec.opt.restarts;
  doc["seed"] = spec.opt.seed;
  doc["convention"] = std::string(ConventionName(spec.opt.kernel.convention));
  doc["real_constellation"] = spec.opt.real_constellation;
  doc["encoders"] = spec.encoders;
  if (spec.opt.plateau)
    doc["plateau"] = {{"window", spec.opt.plateau->window},
                      {"min_improvement", spec.opt.plateau->min_improvement}};
  else
    doc["plateau"] = nullptr;
  return doc;
}

ScenarioSpec LoadConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, "config '" + path.string() + "': " + e.what());
  }
  return SpecFromJson(doc);
}

ScenarioSpec LoadScenario(const std::string& name_or_path) {
  const auto names = BuiltinScenarioNames();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end())
    return BuiltinScenario(name_or_path);
  if (!fs::exists(name_or_path))
    throw Error(ErrorCode::kUnknownScenario,
                "'" + name_or_path + "' is neither a builtin scenario nor a config file");
  return LoadConfig(name_or_path);
}

std::string FormatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string ConstellationCsv(const Constellation& constellation, const MessageSpace& space) {
  std::string out = "w,antenna,re,im\n";
  const auto& x = constellation.points();
  for (Eigen::Index j = 0; j < x.rows(); ++j)
    for (Eigen::Index t = 0; t < x.cols(); ++t)
      out += space.Label(static_cast<std::size_t>(j)) + "," + std::to_string(t) + "," +
             FormatNumber(x(j, t).real()) + "," + FormatNumber(x(j, t).imag()) + "\n";
  return out;
}

std::string MiCsv(const std::vector<MiRow>& rows) {
  std::string out = "experiment,snr_db,encoder,user,mi,stderr\n";
  for (const auto& r : rows)
    out += std::to_string(r.experiment) + "," + FormatNumber(r.snr_db) + "," + r.encoder + "," +
           std::to_string(r.user) + "," + Cell(r.mi) + "," + Cell(r.std_error) + "\n";
  return out;
}

std::string SummaryCsv(const std::vector<SummaryRow>& rows) {
  std::string out = "snr_db,encoder,min_mi,mean_mi\n";
  for (const auto& r : rows)
    out += FormatNumber(r.snr_db) + "," + r.encoder + "," + Cell(r.min_mi) + "," +
           Cell(r.mean_mi) + "\n";
  return out;
}

std::string LossHistoryCsv(const std::vector<IterationRecord>& rows) {
  std::string out = "iteration,max_loss,argmax_user\n";
  for (const auto& r : rows)
    out += std::to_string(r.iteration) + "," + FormatNumber(r.max_loss) + "," +
           std::to_string(r.argmax_user) + "\n";
  return out;
}

namespace {

void AppendRows(ResultBundle& b, int experiment, double snr_db, const std::string& encoder,
                const std::vector<MiEstimate>& mi) {
  for (std::size_t k = 0; k < mi.size(); ++k)
    b.mi.push_back({experiment, snr_db, encoder, static_cast<int>(k), mi[k].mi, mi[k].std_error});
}

double MeanSnr(const std::vector<double>& snr) {
  double s = 0.0;
  for (double v : snr) s += v;
  return s / static_cast<double>(snr.size());
}

void AppendUnavailable(ResultBundle& b, int experiment, double snr_db, const std::string& encoder,
                       int users) {
  for (int k = 0; k < users; ++k) b.mi.push_back({experiment, snr_db, encoder, k, {}, {}});
}

}  // namespace

ResultBundle BundleFromRun(const RunResult& run, const ScenarioSpec& spec, double snr_db) {
  ResultBundle b;
  b.command = "optimize";
  b.seed = run.seed;
  b.config = SpecToJson(spec);
  const MessageSpace space = spec.Space();
  b.constellations.push_back({"constellation.csv", run.final_constellation, space});
  AppendRows(b, 0, snr_db, kMaxMin, run.per_user_mi);
  b.summary.push_back({snr_db, kMaxMin, run.MinMi(), run.MeanMi()});
  b.loss_history = run.loss_history;
  return b;
}

ResultBundle BundleFromScenario(const ScenarioResult& result) {
  ResultBundle b;
  b.command = "scenario";
  b.seed = result.spec.opt.seed;
  b.config = SpecToJson(result.spec);
  const MessageSpace space = result.spec.Space();
  const double snr = MeanSnr(result.snr_db);
  for (const auto& row : result.rows) {
    if (!row.available) {
      AppendUnavailable(b, 0, snr, row.encoder, result.spec.users);
      b.summary.push_back({snr, row.encoder, {}, {}});
      continue;
    }
    AppendRows(b, 0, snr, row.encoder, row.mi);
    b.summary.push_back({snr, row.encoder, row.MinMi(), row.MeanMi()});
    const std::string file =
        row.encoder == kMaxMin ? "constellation.csv" : "constellation_" + row.encoder + ".csv";
    b.constellations.push_back({file, *row.constellation, space});
    if (row.run) b.loss_history = row.run->loss_history;
  }
  return b;
}

ResultBundle BundleFromSweep(const SweepResult& result) {
  ResultBundle b;
  b.command = "sweep";
  b.seed = result.config.opt.seed;
  const auto& c = result.config;
  b.config = {{"T", c.antennas},
              {"K", c.users},
              {"snr_grid", c.snr_grid},
              {"experiments", c.experiments},
              {"jitter_std", c.jitter_std},
              {"P_m", c.pc.mean_power},
              {"P_c", c.pc.peak_antenna_power},
              {"eta", c.opt.eta},
              {"n_samples", c.opt.n_samples},
              {"iterations", c.opt.max_iterations},
              {"n_eval", c.opt.n_eval},
              {"restarts", c.opt.restarts},
              {"seed", c.opt.seed},
              {"convention", std::string(ConventionName(c.opt.kernel.convention))},
              {"encoders", c.encoders}};
  for (const auto& cell : result.cells) {
    if (cell.available)
      AppendRows(b, cell.experiment, cell.snr_db, cell.encoder, cell.mi);
    else
      AppendUnavailable(b, cell.experiment, cell.snr_db, cell.encoder, c.users);
  }
  for (const auto& a : result.aggregates) {
    if (a.experiments == 0)
      b.summary.push_back({a.snr_db, a.encoder, {}, {}});
    else
      b.summary.push_back({a.snr_db, a.encoder, a.mean_min_mi, a.mean_mean_mi});
  }
  return b;
}

std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string Hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string UtcNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string RunId(const ResultBundle& bundle) {
  return Hex(Fnv1a64(bundle.command + "|" + std::to_string(bundle.seed) + "|" +
                     bundle.config.dump()));
}

void WriteFileAtomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot rename into '" + path.string() + "': " + ec.message());
}

std::vector<fs::path> WriteResults(const ResultBundle& bundle, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& c : bundle.constellations)
    files.emplace_back(c.file, ConstellationCsv(c.constellation, c.space));
  files.emplace_back("mi.csv", MiCsv(bundle.mi));
  files.emplace_back("summary.csv", SummaryCsv(bundle.summary));
  if (!bundle.loss_history.empty())
    files.emplace_back("loss_history.csv", LossHistoryCsv(bundle.loss_history));

  const std::string run_id = RunId(bundle);
  json manifest;
  manifest["run_id"] = run_id;
  manifest["tool"] = "jcd";
  manifest["version"] = kToolVersion;
  manifest["command"] = bundle.command;
  manifest["seed"] = bundle.seed;
  manifest["config"] = bundle.config;
  manifest["created_utc"] = UtcNow();
  manifest["outputs"] = json::array();

  std::vector<fs::path> written;
  for (const auto& [name, text] : files) {
    WriteFileAtomic(out_dir / name, text);
    manifest["outputs"].push_back({{"file", name}, {"run_id", run_id}, {"fnv1a64", Hex(Fnv1a64(text))}});
    written.push_back(out_dir / name);
  }
  WriteFileAtomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
  written.push_back(out_dir / "manifest.json");
  return written;
}

LabeledConstellation ParseConstellationCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "w,antenna,re,im")
    throw Error(ErrorCode::kParseError, "constellation csv must start with 'w,antenna,re,im'");

  std::vector<std::string> labels;
  std::vector<std::vector<Complex>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 4)
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected 4 columns");
    try {
      const std::size_t antenna = std::stoul(f[1]);
      const Complex v{std::stod(f[2]), std::stod(f[3])};
      if (labels.empty() || labels.back() != f[0]) {
        labels.push_back(f[0]);
        rows.emplace_back();
      }
      if (antenna != rows.back().size())
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": antennas must be listed in order");
      rows.back().push_back(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": bad number");
    }
  }
  if (rows.empty()) throw Error(ErrorCode::kParseError, "constellation csv has no rows");
  Eigen::MatrixXcd x(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != rows.front().size())
      throw Error(ErrorCode::kParseError, "points have different antenna counts");
    for (std::size_t t = 0; t < rows[j].size(); ++t)
      x(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) = rows[j][t];
  }
  return {Constellation(std::move(x)), std::move(labels)};
}

LabeledConstellation ReadConstellationCsv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConstellationCsv(ss.str());
}

std::string ConstellationSvg(const Constellation& constellation,
                             const std::vector<std::string>& labels,
                             const std::vector<Eigen::VectorXd>& channel_directions) {
  if (constellation.antennas() != 2)
    throw Error(ErrorCode::kUnplottable, "only two-antenna constellations can be plotted");
  if (constellation.MaxImagMagnitude() > 1e-9)
    throw Error(ErrorCode::kUnplottable, "constellation has imaginary parts; cannot plot");
  if (labels.size() != constellation.size())
    throw Error(ErrorCode::kValidationError, "one label per point is required");

  const auto& x = constellation.points();
  double extent = 1.0;
  for (Eigen::Index j = 0; j < x.rows(); ++j)
    extent = std::max({extent, std::abs(x(j, 0).real()), std::abs(x(j, 1).real())});
  extent *= 1.2;

  constexpr double kSize = 400.0;
  constexpr double kHalf = kSize / 2.0;
  const double s = (kHalf - 20.0) / extent;
  auto px = [&](double v) { return FormatNumber(kHalf + s * v); };
  auto py = [&](double v) { return FormatNumber(kHalf - s * v); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" "
         "viewBox=\"0 0 400 400\">\n";
  svg << "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" "
         "refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\"/></marker></defs>\n";
  svg << "<line class=\"axis\" x1=\"0\" y1=\"200\" x2=\"400\" y2=\"200\" stroke=\"#999\"/>\n";
  svg << "<line class=\"axis\" x1=\"200\" y1=\"0\" x2=\"200\" y2=\"400\" stroke=\"#999\"/>\n";
  for (std::size_t k = 0; k < channel_directions.size(); ++k) {
    const auto& d = channel_directions[k];
    const double norm = std::max(d.norm(), 1e-300);
    const double ax = d(0) / norm * extent * 0.9, ay = d(1) / norm * extent * 0.9;
    svg << "<line class=\"channel\" data-user=\"" << k << "\" x1=\"200\" y1=\"200\" x2=\""
        << px(ax) << "\" y2=\"" << py(ay)
        << "\" stroke=\"#a0522d\" marker-end=\"url(#arrow)\"/>\n";
    svg << "<text class=\"channel-label\" x=\"" << px(ax) << "\" y=\"" << py(ay)
        << "\" font-size=\"11\">zeta_" << k + 1 << "</text>\n";
  }
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    const double a = x(j, 0).real(), b = x(j, 1).real();
    svg << "<circle class=\"point\" cx=\"" << px(a) << "\" cy=\"" << py(b)
        << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    svg << "<text class=\"point-label\" x=\"" << px(a) << "\" y=\"" << py(b)
        << "\" dx=\"6\" dy=\"-6\" font-size=\"12\">" << labels[j] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void ExportSvg(const Constellation& constellation, const ChannelSet& channels,
               const MessageSpace& space, const fs::path& path) {
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < space.total(); ++j) labels.push_back(space.Label(j));
  std::vector<Eigen::VectorXd> dirs;
  for (int k = 0; k < channels.users(); ++k) dirs.push_back(channels.zeta(k).col(0).real());
  WriteFileAtomic(path, ConstellationSvg(constellation, labels, dirs));
}

}  // namespace jcd
