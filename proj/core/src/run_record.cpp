#include "mspcguard/run_record.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mspcguard/csv.hpp"
#include "mspcguard/errors.hpp"

namespace mspcguard {

namespace {

std::filesystem::path meta_path_for(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension();
  p += ".meta.json";
  return p;
}

}  // namespace

void RunRecord::write_csv(const std::filesystem::path& csv_path) const {
  std::ofstream out(csv_path);
  if (!out) throw InputFault("cannot open " + csv_path.string() + " for writing");

  std::string header = "time_s";
  for (const auto& name : variable_names) header += "," + name + "_c";
  for (const auto& name : variable_names) header += "," + name + "_p";
  out << header << '\n';

  const Eigen::Index n = rows();
  const Eigen::Index m = controller_view.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    std::string line = format_double(times_s[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m; ++j) line += "," + format_double(controller_view(i, j));
    for (Eigen::Index j = 0; j < m; ++j) line += "," + format_double(process_view(i, j));
    out << line << '\n';
  }
  if (!out) throw InputFault("write failed: " + csv_path.string());

  nlohmann::json meta{
      {"scenario", scenario.to_json()},
      {"seed", scenario.seed},
      {"onset_h", scenario.onset_h},
      {"plant", params.to_json()},
      {"control", control.to_json()},
      {"variables", variable_names},
  };
  std::ofstream meta_out(meta_path_for(csv_path));
  if (!meta_out) throw InputFault("cannot write run meta sidecar");
  meta_out << meta.dump(2) << '\n';
}

RunRecord RunRecord::read_csv(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw InputFault("cannot open " + csv_path.string());

  std::string line;
  if (!std::getline(in, line)) throw InputFault("empty run CSV");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "time_s" || (header.size() - 1) % 2 != 0) {
    throw InputFault("malformed run CSV header");
  }
  const std::size_t m = (header.size() - 1) / 2;

  RunRecord rec;
  rec.variable_names.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& col = header[1 + j];
    if (col.size() < 2 || col.substr(col.size() - 2) != "_c") {
      throw InputFault("expected controller-view column, got " + col);
    }
    rec.variable_names.push_back(col.substr(0, col.size() - 2));
  }

  std::vector<double> times;
  std::vector<double> cbuf, pbuf;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) throw InputFault("ragged run CSV row");
    times.push_back(parse_double(fields[0]));
    for (std::size_t j = 0; j < m; ++j) cbuf.push_back(parse_double(fields[1 + j]));
    for (std::size_t j = 0; j < m; ++j) pbuf.push_back(parse_double(fields[1 + m + j]));
  }
  const auto n = static_cast<Eigen::Index>(times.size());
  rec.times_s = std::move(times);
  rec.controller_view =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          cbuf.data(), n, static_cast<Eigen::Index>(m));
  rec.process_view =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          pbuf.data(), n, static_cast<Eigen::Index>(m));

  const auto meta_path = meta_path_for(csv_path);
  if (std::filesystem::exists(meta_path)) {
    std::ifstream meta_in(meta_path);
    nlohmann::json meta = nlohmann::json::parse(meta_in);
    rec.scenario = ScenarioConfig::from_json(meta.at("scenario"));
    rec.params = PlantParams::from_json(meta.at("plant"));
    rec.control = ControlConfig::from_json(meta.at("control"));
  }
  return rec;
}

}  // namespace mspcguard
