#include "anharm/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <Eigen/Core>

#include "anharm/error.hpp"

namespace anharm::io {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw Error(ErrorKind::config_error, "row width differs from header");
  rows.push_back(std::move(row));
}

std::string Table::csv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

nlohmann::json Table::json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < header.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(r[i].c_str(), &end);
      if (!r[i].empty() && end == r[i].c_str() + r[i].size() && std::isfinite(v)) {
        obj[header[i]] = v;
      } else {
        obj[header[i]] = r[i];
      }
    }
    out.push_back(std::move(obj));
  }
  return out;
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.add(std::move(cells));
    }
  }
  return t;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io_error, "cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error(ErrorKind::io_error, "write to " + path.string() + " failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Table field_table(const pseudo::PseudospectrumField& field) {
  Table t;
  t.header = {"re", "im", "log10_resnorm"};
  const contour::Grid& g = field.grid;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) t.add({num(g.re(ix)), num(g.im(iy)), num(g.at(ix, iy))});
  }
  return t;
}

nlohmann::json contours_json(const pseudo::ContourSet& set) {
  nlohmann::json levels = nlohmann::json::array();
  for (double eps : set.epsilons) {
    nlohmann::json comps = nlohmann::json::array();
    int label = 0;
    for (const pseudo::Component& c : set.components) {
      if (c.epsilon != eps) continue;
      nlohmann::json vertices = nlohmann::json::array();
      for (const cplx& v : c.line.vertices) vertices.push_back({v.real(), v.imag()});
      comps.push_back({{"label", label++},
                       {"closed", c.line.closed},
                       {"perimeter", c.line.perimeter},
                       {"enclosed", c.enclosed},
                       {"vertices", vertices}});
    }
    levels.push_back({{"epsilon", eps}, {"components", comps}});
  }
  return {{"levels", levels}, {"open_lines", set.open_lines}};
}

Table perimeter_table(const std::vector<pseudo::PerimeterResult>& results) {
  Table t;
  t.header = {"n", "epsilon", "kappa", "bound", "perimeter_grid", "perimeter", "slack", "checked", "passed", "note"};
  for (const pseudo::PerimeterResult& r : results) {
    std::string note = r.note;
    for (char& ch : note) {
      if (ch == ',') ch = ';';
    }
    t.add({std::to_string(r.n), num(r.epsilon), num(r.kappa), num(r.bound), num(r.perimeter_grid), num(r.perimeter),
           num(r.slack), r.checked ? "1" : "0", r.passed ? "1" : "0", note});
  }
  return t;
}

Table scatter_table(const std::vector<pseudo::ScatterTrial>& trials) {
  Table t;
  t.header = {"trial", "re", "im"};
  for (const pseudo::ScatterTrial& trial : trials) {
    for (const cplx& z : trial.eigenvalues) t.add({std::to_string(trial.trial), num(z.real()), num(z.imag())});
  }
  return t;
}

nlohmann::json sidecar(const std::string& command, const nlohmann::json& config, double wall_seconds) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  std::ostringstream eigen;
  eigen << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  return {{"command", command},
          {"config", config},
          {"versions", {{"anharm", "1.0.0"}, {"eigen", eigen.str()}, {"compiler", __VERSION__}}},
          {"wall_seconds", wall_seconds},
          {"timestamp", stamp}};
}

}  // namespace anharm::io
