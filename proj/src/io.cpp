#include "kzk/io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kzk {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), end);
}

std::filesystem::path resolve_output_dir(const std::string& dir, const std::filesystem::path& base) {
  const std::filesystem::path d(dir);
  if (d.is_absolute()) return d;
  if (const char* root = std::getenv("KZK_OUTPUT_ROOT"); root && *root) return std::filesystem::path(root) / d;
  return base / d;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_records_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records,
                       const std::vector<std::string>& weight_names,
                       const std::vector<std::string>& strong_names,
                       const std::vector<std::string>& lambda_names) {
  std::vector<std::string> cols{"t", "mass"};
  for (const auto& n : weight_names) cols.push_back("weighted_mass:" + n);
  for (const auto& n : strong_names) cols.push_back("weighted_strong:" + n);
  cols.push_back("h1_energy");
  cols.push_back("mu2_norm");
  for (const auto& n : lambda_names) cols.push_back("lambda_plus:" + n);

  std::ostringstream os;
  os << "# columns=";
  for (size_t k = 0; k < cols.size(); ++k) os << (k ? ";" : "") << cols[k];
  os << "\n";
  for (size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << "\n";
  for (const auto& r : records) {
    os << format_double(r.t) << ',' << format_double(r.mass);
    for (double v : r.weighted_mass) os << ',' << format_double(v);
    for (double v : r.weighted_strong) os << ',' << format_double(v);
    os << ',' << format_double(r.h1_energy) << ',' << format_double(r.mu2_norm);
    for (double v : r.lambda_plus) os << ',' << format_double(v);
    os << "\n";
  }
  write_text(path, os.str());
}

void write_field_csv(const std::filesystem::path& path, const Field& u) {
  const Grid& g = u.grid();
  const Eigen::MatrixXd v = u.physical();
  std::ostringstream os;
  os << "# nx=" << g.nx << "\n# ny=" << g.ny() << "\n# X_max=" << format_double(g.X_max)
     << "\n# L=" << format_double(g.basis.L()) << "\n# family=" << family_tag(g.basis.family())
     << "\n# modes=" << g.modes() << "\n";
  for (int i = 0; i < v.rows(); ++i) {
    for (int j = 0; j < v.cols(); ++j) os << (j ? "," : "") << format_double(v(i, j));
    os << "\n";
  }
  write_text(path, os.str());
}

FieldFile read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field file " + path.string());
  FieldFile f;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      f.header[key] = line.substr(eq + 1);
      continue;
    }
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) throw std::runtime_error("bad number in " + path.string());
      row.push_back(v);
      p = next;
      if (p < end && *p == ',') ++p;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged rows in " + path.string());
    rows.push_back(std::move(row));
  }
  for (const char* key : {"nx", "ny", "X_max", "L"})
    if (!f.header.count(key)) throw std::runtime_error(path.string() + " lacks header " + key);
  const int nx = std::stoi(f.header["nx"]);
  const int ny = std::stoi(f.header["ny"]);
  if (static_cast<int>(rows.size()) != nx || (nx > 0 && static_cast<int>(rows[0].size()) != ny))
    throw std::runtime_error(path.string() + " does not match its declared shape");
  f.values.resize(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) f.values(i, j) = rows[i][j];
  return f;
}

void write_metadata(const std::filesystem::path& dir, const std::string& command) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::array<char, 64> stamp{};
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(stamp.data(), stamp.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  write_text(dir / "metadata.txt", std::string("timestamp=") + stamp.data() + "\ncommand=" + command + "\n");
}

} // namespace kzk
