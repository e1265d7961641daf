#include "rdcontract/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rdcontract/errors.hpp"

namespace rdc {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string OutputHeader::comment_line() const {
  char buf[80];
  std::snprintf(buf, sizeof buf, "# config_hash=%016llx seed=%llu",
                static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void emit_plot_data(const Series& s, const std::string& path, const OutputHeader& hdr) {
  if (s.rows.empty() || s.columns.empty())
    throw InvalidParameter("emit_plot_data: empty series");
  for (const auto& row : s.rows)
    if (row.size() != s.columns.size())
      throw InvalidParameter("emit_plot_data: ragged row");
  std::ofstream out = open_out(path);
  out << hdr.comment_line() << '\n';
  for (std::size_t c = 0; c < s.columns.size(); ++c)
    out << (c ? "," : "") << s.columns[c];
  out << '\n';
  for (const auto& row : s.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      out << (c ? "," : "") << format_g17(row[c]);
    out << '\n';
  }
  finish(out, path);
}

Series read_series_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  Series s;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (!header_seen) {
      while (std::getline(ss, cell, ',')) s.columns.push_back(cell);
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    s.rows.push_back(std::move(row));
  }
  if (!header_seen) throw IoError("no header row in " + path);
  return s;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                          const OutputHeader& hdr) {
  Series s;
  s.columns = {"t", "species", "x", "value"};
  const auto& nodes = traj.grid->nodes;
  s.rows.reserve(traj.times.size() * traj.species * nodes.size());
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    for (int sp = 0; sp < traj.species; ++sp)
      for (int i = 0; i < traj.grid->n; ++i)
        s.rows.push_back({traj.times[k], double(sp), nodes[i], traj.states[k][sp][i]});
  emit_plot_data(s, path, hdr);
}

void write_norms_csv(const Trajectory& traj, const std::string& path,
                     const OutputHeader& hdr) {
  Series s;
  s.columns = {"t", "l2_norm"};
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    s.rows.push_back({traj.times[k], traj.norms[k]});
  emit_plot_data(s, path, hdr);
}

void write_field_csv(const ScalarField& f, const std::string& path,
                     const OutputHeader& hdr) {
  Series s;
  s.columns = {"x", "value"};
  for (int i = 0; i < f.size(); ++i)
    s.rows.push_back({f.grid->nodes[i], f.values[i]});
  emit_plot_data(s, path, hdr);
}

std::string field_to_json(const ScalarField& f) {
  nlohmann::json j;
  j["n"] = f.grid->n;
  j["x"] = std::vector<double>(f.grid->nodes.begin(), f.grid->nodes.end());
  j["value"] = std::vector<double>(f.values.begin(), f.values.end());
  return j.dump(2);
}

std::string profile_to_json(const VolumeProfile& p) {
  nlohmann::json j;
  j["r"] = p.r;
  j["x_star"] = p.x_star;
  j["n"] = p.v.grid->n;
  j["x"] = std::vector<double>(p.v.grid->nodes.begin(), p.v.grid->nodes.end());
  j["value"] = std::vector<double>(p.v.values.begin(), p.v.values.end());
  return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
  finish(out, path);
}

}  // namespace rdc
