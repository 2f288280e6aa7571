#include "kkf/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kkf {

const char* const kSeriesHeader =
    "step,t,abs_r,phase_r,abs_s,mass_min,mass_max,min_rho,tail_mass,boundary_leak";

namespace {

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t take_u64(const std::string& data, std::size_t& pos) {
  if (pos + 8 > data.size()) throw std::runtime_error("snapshot truncated");
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + b])) << (8 * b);
  pos += 8;
  return v;
}

double take_f64(const std::string& data, std::size_t& pos) {
  return std::bit_cast<double>(take_u64(data, pos));
}

}  // namespace

std::string series_to_string(const std::vector<DiagnosticsRecord>& records) {
  std::string out = kSeriesHeader;
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.step);
    for (double v : {r.t, r.abs_r, r.phase_r, r.abs_s, r.mass_min, r.mass_max, r.min_rho,
                     r.tail_mass, r.boundary_leak}) {
      out += ',';
      append_number(out, v);
    }
    out += '\n';
  }
  return out;
}

void write_series(const std::string& path, const std::vector<DiagnosticsRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open series file for writing: " + path);
  out << series_to_string(records);
  if (!out) throw std::runtime_error("failed writing series file: " + path);
}

void write_snapshot(const std::string& path, const DensityField& field, double t) {
  std::string buf;
  buf.reserve(4 + 8 * 8 + 8 * field.values.size());
  buf += "KKF1";
  put_u64(buf, field.grid.n_omega);
  put_u64(buf, field.grid.n_theta);
  put_u64(buf, field.grid.n_Omega);
  put_f64(buf, field.grid.d_omega);
  put_f64(buf, field.grid.d_t);
  put_f64(buf, field.grid.d_Omega);
  put_f64(buf, field.grid.G_omega);
  put_f64(buf, t);
  for (double v : field.values) put_f64(buf, v);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("failed writing snapshot: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (data.size() < 4 || data.compare(0, 4, "KKF1") != 0)
    throw std::runtime_error("not a snapshot file (bad magic)");
  std::size_t pos = 4;

  GridSpec g;
  g.n_omega = take_u64(data, pos);
  g.n_theta = take_u64(data, pos);
  g.n_Omega = take_u64(data, pos);
  g.d_omega = take_f64(data, pos);
  g.d_t = take_f64(data, pos);
  g.d_Omega = take_f64(data, pos);
  g.G_omega = take_f64(data, pos);
  const double t = take_f64(data, pos);
  g.d_theta = g.d_omega * g.d_t;

  const std::size_t count = g.n_omega * g.n_theta * g.n_Omega;
  if (data.size() != pos + 8 * count)
    throw std::runtime_error("snapshot size does not match its dimensions");

  Snapshot snap;
  snap.field.grid = g;
  snap.field.values.resize(count);
  for (std::size_t idx = 0; idx < count; ++idx) snap.field.values[idx] = take_f64(data, pos);
  snap.t = t;
  return snap;
}

}  // namespace kkf
