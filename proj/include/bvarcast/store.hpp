#ifndef BVARCAST_STORE_HPP
#define BVARCAST_STORE_HPP

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "bvarcast/forecast.hpp"

namespace bvarcast {

// Forecast draw files: a plain-text manifest header followed by one binary
// block per origin. Numeric columns are zlib-compressed little-endian f64.
namespace store_detail {

constexpr const char* kFileMagic = "bvarcast-forecasts-v1";
constexpr std::uint32_t kBlockMagic = 0x42565243; // "BVRC"

inline void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline void put_i32(std::ostream& out, std::int32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline void put_u8(std::ostream& out, std::uint8_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
inline bool get_pod(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return in.gcount() == sizeof v;
}

inline void put_column(std::ostream& out, const double* data, std::uint32_t count) {
  uLongf bound = compressBound(count * sizeof(double));
  std::vector<Bytef> buf(bound);
  uLongf comp_len = bound;
  int rc = compress2(buf.data(), &comp_len, reinterpret_cast<const Bytef*>(data),
                     count * sizeof(double), 6);
  require(rc == Z_OK, "store: zlib compression failed");
  put_u32(out, count);
  put_u32(out, static_cast<std::uint32_t>(comp_len));
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(comp_len));
}

inline bool get_column(std::istream& in, std::vector<double>& values) {
  std::uint32_t count = 0, comp_len = 0;
  if (!get_pod(in, count) || !get_pod(in, comp_len)) return false;
  std::vector<Bytef> buf(comp_len);
  in.read(reinterpret_cast<char*>(buf.data()), comp_len);
  if (in.gcount() != static_cast<std::streamsize>(comp_len)) return false;
  values.resize(count);
  uLongf raw_len = count * sizeof(double);
  int rc = uncompress(reinterpret_cast<Bytef*>(values.data()), &raw_len, buf.data(), comp_len);
  return rc == Z_OK && raw_len == count * sizeof(double);
}

inline std::string join(const std::vector<std::string>& parts, char sep) {
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

inline void write_manifest(std::ostream& out, const ForecastMeta& meta,
                           const std::vector<int>& incomplete) {
  out << kFileMagic << '\n';
  out << "model = " << meta.model << '\n';
  out << "family = " << to_string(meta.family) << '\n';
  out << "volatility = " << to_string(meta.volatility) << '\n';
  out << "lags = " << meta.lags << '\n';
  out << "window = " << meta.plan.window << '\n';
  out << "first_origin = " << meta.plan.first_origin << '\n';
  out << "origins = " << meta.plan.n_origins << '\n';
  out << "stride = " << meta.plan.stride << '\n';
  out << "seed = " << meta.seed << '\n';
  out << "n_iter = " << meta.n_iter << '\n';
  out << "n_burn = " << meta.n_burn << '\n';
  out << "series = " << join(meta.series, ',') << '\n';
  out << "version = " << meta.version << '\n';
  if (!incomplete.empty()) {
    out << "incomplete = ";
    for (size_t i = 0; i < incomplete.size(); ++i) out << (i ? "," : "") << incomplete[i];
    out << '\n';
  }
  out << "end-header\n";
}

inline std::string manifest_field(const std::map<std::string, std::string>& kv,
                                  const std::string& key, const std::string& path) {
  auto it = kv.find(key);
  if (it == kv.end()) fail(path + ": manifest missing field '" + key + "'");
  return it->second;
}

inline ForecastMeta read_manifest(std::istream& in, const std::string& path,
                                  std::vector<int>* incomplete = nullptr) {
  std::string line;
  require(std::getline(in, line) && line == kFileMagic,
          path + ": not a bvarcast forecast file (bad magic)");
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    if (line == "end-header") break;
    auto pos = line.find(" = ");
    if (pos == std::string::npos) fail(path + ": malformed manifest line '" + line + "'");
    kv[line.substr(0, pos)] = line.substr(pos + 3);
  }
  require(line == "end-header", path + ": manifest missing field 'end-header'");

  ForecastMeta meta;
  meta.model = manifest_field(kv, "model", path);
  meta.family = family_from_string(manifest_field(kv, "family", path));
  meta.volatility = volatility_from_string(manifest_field(kv, "volatility", path));
  meta.lags = std::stoi(manifest_field(kv, "lags", path));
  meta.plan.window = std::stoi(manifest_field(kv, "window", path));
  meta.plan.first_origin = std::stoi(manifest_field(kv, "first_origin", path));
  meta.plan.n_origins = std::stoi(manifest_field(kv, "origins", path));
  meta.plan.stride = std::stoi(manifest_field(kv, "stride", path));
  meta.seed = std::stoull(manifest_field(kv, "seed", path));
  meta.n_iter = std::stoi(manifest_field(kv, "n_iter", path));
  meta.n_burn = std::stoi(manifest_field(kv, "n_burn", path));
  meta.series = split(manifest_field(kv, "series", path), ',');
  meta.version = manifest_field(kv, "version", path);
  if (incomplete) {
    incomplete->clear();
    auto it = kv.find("incomplete");
    if (it != kv.end())
      for (const auto& tok : split(it->second, ','))
        if (!tok.empty()) incomplete->push_back(std::stoi(tok));
  }
  return meta;
}

inline void write_block(std::ostream& out, const ForecastRecord& rec) {
  const auto n = rec.pred.draws.cols();
  const auto m = rec.pred.draws.rows();
  put_u32(out, kBlockMagic);
  put_i32(out, rec.origin);
  put_i32(out, rec.date.serial());
  put_u8(out, 1);
  put_u32(out, static_cast<std::uint32_t>(n));
  put_u32(out, static_cast<std::uint32_t>(m));
  out.write(reinterpret_cast<const char*>(rec.realized.data()),
            static_cast<std::streamsize>(sizeof(double) * n));
  VectorXd col(m);
  for (Eigen::Index j = 0; j < n; ++j) {
    col = rec.pred.draws.col(j);
    put_column(out, col.data(), static_cast<std::uint32_t>(m));
    col = rec.pred.cond_mean.col(j);
    put_column(out, col.data(), static_cast<std::uint32_t>(m));
    col = rec.pred.cond_var.col(j);
    put_column(out, col.data(), static_cast<std::uint32_t>(m));
  }
  put_column(out, rec.pred.dof.data(), static_cast<std::uint32_t>(m));
}

inline void write_failure_block(std::ostream& out, int origin, const std::string& msg) {
  put_u32(out, kBlockMagic);
  put_i32(out, origin);
  put_i32(out, 0);
  put_u8(out, 0);
  put_u32(out, static_cast<std::uint32_t>(msg.size()));
  out.write(msg.data(), static_cast<std::streamsize>(msg.size()));
}

// Reads one block; returns 0 at clean EOF, 1 on a success block, 2 on a
// failure block, -1 on a truncated/garbled block.
inline int read_block(std::istream& in, ForecastRecord& rec, std::pair<int, std::string>& failure) {
  std::uint32_t magic = 0;
  if (!get_pod(in, magic)) return 0;
  if (magic != kBlockMagic) return -1;
  std::int32_t origin = 0, date = 0;
  std::uint8_t status = 0;
  if (!get_pod(in, origin) || !get_pod(in, date) || !get_pod(in, status)) return -1;
  if (status == 0) {
    std::uint32_t len = 0;
    if (!get_pod(in, len) || len > (1u << 20)) return -1;
    std::string msg(len, '\0');
    in.read(msg.data(), len);
    if (in.gcount() != static_cast<std::streamsize>(len)) return -1;
    failure = {origin, msg};
    return 2;
  }
  std::uint32_t n = 0, m = 0;
  if (!get_pod(in, n) || !get_pod(in, m) || n == 0 || m == 0) return -1;
  rec.origin = origin;
  rec.date = Date(date);
  rec.realized.resize(n);
  in.read(reinterpret_cast<char*>(rec.realized.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(double) * n)) return -1;
  rec.pred.resize(static_cast<int>(m), static_cast<int>(n));
  std::vector<double> values;
  for (std::uint32_t j = 0; j < n; ++j) {
    for (int which = 0; which < 3; ++which) {
      if (!get_column(in, values) || values.size() != m) return -1;
      auto target = which == 0   ? rec.pred.draws.col(j)
                    : which == 1 ? rec.pred.cond_mean.col(j)
                                 : rec.pred.cond_var.col(j);
      std::memcpy(target.data(), values.data(), sizeof(double) * m);
    }
  }
  if (!get_column(in, values) || values.size() != m) return -1;
  std::memcpy(rec.pred.dof.data(), values.data(), sizeof(double) * m);
  return 1;
}

} // namespace store_detail

// Canonical serialization: manifest plus blocks in origin order.
inline void store_forecasts(const ForecastSet& set, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), "store_forecasts: cannot write '" + path + "'");
  std::vector<int> incomplete;
  for (const auto& f : set.failures) incomplete.push_back(f.first);
  store_detail::write_manifest(out, set.meta, incomplete);
  for (const auto& rec : set.records) store_detail::write_block(out, rec);
  for (const auto& f : set.failures) store_detail::write_failure_block(out, f.first, f.second);
  require(out.good(), "store_forecasts: write failed for '" + path + "'");
}

// Strict load for evaluation: every planned origin must be present and intact.
inline ForecastSet load_forecasts(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "load_forecasts: cannot open '" + path + "'");
  ForecastSet set;
  std::vector<int> incomplete;
  set.meta = store_detail::read_manifest(in, path, &incomplete);
  ForecastRecord rec;
  std::pair<int, std::string> failure;
  for (;;) {
    int rc = store_detail::read_block(in, rec, failure);
    if (rc == 0) break;
    if (rc < 0) fail(path + ": truncated or corrupt block after origin " +
                     std::to_string(set.records.empty() ? -1 : set.records.back().origin));
    if (rc == 2) set.failures.push_back(failure);
    else set.records.push_back(rec);
  }
  require(set.failures.empty(), path + ": file contains failed origins, re-run to complete");
  require(static_cast<int>(set.records.size()) == set.meta.plan.n_origins,
          path + ": expected " + std::to_string(set.meta.plan.n_origins) + " origins, found " +
              std::to_string(set.records.size()));
  return set;
}

// Lenient recovery for resume: keeps every intact block, ignores a torn tail.
inline ForecastSet recover_forecasts(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "recover_forecasts: cannot open '" + path + "'");
  ForecastSet set;
  std::vector<int> incomplete;
  set.meta = store_detail::read_manifest(in, path, &incomplete);
  ForecastRecord rec;
  std::pair<int, std::string> failure;
  for (;;) {
    int rc = store_detail::read_block(in, rec, failure);
    if (rc <= 0) break;
    if (rc == 1) set.records.push_back(rec);
    // failed blocks are dropped so the origins get recomputed
  }
  return set;
}

} // namespace bvarcast

#endif
