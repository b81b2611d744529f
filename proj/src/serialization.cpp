// SPDX-License-Identifier: Apache-2.0
#include "symcap/serialization.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace symcap {

namespace {

constexpr char kCacheMagic[8] = {'S', 'Y', 'M', 'C', 'A', 'P', 'N', 'D'};

std::string at(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }

const Json& field(const Json& j, std::string_view key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
  auto it = j.find(std::string(key));
  if (it == j.end()) throw SchemaError(at(path, key), "missing field");
  return *it;
}

double get_real(const Json& j, std::string_view key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_number()) throw SchemaError(at(path, key), "expected a number");
  return v.get<double>();
}

std::int64_t get_int(const Json& j, std::string_view key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_number_integer()) throw SchemaError(at(path, key), "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t get_uint(const Json& j, std::string_view key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw SchemaError(at(path, key), "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const Json& j, std::string_view key, const std::string& path) {
  const Json& v = field(j, key, path);
  if (!v.is_string()) throw SchemaError(at(path, key), "expected a string");
  return v.get<std::string>();
}

Json complex_pair(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

std::complex<double> complex_from(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SchemaError(path, "expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Eigen::RowVectorXcd complex_row(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  Eigen::RowVectorXcd row(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) row(static_cast<Eigen::Index>(k)) = complex_from(j[k], path + "/" + std::to_string(k));
  return row;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string config_hash(const Json& config) { return hex64(fnv1a64(config.dump())); }

Json provenance(std::uint64_t seed, const std::string& hash) {
  Json j;
  j["tool"] = "symcap";
  j["version"] = std::string(kToolVersion);
  j["seed"] = seed;
  j["config_hash"] = hash;
  return j;
}

std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

Json to_json(const PauliChannel& ch) {
  Json j;
  j["p_i"] = ch.p_i;
  j["p_x"] = ch.p_x;
  j["p_y"] = ch.p_y;
  j["p_z"] = ch.p_z;
  return j;
}

PauliChannel channel_from_json(const Json& j, const std::string& path) {
  try {
    return PauliChannel::make(get_real(j, "p_i", path), get_real(j, "p_x", path), get_real(j, "p_y", path),
                              get_real(j, "p_z", path));
  } catch (const ChannelError& e) {
    throw SchemaError(path.empty() ? "/" : path, e.what());
  }
}

Json to_json(const SpanningBasis& basis) {
  Json j;
  j["n"] = basis.n;
  j["seed"] = basis.seed;
  Json states = Json::array();
  for (const auto& s : basis.states) states.push_back(Json::array({complex_pair(s.c0), complex_pair(s.c1)}));
  j["states"] = std::move(states);
  j["condition_number"] = basis.condition_number;
  return j;
}

SpanningBasis basis_from_json(const Json& j, const std::string& path) {
  const auto n = get_int(j, "n", path);
  const auto seed = get_uint(j, "seed", path);
  const Json& states = field(j, "states", path);
  if (!states.is_array()) throw SchemaError(at(path, "states"), "expected an array");
  std::vector<QubitState> qs;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string p = at(path, "states") + "/" + std::to_string(i);
    if (!states[i].is_array() || states[i].size() != 2) throw SchemaError(p, "expected [c0, c1]");
    qs.push_back({complex_from(states[i][0], p + "/0"), complex_from(states[i][1], p + "/1")});
  }
  if (n < 1 || static_cast<std::size_t>(n) + 1 != qs.size()) throw SchemaError(at(path, "states"), "need n+1 states");
  return make_spanning_basis(static_cast<int>(n), std::move(qs), seed);
}

Json to_json(const SymmetricInput& input) {
  Json j;
  j["n"] = input.n;
  for (int i = 0; i < 2; ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < input.alpha.cols(); ++k) row.push_back(complex_pair(input.alpha(i, k)));
    j[i == 0 ? "alpha0" : "alpha1"] = std::move(row);
  }
  return j;
}

SymmetricInput input_from_json(const Json& j, const std::string& path) {
  const auto n = get_int(j, "n", path);
  if (n < 1) throw SchemaError(at(path, "n"), "must be at least 1");
  Eigen::MatrixXcd alpha(2, n + 1);
  for (int i = 0; i < 2; ++i) {
    const char* key = i == 0 ? "alpha0" : "alpha1";
    const Eigen::RowVectorXcd row = complex_row(field(j, key, path), at(path, key));
    if (row.size() != n + 1) throw SchemaError(at(path, key), "expected n+1 entries");
    if (!(row.norm() > 0.0)) throw SchemaError(at(path, key), "zero row");
    alpha.row(i) = row;
  }
  // Files written by hand need not be normalized.
  return SymmetricInput::normalized(std::move(alpha));
}

Json to_json(const ThresholdRecord& rec) {
  Json j;
  j["family"] = std::string(family_name(rec.family));
  j["n"] = rec.n;
  j["p_star"] = rec.p_star;
  j["p_upper"] = rec.p_upper;
  j["ci_at_bracket"] = Json::array({rec.ci_lo, rec.ci_hi});
  j["seed"] = rec.seed;
  j["restarts"] = rec.restarts;
  j["wall_time_s"] = rec.wall_time_s;
  j["best_input"] = to_json(rec.best_input);
  return j;
}

ThresholdRecord record_from_json(const Json& j, const std::string& path) {
  ThresholdRecord rec;
  const auto fam = parse_family(get_string(j, "family", path));
  if (!fam) throw SchemaError(at(path, "family"), "unknown channel family");
  rec.family = *fam;
  rec.n = static_cast<int>(get_int(j, "n", path));
  rec.p_star = get_real(j, "p_star", path);
  rec.p_upper = get_real(j, "p_upper", path);
  const Json& ci = field(j, "ci_at_bracket", path);
  if (!ci.is_array() || ci.size() != 2 || !ci[0].is_number() || !ci[1].is_number()) {
    throw SchemaError(at(path, "ci_at_bracket"), "expected [ci_lo, ci_hi]");
  }
  rec.ci_lo = ci[0].get<double>();
  rec.ci_hi = ci[1].get<double>();
  rec.seed = get_uint(j, "seed", path);
  rec.restarts = static_cast<int>(get_int(j, "restarts", path));
  rec.wall_time_s = get_real(j, "wall_time_s", path);
  rec.best_input = input_from_json(field(j, "best_input", path), at(path, "best_input"));
  if (rec.best_input.n != rec.n) throw SchemaError(at(path, "best_input/n"), "does not match n");
  return rec;
}

Json parse_json_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SchemaError(file.string(), "cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(file.string(), std::string("malformed JSON: ") + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& file, std::string_view contents) {
  std::filesystem::path tmp = file;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace " + file.string());
  }
}

void save_precomputation(const std::filesystem::path& file, const Precomputation& pre, const Json& meta) {
  Json m = meta;
  m["n"] = pre.n;
  m["channel"] = to_json(pre.channel);
  m["basis"] = to_json(pre.basis);
  Json blocks = Json::array();
  std::size_t total = 0;
  for (const auto& b : pre.blocks) {
    blocks.push_back(Json::array({b.lambda[0], b.lambda[1]}));
    total += b.nd.size();
  }
  m["blocks"] = std::move(blocks);
  m["nd_values"] = total;
  const std::string text = m.dump();

  std::string bytes(kCacheMagic, sizeof kCacheMagic);
  const std::uint64_t len = text.size();
  for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((len >> (8 * i)) & 0xff));
  bytes += text;
  const std::size_t head = bytes.size();
  bytes.resize(head + total * sizeof(std::complex<double>));
  char* dst = bytes.data() + head;
  for (const auto& b : pre.blocks) {
    const std::size_t sz = b.nd.size() * sizeof(std::complex<double>);
    std::memcpy(dst, b.nd.data(), sz);
    dst += sz;
  }
  write_file_atomic(file, bytes);
}

namespace {

std::optional<std::pair<Json, std::string>> read_cache(const std::filesystem::path& file, bool want_payload) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  unsigned char lenb[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kCacheMagic, 8) != 0) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(lenb), 8)) return std::nullopt;
  std::uint64_t len = 0;
  for (int i = 0; i < 8; ++i) len |= static_cast<std::uint64_t>(lenb[i]) << (8 * i);
  if (len > (std::uint64_t{1} << 32)) return std::nullopt;
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) return std::nullopt;
  Json meta = Json::parse(text, nullptr, false);
  if (meta.is_discarded()) return std::nullopt;
  std::string payload;
  if (want_payload) payload.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return std::make_pair(std::move(meta), std::move(payload));
}

}  // namespace

std::optional<Json> peek_cache_meta(const std::filesystem::path& file) {
  auto r = read_cache(file, false);
  if (!r) return std::nullopt;
  return std::move(r->first);
}

LoadedCache load_precomputation(const std::filesystem::path& file) {
  auto r = read_cache(file, true);
  if (!r) throw SchemaError(file.string(), "not a precomputation cache");
  const Json& meta = r->first;
  const std::string& payload = r->second;
  LoadedCache out;
  out.meta = meta;
  Precomputation& pre = out.pre;
  pre.n = static_cast<int>(get_int(meta, "n", ""));
  pre.channel = channel_from_json(field(meta, "channel", ""), "/channel");
  pre.basis = basis_from_json(field(meta, "basis", ""), "/basis");
  if (pre.basis.n != pre.n) throw SchemaError("/basis/n", "does not match n");
  const std::size_t cols = static_cast<std::size_t>(pre.n + 1);
  std::size_t offset = 0;
  for (const auto& lambda : enumerate_partitions(pre.n, 2)) {
    Precomputation::Block b;
    b.lambda = lambda;
    b.dim = lambda.l() + 1;
    b.specht = specht_dim_real(lambda);
    const std::size_t count = cols * cols * static_cast<std::size_t>(b.dim) * static_cast<std::size_t>(b.dim);
    const std::size_t sz = count * sizeof(std::complex<double>);
    if (offset + sz > payload.size()) throw SchemaError(file.string(), "truncated ND payload");
    b.nd.resize(count);
    std::memcpy(b.nd.data(), payload.data() + offset, sz);
    offset += sz;
    pre.blocks.push_back(std::move(b));
  }
  if (offset != payload.size()) throw SchemaError(file.string(), "trailing bytes after ND payload");
  return out;
}

std::string format_sweep_row(const SweepRow& row) {
  std::ostringstream os;
  os << family_short_name(row.family) << ',' << row.n << ',' << format_real(row.p_star) << ','
     << format_real(row.ci_lo) << ',' << format_real(row.ci_hi) << ',' << row.seed << ',' << row.restarts << ','
     << format_real(row.wall_time_s);
  return os.str();
}

SweepRow parse_sweep_row(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  if (cells.size() != 8) throw SchemaError("csv", "expected 8 columns in '" + std::string(line) + "'");
  SweepRow r;
  const auto fam = parse_family(cells[0]);
  if (!fam) throw SchemaError("csv", "unknown family '" + cells[0] + "'");
  r.family = *fam;
  try {
    r.n = std::stoi(cells[1]);
    r.p_star = std::stod(cells[2]);
    r.ci_lo = std::stod(cells[3]);
    r.ci_hi = std::stod(cells[4]);
    r.seed = std::stoull(cells[5]);
    r.restarts = std::stoi(cells[6]);
    r.wall_time_s = std::stod(cells[7]);
  } catch (const std::exception&) {
    throw SchemaError("csv", "bad number in '" + std::string(line) + "'");
  }
  return r;
}

std::string format_sweep_file(const SweepFile& file) {
  std::string out = "# " + file.provenance.dump() + "\n";
  out += kSweepHeader;
  out += '\n';
  for (const auto& r : file.rows) out += format_sweep_row(r) + "\n";
  return out;
}

SweepFile parse_sweep_file(const std::string& text, const std::string& path) {
  SweepFile f;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      f.provenance = Json::parse(line.substr(2), nullptr, false);
      if (f.provenance.is_discarded()) throw SchemaError(path, "bad provenance line");
      continue;
    }
    if (!header) {
      if (line != kSweepHeader) throw SchemaError(path, "unexpected CSV header");
      header = true;
      continue;
    }
    f.rows.push_back(parse_sweep_row(line));
  }
  return f;
}

}  // namespace symcap
