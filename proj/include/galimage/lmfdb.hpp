#pragma once

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "galimage/modsym.hpp"

namespace galimage::lmfdb {

using ordered_json = nlohmann::ordered_json;

/// Characteristic polynomial of a_p over Q, integer coefficients, constant term first.
struct HeckeEntry {
  u64 p = 0;
  std::vector<i64> charpoly;

  friend bool operator==(const HeckeEntry&, const HeckeEntry&) = default;
};

/// One Galois orbit of weight-2 newforms with trivial character.
struct NewformRecord {
  std::string label;
  u64 level = 0;
  unsigned weight = 2;
  unsigned dim = 1;  // degree of the coefficient field
  u64 hecke_bound = 0;
  std::vector<HeckeEntry> ap;  // ascending p <= hecke_bound

  bool has(u64 p) const {
    return std::any_of(ap.begin(), ap.end(), [&](const HeckeEntry& e) { return e.p == p; });
  }
  const std::vector<i64>& charpoly(u64 p) const {
    for (const auto& e : ap) {
      if (e.p == p) return e.charpoly;
    }
    fail(ErrorKind::invalid_input, "NewformRecord " + label + ": no a_p for p = " + std::to_string(p));
  }
  /// a_p itself; only for rational forms.
  i64 a(u64 p) const {
    require(dim == 1, "NewformRecord " + label + ": a_p is not rational");
    return -charpoly(p)[0];
  }

  friend bool operator==(const NewformRecord&, const NewformRecord&) = default;
};

/// Everything stored in one cache file.
struct NewformSet {
  u64 level = 0;
  unsigned weight = 2;
  std::string source;
  std::string timestamp;
  std::vector<NewformRecord> newforms;

  unsigned total_dim() const {
    unsigned d = 0;
    for (const auto& f : newforms) d += f.dim;
    return d;
  }
  const NewformRecord& by_label(const std::string& label) const {
    for (const auto& f : newforms) {
      if (f.label == label) return f;
    }
    fail(ErrorKind::invalid_input, "no newform labelled " + label);
  }

  friend bool operator==(const NewformSet&, const NewformSet&) = default;
};

inline constexpr const char* cache_schema = "1";

inline std::string cache_filename(u64 level) { return "N" + std::to_string(level) + "k2.json"; }

inline ordered_json to_json(const NewformRecord& r) {
  ordered_json ap = ordered_json::array();
  for (const auto& e : r.ap) ap.push_back(ordered_json{{"p", e.p}, {"charpoly", e.charpoly}});
  return ordered_json{{"label", r.label}, {"level", r.level},           {"weight", r.weight},
                      {"dim", r.dim},     {"hecke_bound", r.hecke_bound}, {"ap", ap}};
}

inline ordered_json to_json(const NewformSet& s) {
  ordered_json forms = ordered_json::array();
  for (const auto& f : s.newforms) forms.push_back(to_json(f));
  return ordered_json{{"schema", cache_schema}, {"level", s.level},         {"weight", s.weight},
                      {"source", s.source},     {"timestamp", s.timestamp}, {"newforms", forms}};
}

/// Canonical file contents: two-space indent and a trailing newline.
inline std::string serialize(const NewformSet& s) { return to_json(s).dump(2) + "\n"; }

namespace detail {

inline std::string excerpt(const std::string& text, std::size_t n = 160) {
  std::string e = text.substr(0, n);
  std::replace(e.begin(), e.end(), '\n', ' ');
  return text.size() > n ? e + "..." : e;
}

[[noreturn]] inline void parse_fail(const std::string& what, const std::string& payload) {
  fail(ErrorKind::parse, "lmfdb: " + what + "; payload starts: " + excerpt(payload));
}

template <class T>
T field(const ordered_json& j, const char* key, const std::string& payload) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'", payload);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    parse_fail(std::string("field '") + key + "' has the wrong type", payload);
  }
}

inline std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline bool label_less(const std::string& a, const std::string& b) {
  const auto sa = a.substr(a.rfind('.') + 1), sb = b.substr(b.rfind('.') + 1);
  if (sa.size() != sb.size()) return sa.size() < sb.size();
  return sa < sb;
}

}  // namespace detail

inline NewformSet parse_newform_set(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    detail::parse_fail(std::string("invalid JSON (") + e.what() + ")", text);
  }
  using detail::field;
  if (field<std::string>(j, "schema", text) != cache_schema) detail::parse_fail("unsupported schema", text);
  NewformSet s;
  s.level = field<u64>(j, "level", text);
  s.weight = field<unsigned>(j, "weight", text);
  s.source = field<std::string>(j, "source", text);
  s.timestamp = field<std::string>(j, "timestamp", text);
  for (const auto& f : field<ordered_json>(j, "newforms", text)) {
    NewformRecord r;
    r.label = field<std::string>(f, "label", text);
    r.level = field<u64>(f, "level", text);
    r.weight = field<unsigned>(f, "weight", text);
    r.dim = field<unsigned>(f, "dim", text);
    r.hecke_bound = field<u64>(f, "hecke_bound", text);
    for (const auto& e : field<ordered_json>(f, "ap", text)) {
      HeckeEntry h{field<u64>(e, "p", text), field<std::vector<i64>>(e, "charpoly", text)};
      if (h.charpoly.size() != r.dim + 1 || h.charpoly.back() != 1) {
        detail::parse_fail(r.label + ": charpoly at p = " + std::to_string(h.p) + " is not monic of degree dim", text);
      }
      if (!r.ap.empty() && r.ap.back().p >= h.p) detail::parse_fail(r.label + ": a_p not ascending", text);
      r.ap.push_back(std::move(h));
    }
    if (r.level != s.level || r.weight != s.weight) detail::parse_fail(r.label + ": level or weight mismatch", text);
    s.newforms.push_back(std::move(r));
  }
  return s;
}

struct ClientConfig {
  std::filesystem::path cache_dir;
  bool offline = false;
  std::string base_url = "https://www.lmfdb.org";
  u64 hecke_bound = 100;
  std::chrono::milliseconds delay{1000};    // between sequential requests
  std::chrono::milliseconds backoff{2000};  // first retry wait, doubled each time
  unsigned retries = 3;
  std::chrono::seconds timeout{30};

  /// Cache directory from GALIMAGE_CACHE_DIR, else the committed fixtures; offline from GALIMAGE_OFFLINE.
  static ClientConfig from_environment() {
    ClientConfig c;
    if (const char* dir = std::getenv("GALIMAGE_CACHE_DIR"); dir && *dir) {
      c.cache_dir = dir;
    } else {
#ifdef GALIMAGE_FIXTURE_DIR
      c.cache_dir = GALIMAGE_FIXTURE_DIR;
#else
      c.cache_dir = "data/lmfdb";
#endif
    }
    if (const char* off = std::getenv("GALIMAGE_OFFLINE"); off && *off && std::string(off) != "0") c.offline = true;
    return c;
  }
};

struct FetchResult {
  NewformSet set;
  bool from_cache = false;
  std::filesystem::path path;
};

inline std::filesystem::path cache_path(const ClientConfig& cfg, u64 level) { return cfg.cache_dir / cache_filename(level); }

inline std::optional<std::string> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::optional<NewformSet> load_cached(const ClientConfig& cfg, u64 level) {
  auto text = read_file(cache_path(cfg, level));
  if (!text) return std::nullopt;
  auto s = parse_newform_set(*text);
  if (s.level != level) fail(ErrorKind::parse, "lmfdb: cache file for level " + std::to_string(level) + " holds level " + std::to_string(s.level));
  return s;
}

/// Writes through a temporary file and rename; one writer at a time per process.
inline void store_cached(const ClientConfig& cfg, const NewformSet& s) {
  static std::mutex writer;
  std::lock_guard lock(writer);
  std::filesystem::create_directories(cfg.cache_dir);
  const auto path = cache_path(cfg, s.level);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::unavailable, "lmfdb: cannot write " + tmp);
    out << serialize(s);
  }
  std::filesystem::rename(tmp, path);
}

/// Sequential GETs with a fixed delay between requests and exponential backoff on failure.
class HttpSession {
 public:
  explicit HttpSession(const ClientConfig& cfg) : cfg_(cfg), client_(cfg.base_url) {
    if (!client_.is_valid()) fail(ErrorKind::network, "lmfdb: cannot use base URL " + cfg.base_url + " (HTTPS needs OpenSSL)");
    client_.set_connection_timeout(cfg.timeout);
    client_.set_read_timeout(cfg.timeout);
    client_.set_follow_location(true);
  }

  std::string get(const std::string& path) {
    std::string last;
    auto wait = cfg_.backoff;
    for (unsigned attempt = 0; attempt <= cfg_.retries; ++attempt) {
      if (requests_++ > 0) std::this_thread::sleep_for(cfg_.delay);
      if (attempt > 0) {
        std::this_thread::sleep_for(wait);
        wait *= 2;
      }
      auto res = client_.Get(path);
      if (!res) {
        last = "request failed: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 200) return res->body;
      last = "HTTP " + std::to_string(res->status);
      if (res->status < 500 && res->status != 429) break;
    }
    fail(ErrorKind::network, "lmfdb: GET " + cfg_.base_url + path + ": " + last);
  }

  unsigned requests() const { return requests_; }

 private:
  ClientConfig cfg_;
  httplib::Client client_;
  unsigned requests_ = 0;
};

namespace detail {

inline std::vector<i64> poly_mul(const std::vector<i64>& a, const std::vector<i64>& b) {
  std::vector<i64> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

/// Accepts either a coefficient list or a list of [coefficients, exponent] pairs.
inline std::vector<i64> charpoly_from_factors(const ordered_json& j, const std::string& payload) {
  if (!j.is_array() || j.empty()) parse_fail("charpoly_factors is not a nonempty list", payload);
  if (j.front().is_number_integer()) return j.get<std::vector<i64>>();
  std::vector<i64> out{1};
  for (const auto& f : j) {
    if (f.is_array() && f.size() == 2 && f[0].is_array() && f[1].is_number_integer()) {
      const auto g = f[0].get<std::vector<i64>>();
      for (int e = 0; e < f[1].get<int>(); ++e) out = poly_mul(out, g);
    } else if (f.is_array()) {
      out = poly_mul(out, f.get<std::vector<i64>>());
    } else {
      parse_fail("unrecognized charpoly factor", payload);
    }
  }
  return out;
}

inline ordered_json api_data(const std::string& body) {
  ordered_json j;
  try {
    j = ordered_json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(std::string("invalid JSON (") + e.what() + ")", body);
  }
  if (!j.is_object() || !j.contains("data") || !j["data"].is_array()) parse_fail("no 'data' list", body);
  return j["data"];
}

}  // namespace detail

/// Queries the LMFDB API for every newform orbit at (level, 2, trivial character).
inline NewformSet download_newforms(u64 level, const ClientConfig& cfg) {
  HttpSession http(cfg);
  const auto body = http.get("/api/mf_newforms/?level=i" + std::to_string(level) +
                             "&weight=i2&char_order=i1&_format=json&_fields=label,dim,hecke_orbit_code,traces");
  NewformSet s;
  s.level = level;
  s.weight = 2;
  s.source = cfg.base_url + " api/mf_newforms";
  s.timestamp = detail::utc_now();
  for (const auto& row : detail::api_data(body)) {
    NewformRecord r;
    r.label = detail::field<std::string>(row, "label", body);
    r.level = level;
    r.dim = detail::field<unsigned>(row, "dim", body);
    if (r.dim == 1) {
      const auto traces = detail::field<std::vector<i64>>(row, "traces", body);
      r.hecke_bound = std::min<u64>(cfg.hecke_bound, traces.size());
      for (u64 p = 2; p <= r.hecke_bound; ++p) {
        if (is_prime(p)) r.ap.push_back({p, {-traces[p - 1], 1}});
      }
    } else {
      const auto code = detail::field<u64>(row, "hecke_orbit_code", body);
      const auto cbody = http.get("/api/mf_hecke_charpolys/?hecke_orbit_code=i" + std::to_string(code) +
                                  "&_format=json&_fields=p,charpoly_factors");
      std::map<u64, std::vector<i64>> polys;
      for (const auto& c : detail::api_data(cbody)) {
        const auto p = detail::field<u64>(c, "p", cbody);
        if (p > cfg.hecke_bound) continue;
        polys[p] = detail::charpoly_from_factors(detail::field<ordered_json>(c, "charpoly_factors", cbody), cbody);
      }
      r.hecke_bound = polys.empty() ? 0 : polys.rbegin()->first;
      for (auto& [p, cp] : polys) r.ap.push_back({p, std::move(cp)});
    }
    for (const auto& e : r.ap) {
      if (e.charpoly.size() != r.dim + 1 || e.charpoly.back() != 1) {
        detail::parse_fail(r.label + ": charpoly at p = " + std::to_string(e.p) + " is not monic of degree dim", body);
      }
    }
    s.newforms.push_back(std::move(r));
  }
  std::sort(s.newforms.begin(), s.newforms.end(),
            [](const NewformRecord& a, const NewformRecord& b) { return detail::label_less(a.label, b.label); });
  return s;
}

/// Cache first; the network is used only on a miss and never when offline.
inline FetchResult fetch_newforms(u64 level, unsigned weight, const ClientConfig& cfg) {
  require(level >= 1, "fetch_newforms: level must be positive");
  require(weight == 2, "fetch_newforms: only weight 2 is supported");
  FetchResult out;
  out.path = cache_path(cfg, level);
  if (auto cached = load_cached(cfg, level)) {
    out.set = std::move(*cached);
    out.from_cache = true;
    return out;
  }
  if (cfg.offline) {
    fail(ErrorKind::unavailable, "lmfdb: level " + std::to_string(level) + " is not cached in " + cfg.cache_dir.string() +
                                     " and offline mode is on");
  }
  try {
    out.set = download_newforms(level, cfg);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::network) {
      fail(ErrorKind::unavailable, std::string(e.what()) + "; no cached copy in " + cfg.cache_dir.string());
    }
    throw;
  }
  store_cached(cfg, out.set);
  return out;
}

inline FetchResult fetch_newforms(u64 level, const ClientConfig& cfg) { return fetch_newforms(level, 2, cfg); }

/// Refetches and overwrites the cache; fails when offline.
inline FetchResult refresh_newforms(u64 level, const ClientConfig& cfg) {
  if (cfg.offline) fail(ErrorKind::unavailable, "lmfdb: refresh requested in offline mode");
  FetchResult out{download_newforms(level, cfg), false, cache_path(cfg, level)};
  store_cached(cfg, out.set);
  return out;
}

enum class ValidationStatus { agree, mismatch, skipped };

inline const char* to_string(ValidationStatus s) {
  switch (s) {
    case ValidationStatus::agree: return "agree";
    case ValidationStatus::mismatch: return "mismatch";
    default: return "skipped";
  }
}

struct Discrepancy {
  u64 p = 0;
  std::string expected;  // factorization of prod_f charpoly_f(x)^2 mod ell
  std::string computed;  // factorization of the T_p characteristic polynomial on the new subspace
};

struct CrossValidation {
  u64 level = 0;
  u64 ell = 0;
  ValidationStatus status = ValidationStatus::skipped;
  std::vector<std::string> warnings;
  std::vector<u64> compared_primes;
  std::vector<Discrepancy> discrepancies;
  std::vector<std::string> unmatched_forms;  // rational forms whose reduction is no computed system
  bool dimension_agrees = false;

  bool ok() const { return status == ValidationStatus::agree; }
};

namespace detail {

using FactorMultiset = std::map<std::vector<u64>, unsigned>;

inline std::string describe(const FactorMultiset& m) {
  std::string s;
  for (const auto& [g, e] : m) {
    if (!s.empty()) s += " * ";
    s += "(";
    for (std::size_t i = g.size(); i-- > 0;) {
      if (g[i] == 0 && i + 1 != g.size()) continue;
      if (s.back() != '(') s += " + ";
      s += std::to_string(g[i]);
      if (i > 0) s += i == 1 ? "x" : "x^" + std::to_string(i);
    }
    s += ")";
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

}  // namespace detail

/// Compares the engine's eigensystems mod ell with reduced fixtures. Never modifies either side.
inline CrossValidation cross_validate(const modsym::EigenDecomposition& dec, const NewformSet& set) {
  CrossValidation r;
  r.level = dec.level;
  r.ell = dec.ell;
  const u64 ell = dec.ell;
  const PrimeField f(ell);
  r.dimension_agrees = dec.new_dimension == 2 * static_cast<std::size_t>(set.total_dim());
  if (!r.dimension_agrees) {
    r.warnings.push_back("new subspace dimension " + std::to_string(dec.new_dimension) + " vs 2 * " +
                         std::to_string(set.total_dim()) + " from fixtures");
  }
  if (dec.systems.empty()) {
    r.status = r.dimension_agrees ? ValidationStatus::agree : ValidationStatus::mismatch;
    return r;
  }
  const auto& primes = dec.systems.front().primes;
  for (u64 p : primes) {
    if (!std::all_of(set.newforms.begin(), set.newforms.end(), [&](const NewformRecord& nf) { return nf.has(p); })) continue;
    r.compared_primes.push_back(p);
    detail::FactorMultiset expected, computed;
    for (const auto& nf : set.newforms) {
      for (const auto& fc : factor_polynomial_mod_ell(nf.charpoly(p), ell)) expected[fc.factor] += 2 * fc.multiplicity;
    }
    const std::size_t idx = static_cast<std::size_t>(std::lower_bound(primes.begin(), primes.end(), p) - primes.begin());
    for (const auto& e : dec.systems) {
      const auto& g = e.minimal_polynomials[idx];
      computed[g] += static_cast<unsigned>(e.dimension / static_cast<std::size_t>(poly::degree<PrimeField>(g)));
    }
    if (expected != computed) r.discrepancies.push_back({p, detail::describe(expected), detail::describe(computed)});
  }
  for (const auto& nf : set.newforms) {
    if (nf.dim != 1) continue;
    const bool found = std::any_of(dec.systems.begin(), dec.systems.end(), [&](const modsym::Eigensystem& e) {
      if (e.degree != 1) return false;
      return std::all_of(r.compared_primes.begin(), r.compared_primes.end(),
                         [&](u64 p) { return e.a(p) == FieldElement::from_int(e.field(), nf.a(p)); });
    });
    if (!found) r.unmatched_forms.push_back(nf.label);
  }
  if (r.compared_primes.empty()) r.warnings.push_back("no prime is covered by both the fixtures and the computation");
  const bool clean = r.discrepancies.empty() && r.unmatched_forms.empty() && r.dimension_agrees;
  r.status = clean ? ValidationStatus::agree : ValidationStatus::mismatch;
  return r;
}

/// Loads the fixture for `level`, computes eigensystems mod ell and compares. Skips with a
/// warning when ell divides 6 * level or no fixture is available.
inline CrossValidation cross_validate(u64 level, u64 ell, const ClientConfig& cfg) {
  CrossValidation r;
  r.level = level;
  r.ell = ell;
  require(is_prime(ell), "cross_validate: ell must be prime");
  if ((6 * level) % ell == 0) {
    r.warnings.push_back("ell = " + std::to_string(ell) + " divides 6N; comparison skipped");
    return r;
  }
  std::optional<NewformSet> set;
  try {
    set = load_cached(cfg, level);
  } catch (const Error& e) {
    r.warnings.push_back(std::string("fixture unreadable: ") + e.what());
    return r;
  }
  if (!set) {
    r.warnings.push_back("no fixture for level " + std::to_string(level) + " in " + cfg.cache_dir.string() + "; comparison skipped");
    return r;
  }
  return cross_validate(modsym::eigensystems_mod_ell(level, ell), *set);
}

}  // namespace galimage::lmfdb
