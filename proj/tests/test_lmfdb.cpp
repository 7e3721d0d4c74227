#include <gtest/gtest.h>

#include <atomic>
#include <random>

#include "galimage/lmfdb.hpp"

using namespace galimage;
using namespace galimage::lmfdb;
namespace fs = std::filesystem;

namespace {

ClientConfig fixtures() {
  ClientConfig c;
  c.cache_dir = GALIMAGE_FIXTURE_DIR;
  c.offline = true;
  return c;
}

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() / ("galimage-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Minimal stand-in for the two LMFDB API endpoints the client reads.
struct FakeApi {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> hits{0};
  std::atomic<int> failures_left{0};
  std::string newforms_body;

  FakeApi() {
    newforms_body = R"({"data":[
      {"label":"23.2.a.a","dim":2,"hecke_orbit_code":99,"traces":[2,-1,-1,-2,-2,2,2,3,2,2,-3]},
      {"label":"0.2.a.b","dim":1,"hecke_orbit_code":7,"traces":[1,-2,-1,2,1,2,-2,0,-2,-2,1,-2,4]}]})";
    server.Get("/api/mf_newforms/", [this](const httplib::Request&, httplib::Response& res) {
      ++hits;
      if (failures_left > 0) {
        --failures_left;
        res.status = 503;
        return;
      }
      res.set_content(newforms_body, "application/json");
    });
    server.Get("/api/mf_hecke_charpolys/", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits;
      EXPECT_EQ(req.get_param_value("hecke_orbit_code"), "i99");
      res.set_content(R"({"data":[
        {"p":2,"charpoly_factors":[[[-1,1,1],1]]},
        {"p":3,"charpoly_factors":[[[-1,1],1],[[1,1],1]]},
        {"p":5,"charpoly_factors":[-5,0,1]}]})",
                      "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~FakeApi() {
    server.stop();
    thread.join();
  }
  ClientConfig config(const fs::path& dir) const {
    ClientConfig c;
    c.cache_dir = dir;
    c.base_url = "http://127.0.0.1:" + std::to_string(port);
    c.delay = std::chrono::milliseconds(1);
    c.backoff = std::chrono::milliseconds(1);
    c.retries = 2;
    c.timeout = std::chrono::seconds(5);
    return c;
  }
};

NewformSet random_set(std::mt19937_64& rng) {
  NewformSet s;
  s.level = 1 + rng() % 5000;
  s.source = "generator " + std::to_string(rng() % 100);
  s.timestamp = "2026-01-0" + std::to_string(1 + rng() % 9) + "T00:00:00Z";
  const int forms = static_cast<int>(rng() % 4);
  for (int i = 0; i < forms; ++i) {
    NewformRecord r;
    r.label = std::to_string(s.level) + ".2.a." + std::string(1, static_cast<char>('a' + i));
    r.level = s.level;
    r.dim = 1 + static_cast<unsigned>(rng() % 3);
    r.hecke_bound = 30;
    for (u64 p : modsym::primes_up_to(30)) {
      if (rng() % 4 == 0) continue;
      HeckeEntry e{p, {}};
      for (unsigned k = 0; k < r.dim; ++k) e.charpoly.push_back(static_cast<i64>(rng() % 41) - 20);
      e.charpoly.push_back(1);
      r.ap.push_back(e);
    }
    s.newforms.push_back(r);
  }
  return s;
}

}  // namespace

TEST(Fixtures, Level11) {
  const auto r = fetch_newforms(11, fixtures());
  EXPECT_TRUE(r.from_cache);
  ASSERT_EQ(r.set.newforms.size(), 1u);
  const auto& f = r.set.newforms[0];
  EXPECT_EQ(f.label, "11.2.a.a");
  EXPECT_EQ(f.dim, 1u);
  // Frobenius traces of y^2 + y = x^3 - x^2 - 10x - 20 counted by hand.
  const std::map<u64, i64> ap{{2, -2}, {3, -1}, {5, 1}, {7, -2}, {11, 1}, {13, 4}, {17, -2}, {19, 0}, {23, -1}, {29, 0}};
  for (auto [p, a] : ap) EXPECT_EQ(f.a(p), a) << p;
}

TEST(Fixtures, PointCountOracle) {
  // a_p = p + 1 - #E(F_p) for the level-11 curve, counted directly for good p < 100.
  const auto f = fetch_newforms(11, fixtures()).set.newforms.at(0);
  for (u64 p : modsym::primes_up_to(100)) {
    if (p == 11) continue;
    i64 count = 1;
    for (u64 x = 0; x < p; ++x) {
      const i64 rhs = static_cast<i64>((x * x % p * x + (p - 1) * x % p * x % p + (10 * p - 10) * x + 20 * p - 20) % p);
      for (u64 y = 0; y < p; ++y) {
        if (static_cast<i64>((y * y + y) % p) == rhs) ++count;
      }
    }
    EXPECT_EQ(f.a(p), static_cast<i64>(p) + 1 - count) << p;
  }
}

TEST(Fixtures, DimensionsMatchNewSubspace) {
  for (u64 level : {11u, 23u, 54u, 162u}) {
    const auto set = fetch_newforms(level, fixtures()).set;
    EXPECT_EQ(set.total_dim(), modsym::new_dimension(level)) << level;
    for (const auto& f : set.newforms) {
      EXPECT_EQ(f.level, level);
      EXPECT_GE(f.hecke_bound, modsym::sturm_bound(level));
    }
  }
  const auto s162 = fetch_newforms(162, fixtures()).set;
  ASSERT_EQ(s162.newforms.size(), 4u);
  for (const auto& f : s162.newforms) {
    EXPECT_EQ(f.dim, 1u);
    EXPECT_EQ(f.a(2) * f.a(2), 1);
    EXPECT_EQ(f.a(3), 0);
  }
}

TEST(Fixtures, CommittedFilesAreCanonical) {
  for (u64 level : {11u, 23u, 54u, 162u}) {
    const auto text = read_file(cache_path(fixtures(), level));
    ASSERT_TRUE(text);
    EXPECT_EQ(serialize(parse_newform_set(*text)), *text) << level;
  }
}

TEST(Cache, RoundTripProperty) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_set(rng);
    EXPECT_EQ(parse_newform_set(serialize(s)), s);
  }
}

TEST(Cache, ParseErrorsCarryExcerpt) {
  try {
    parse_newform_set("{\"schema\": \"1\", \"level\": \"eleven\"}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find("eleven"), std::string::npos);
  }
  EXPECT_THROW(parse_newform_set("not json"), Error);
  EXPECT_THROW(parse_newform_set(R"({"schema":"2"})"), Error);
}

TEST(Cache, OfflineMissIsUnavailable) {
  TempDir dir;
  ClientConfig c;
  c.cache_dir = dir.path;
  c.offline = true;
  try {
    fetch_newforms(37, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unavailable);
  }
}

TEST(Network, FetchThenServeFromCache) {
  FakeApi api;
  TempDir dir;
  const auto cfg = api.config(dir.path);
  const auto first = fetch_newforms(23, cfg);
  EXPECT_FALSE(first.from_cache);
  EXPECT_EQ(api.hits, 2);
  ASSERT_EQ(first.set.newforms.size(), 2u);
  // Sorted by label suffix; the dim-2 orbit came back with factored charpolys.
  const auto& b = first.set.newforms[1];
  EXPECT_EQ(b.label, "0.2.a.b");
  EXPECT_EQ(b.a(2), -2);
  const auto& a = first.set.newforms[0];
  EXPECT_EQ(a.charpoly(2), (std::vector<i64>{-1, 1, 1}));
  EXPECT_EQ(a.charpoly(3), (std::vector<i64>{-1, 0, 1}));
  EXPECT_EQ(a.charpoly(5), (std::vector<i64>{-5, 0, 1}));
  const auto bytes = read_file(first.path);
  ASSERT_TRUE(bytes);

  const auto second = fetch_newforms(23, cfg);
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(api.hits, 2);
  EXPECT_EQ(second.set, first.set);
  EXPECT_EQ(serialize(second.set), *bytes);
  EXPECT_EQ(*read_file(second.path), *bytes);
}

TEST(Network, BackoffRecoversFromServerErrors) {
  FakeApi api;
  api.failures_left = 2;
  TempDir dir;
  const auto r = fetch_newforms(23, api.config(dir.path));
  EXPECT_EQ(r.set.newforms.size(), 2u);
  EXPECT_EQ(api.hits, 4);
}

TEST(Network, PersistentFailureIsUnavailable) {
  FakeApi api;
  api.failures_left = 100;
  TempDir dir;
  try {
    fetch_newforms(23, api.config(dir.path));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unavailable);
  }
  EXPECT_EQ(api.hits, 3);
  EXPECT_FALSE(fs::exists(cache_path(api.config(dir.path), 23)));
}

TEST(Network, MalformedPayloadIsParseError) {
  FakeApi api;
  api.newforms_body = R"({"rows": []})";
  TempDir dir;
  try {
    fetch_newforms(23, api.config(dir.path));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find("rows"), std::string::npos);
  }
}

TEST(CrossValidate, CleanAgainstFixtures) {
  const auto cfg = fixtures();
  for (auto [level, ell] : std::vector<std::pair<u64, u64>>{{11, 7}, {54, 5}, {162, 7}, {162, 5}, {23, 5}, {23, 11}, {23, 19}}) {
    const auto r = cross_validate(level, ell, cfg);
    EXPECT_EQ(r.status, ValidationStatus::agree) << level << " mod " << ell;
    EXPECT_TRUE(r.discrepancies.empty());
    EXPECT_TRUE(r.unmatched_forms.empty());
    EXPECT_FALSE(r.compared_primes.empty());
  }
}

TEST(CrossValidate, Level11AllSmallPrimes) {
  for (u64 ell = 5; ell <= 30; ++ell) {
    if (!is_prime(ell)) continue;
    const auto r = cross_validate(11, ell, fixtures());
    if (ell == 11) {
      EXPECT_EQ(r.status, ValidationStatus::skipped);
      EXPECT_FALSE(r.warnings.empty());
    } else {
      EXPECT_EQ(r.status, ValidationStatus::agree) << ell;
    }
  }
}

TEST(CrossValidate, MissingFixtureSkips) {
  TempDir dir;
  ClientConfig c;
  c.cache_dir = dir.path;
  const auto r = cross_validate(37, 5, c);
  EXPECT_EQ(r.status, ValidationStatus::skipped);
  ASSERT_FALSE(r.warnings.empty());
}

TEST(CrossValidate, DetectsTamperingWithoutMutating) {
  auto set = fetch_newforms(54, fixtures()).set;
  set.newforms[0].ap[2].charpoly[0] += 1;  // a_5 off by one
  const auto before = set;
  const auto dec = modsym::eigensystems_mod_ell(54, 7);
  const auto r = cross_validate(dec, set);
  EXPECT_EQ(r.status, ValidationStatus::mismatch);
  ASSERT_EQ(r.discrepancies.size(), 1u);
  EXPECT_EQ(r.discrepancies[0].p, 5u);
  EXPECT_EQ(r.unmatched_forms, std::vector<std::string>{set.newforms[0].label});
  EXPECT_EQ(set, before);
}
