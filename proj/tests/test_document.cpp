#include "epsforms/document.hpp"
#include "epsforms/error.hpp"
#include "fixtures.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace epsforms;
using namespace fixtures;

namespace {

Engine& engine() {
  static Engine e;
  return e;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto d = std::filesystem::temp_directory_path() / ("epsforms-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  return d;
}

} // namespace

TEST_CASE("documents round trip byte for byte") {
  const auto spec = SpaceSpec::make(15, -1, eps3);
  const auto doc = QExpansionDocument::from_series(spec, f15_e3_m6(), -6);
  const auto text = doc.serialize();
  const auto back = QExpansionDocument::parse(text);
  CHECK(back.serialize() == text);
  CHECK(back.series() == f15_e3_m6());
  CHECK(back.order == -6);
  CHECK(text.find("\"7/2\"") != std::string::npos);
  CHECK(text.find("\"3/1\"") == std::string::npos);
  CHECK(text == QExpansionDocument::from_series(spec, f15_e3_m6(), -6).serialize());
}

TEST_CASE("malformed documents are rejected") {
  const auto good = QExpansionDocument::from_series(SpaceSpec::make(15, -1, eps1), f15_e1_m3()).to_json();
  auto expect_bad = [&](auto mutate) {
    auto j = good;
    mutate(j);
    CHECK_THROWS_AS(QExpansionDocument::from_json(j), InputError);
  };
  expect_bad([](auto& j) { j["extra"] = 1; });
  expect_bad([](auto& j) { j.erase("level"); });
  expect_bad([](auto& j) { j["level"] = "15"; });
  expect_bad([](auto& j) { j["schema_version"] = 2; });
  expect_bad([](auto& j) { j["character"] = "trivial"; });
  expect_bad([](auto& j) { j["epsilon"] = nlohmann::json{{"3", -1}}; });
  expect_bad([](auto& j) { j["epsilon"] = nlohmann::json{{"3", -1}, {"7", 1}}; });
  expect_bad([](auto& j) { j["epsilon"]["5"] = 0; });
  expect_bad([](auto& j) { j["coefficients"][0][1] = "2/4"; });
  expect_bad([](auto& j) { j["coefficients"][0][1] = "x"; });
  expect_bad([](auto& j) { std::swap(j["coefficients"][0], j["coefficients"][1]); });
  expect_bad([](auto& j) { j["coefficients"].push_back(nlohmann::json::array({99, "1"})); });
  CHECK_THROWS_AS(QExpansionDocument::parse("{not json"), InputError);
}

TEST_CASE("cache round trip") {
  const auto dir = fresh_dir("cache");
  const BasisCache cache(dir);
  const auto spec = SpaceSpec::make(15, -1, eps3);
  CHECK_FALSE(cache.load(spec, -9).has_value());
  const auto fresh = cached_basis(engine(), &cache, spec, -9);
  REQUIRE(std::filesystem::exists(cache.path_for(spec, -9)));
  const auto bytes = slurp(cache.path_for(spec, -9));
  const auto loaded = cache.load(spec, -9);
  REQUIRE(loaded.has_value());
  CHECK(*loaded == fresh);
  CHECK(BasisCache::serialize(spec, -9, *loaded) == bytes);

  Engine other;
  const auto recomputed = cached_basis(other, nullptr, spec, -9);
  CHECK(recomputed == fresh);
  CHECK(BasisCache::serialize(spec, -9, recomputed) == bytes);

  CHECK_FALSE(cache.load(SpaceSpec::make(15, -1, eps3, 16), -9).has_value());
  { std::ofstream(cache.path_for(spec, -9)) << "{broken"; }
  CHECK_FALSE(cache.load(spec, -9).has_value());
  CHECK(cached_basis(engine(), &cache, spec, -9) == fresh);
  CHECK(slurp(cache.path_for(spec, -9)) == bytes);

  for (const auto& e : std::filesystem::directory_iterator(dir))
    CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cache file names carry the strategy and the space") {
  const BasisCache cache("/x");
  CHECK(cache.path_for(SpaceSpec::make(15, -1, eps1), -7).filename() == "v1_N15_k-1_emm_t15_m-7.json");
}
