#include "epsforms/document.hpp"

#include "epsforms/error.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace epsforms {

using nlohmann::json;

namespace {

const std::set<std::string> kDocKeys = {"character", "coefficients", "epsilon", "lattice_denom", "level",
                                        "order",     "schema_version", "truncation", "weight"};

template <class T>
T get_field(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("document is missing \"") + key + "\"");
  const json& v = j.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw InputError(std::string("\"") + key + "\" must be an integer");
  } else {
    if (!v.is_string()) throw InputError(std::string("\"") + key + "\" must be a string");
  }
  return v.get<T>();
}

json epsilon_json(const SignVector& eps) {
  json e = json::object();
  for (auto [p, s] : eps) e[std::to_string(p)] = s;
  return e;
}

std::string eps_tag(const SignVector& eps) {
  std::string s;
  for (auto [p, e] : eps) s += e > 0 ? 'p' : 'm';
  return s;
}

} // namespace

QExpansionDocument QExpansionDocument::from_series(const SpaceSpec& spec, const QSeries& f,
                                                   std::optional<std::int64_t> order) {
  QExpansionDocument d;
  d.level = spec.N;
  d.weight = spec.k;
  d.epsilon = spec.eps;
  d.lattice_denom = f.denom();
  d.truncation = f.trunc();
  d.order = order;
  d.coefficients = f.terms();
  return d;
}

QSeries QExpansionDocument::series() const { return QSeries::from_terms(coefficients, truncation, lattice_denom); }

json QExpansionDocument::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["level"] = level;
  j["weight"] = weight;
  j["character"] = "kronecker";
  j["epsilon"] = epsilon_json(epsilon);
  j["lattice_denom"] = lattice_denom;
  j["truncation"] = truncation;
  if (order) j["order"] = *order;
  json cs = json::array();
  for (const auto& [e, c] : coefficients) cs.push_back(json::array({e, to_string(c)}));
  j["coefficients"] = std::move(cs);
  return j;
}

QExpansionDocument QExpansionDocument::from_json(const json& j) {
  if (!j.is_object()) throw InputError("document must be a JSON object");
  for (const auto& [key, v] : j.items())
    if (!kDocKeys.contains(key)) throw InputError("unknown document field \"" + key + "\"");
  QExpansionDocument d;
  d.schema_version = get_field<int>(j, "schema_version");
  if (d.schema_version != kSchemaVersion)
    throw InputError("unsupported schema_version " + std::to_string(d.schema_version));
  d.level = get_field<std::int64_t>(j, "level");
  if (d.level < 1) throw InputError("level must be positive");
  d.weight = get_field<int>(j, "weight");
  if (get_field<std::string>(j, "character") != "kronecker") throw InputError("character must be \"kronecker\"");
  d.lattice_denom = get_field<std::int64_t>(j, "lattice_denom");
  if (d.lattice_denom < 1) throw InputError("lattice_denom must be positive");
  d.truncation = get_field<std::int64_t>(j, "truncation");
  if (j.contains("order")) d.order = get_field<std::int64_t>(j, "order");

  if (!j.contains("epsilon") || !j.at("epsilon").is_object()) throw InputError("\"epsilon\" must be an object");
  const auto primes = prime_divisors(d.level);
  for (const auto& [key, v] : j.at("epsilon").items()) {
    std::int64_t p = 0;
    try {
      std::size_t used = 0;
      p = std::stoll(key, &used);
      if (used != key.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("epsilon key \"" + key + "\" is not a prime");
    }
    if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1))
      throw InputError("epsilon entries must be +1 or -1");
    d.epsilon[p] = v.get<int>();
  }
  if (d.epsilon.size() != primes.size() ||
      !std::all_of(primes.begin(), primes.end(), [&](auto p) { return d.epsilon.contains(p); }))
    throw InputError("epsilon must have one entry per prime dividing the level");

  if (!j.contains("coefficients") || !j.at("coefficients").is_array())
    throw InputError("\"coefficients\" must be an array");
  bool first = true;
  std::int64_t prev = 0;
  for (const auto& t : j.at("coefficients")) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer() || !t[1].is_string())
      throw InputError("coefficients must be [exponent, \"num/den\"] pairs");
    const auto e = t[0].get<std::int64_t>();
    const auto text = t[1].get<std::string>();
    if (!first && e <= prev) throw InputError("coefficient exponents must be strictly ascending");
    if (e >= d.truncation) throw InputError("coefficient exponent " + std::to_string(e) + " is beyond the truncation");
    Rational c;
    try {
      c = parse_rational(text);
    } catch (const std::exception&) {
      throw InputError("malformed rational \"" + text + "\"");
    }
    if (to_string(c) != text) throw InputError("rational \"" + text + "\" is not in lowest terms");
    d.coefficients.emplace_back(e, c);
    prev = e;
    first = false;
  }
  return d;
}

std::string QExpansionDocument::serialize() const { return to_json().dump(); }

QExpansionDocument QExpansionDocument::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return from_json(j);
}

QExpansionDocument read_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return QExpansionDocument::parse(ss.str());
}

// ---------------------------------------------------------------------------

BasisCache BasisCache::from_env() {
  const char* env = std::getenv("EPSFORMS_CACHE");
  return BasisCache(env && *env ? std::filesystem::path(env) : std::filesystem::path(".epsforms-cache"));
}

std::filesystem::path BasisCache::path_for(const SpaceSpec& spec, std::int64_t m_min) const {
  std::ostringstream name;
  name << "v" << kStrategyVersion << "_N" << spec.N << "_k" << spec.k << "_e" << eps_tag(spec.eps) << "_t"
       << spec.trunc << "_m" << m_min << ".json";
  return dir_ / name.str();
}

std::string BasisCache::serialize(const SpaceSpec& spec, std::int64_t m_min,
                                  const std::map<std::int64_t, QSeries>& forms) {
  json j;
  j["strategy"] = kStrategyVersion;
  j["level"] = spec.N;
  j["weight"] = spec.k;
  j["epsilon"] = epsilon_json(spec.eps);
  j["truncation"] = spec.trunc;
  j["m_min"] = m_min;
  json fs = json::array();
  for (const auto& [m, f] : forms) fs.push_back(QExpansionDocument::from_series(spec, f, m).to_json());
  j["forms"] = std::move(fs);
  return j.dump();
}

std::optional<std::map<std::int64_t, QSeries>> BasisCache::load(const SpaceSpec& spec, std::int64_t m_min) const {
  std::ifstream in(path_for(spec, m_min));
  if (!in) return std::nullopt;
  try {
    const json j = json::parse(in);
    if (j.at("strategy") != kStrategyVersion || j.at("level") != spec.N || j.at("weight") != spec.k ||
        j.at("epsilon") != epsilon_json(spec.eps) || j.at("truncation") != spec.trunc || j.at("m_min") != m_min)
      return std::nullopt;
    std::map<std::int64_t, QSeries> out;
    for (const auto& d : j.at("forms")) {
      const auto doc = QExpansionDocument::from_json(d);
      if (!doc.order) return std::nullopt;
      out.emplace(*doc.order, doc.series());
    }
    return out;
  } catch (const std::exception&) {
    return std::nullopt; // unreadable entries are recomputed
  }
}

void BasisCache::store(const SpaceSpec& spec, std::int64_t m_min, const std::map<std::int64_t, QSeries>& forms) const {
  std::filesystem::create_directories(dir_);
  const auto target = path_for(spec, m_min);
  auto tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    out << serialize(spec, m_min, forms);
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::map<std::int64_t, QSeries> cached_basis(Engine& engine, const BasisCache* cache, const SpaceSpec& spec,
                                             std::int64_t m_min) {
  if (cache)
    if (auto hit = cache->load(spec, m_min)) return *hit;
  std::map<std::int64_t, QSeries> forms;
  for (const auto& [m, f] : engine.canonical_basis(spec, m_min).forms) forms.emplace(m, f.truncate(spec.trunc));
  if (cache) cache->store(spec, m_min, forms);
  return forms;
}

} // namespace epsforms
