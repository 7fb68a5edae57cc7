// epsforms: command-line front end.

#include "epsforms/discform.hpp"
#include "epsforms/document.hpp"
#include "epsforms/duality.hpp"
#include "epsforms/error.hpp"
#include "epsforms/integrality.hpp"
#include "epsforms/spaces.hpp"
#include "epsforms/vvmf.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <regex>
#include <sstream>

using namespace epsforms;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFail = 1, kObstructed = 2, kSpanning = 3, kInput = 4 };

struct SpaceArgs {
  std::int64_t level = 0;
  int weight = 0;
  std::string epsilon;
  std::int64_t prec = 15;

  void attach(CLI::App* app) {
    app->add_option("--level", level, "level N")->required();
    app->add_option("--weight", weight, "weight k")->required();
    app->add_option("--epsilon", epsilon, "sign vector, one entry per prime of N ascending, e.g. -1,+1")->required();
    app->add_option("--prec", prec, "report coefficients below q^prec");
  }
  SpaceSpec spec() const { return SpaceSpec::make(level, weight, parse_sign_vector(level, epsilon), prec); }
};

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
  static const std::regex re(R"(^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw InputError("range \"" + text + "\" must look like a..b");
  const auto lo = std::stoll(m[1]), hi = std::stoll(m[2]);
  if (lo > hi) throw InputError("empty range \"" + text + "\"");
  return {lo, hi};
}

std::string decimal(const Rational& c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", c.get_d());
  return buf;
}

std::string show_series(const QSeries& f, bool as_decimal) {
  if (!as_decimal) return f.to_string();
  std::string s;
  for (const auto& [e, c] : f.terms()) {
    const std::string mag = decimal(abs(c));
    s += s.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
    if (e == 0) {
      s += mag;
      continue;
    }
    s += mag + "*q^";
    s += f.denom() == 1 ? std::to_string(e) : "(" + std::to_string(e) + "/" + std::to_string(f.denom()) + ")";
  }
  if (s.empty()) s = "0";
  s += " + O(q^" + (f.denom() == 1 ? std::to_string(f.trunc()) : std::to_string(f.trunc()) + "/" + std::to_string(f.denom())) + ")";
  return s;
}

void print_forms(const SpaceSpec& spec, const std::map<std::int64_t, QSeries>& forms, std::int64_t from,
                 std::int64_t to, const std::string& name, bool as_json, bool as_decimal) {
  if (as_json) {
    json arr = json::array();
    for (const auto& [m, f] : forms)
      if (m >= from && m <= to) arr.push_back(QExpansionDocument::from_series(spec, f, m).to_json());
    json out;
    out["space"] = spec.label();
    out["forms"] = std::move(arr);
    std::cout << out.dump() << "\n";
    return;
  }
  std::cout << "# " << spec.label() << "\n";
  for (const auto& [m, f] : forms)
    if (m >= from && m <= to) std::cout << name << "_" << m << " = " << show_series(f, as_decimal) << "\n";
}

// ---------------------------------------------------------------------------

int cmd_dform(std::int64_t level, const std::string& epsilon, const std::string& components, bool as_json) {
  DiscriminantForm D;
  if (!components.empty()) {
    D = DiscriminantForm::parse(components);
  } else {
    if (level < 1 || epsilon.empty()) throw InputError("dform needs --components or both --level and --epsilon");
    D = DiscriminantForm::build_from(level, parse_sign_vector(level, epsilon));
  }
  const DiscriminantForm Ds = D.dual();
  if (as_json) {
    json j;
    j["components"] = D.to_string();
    j["level"] = D.level();
    j["order"] = D.order();
    j["signature"] = D.signature();
    j["character"] = D.chi().label();
    j["epsilon"] = render(D.epsilon());
    j["dual"] = json{{"components", Ds.to_string()}, {"epsilon", render(Ds.epsilon())}};
    j["supports_spaces"] = D.supports_spaces();
    json res = json::object();
    for (auto [r, c] : D.residue_counts()) res[std::to_string(r)] = c;
    j["residue_counts"] = std::move(res);
    std::cout << j.dump() << "\n";
    return kOk;
  }
  std::cout << "components:      " << D.to_string() << "\n"
            << "level:           " << D.level() << "\n"
            << "order:           " << D.order() << "\n"
            << "signature:       " << D.signature() << " (mod 8)\n"
            << "character:       " << D.chi().label() << "\n"
            << "epsilon:         " << render(D.epsilon()) << "\n"
            << "dual:            " << Ds.to_string() << "\n"
            << "dual epsilon:    " << render(Ds.epsilon()) << "\n"
            << "supports spaces: " << (D.supports_spaces() ? "yes" : "no") << "\n"
            << "norm residues:  ";
  for (auto [r, c] : D.residue_counts()) std::cout << " " << r << "/" << D.level() << " x" << c;
  std::cout << "\n";
  return kOk;
}

int cmd_basis(const SpaceArgs& a, std::optional<std::int64_t> from, std::optional<std::int64_t> to, bool dual,
              bool as_json, bool as_decimal, bool use_cache) {
  SpaceSpec spec = a.spec();
  if (dual) spec = spec.dual();
  const std::int64_t lo = from.value_or(-spec.N);
  const std::int64_t hi = to.value_or(spec.k >= 2 ? spec.N : -1);
  if (lo > hi) throw InputError("--from must not exceed --to");
  Engine engine;
  const BasisCache cache = BasisCache::from_env();
  const auto forms = cached_basis(engine, use_cache ? &cache : nullptr, spec, std::min<std::int64_t>(lo, 0));
  print_forms(spec, forms, lo, hi, dual ? "f'" : "f", as_json, as_decimal);
  return kOk;
}

int cmd_lift(const std::string& file, std::int64_t prec, bool as_text) {
  const auto doc = read_document(file);
  if (doc.lattice_denom != 1) throw InputError("principal parts live on the lattice Z");
  const SpaceSpec spec = SpaceSpec::make(doc.level, doc.weight, doc.epsilon, prec);
  PrincipalPart P;
  for (const auto& [e, c] : doc.coefficients) {
    if (e >= 0) throw InputError("principal part documents may only carry negative exponents");
    P.terms.emplace(e, c);
  }
  Engine engine;
  try {
    const QSeries f = lift(engine, spec, P);
    if (as_text)
      std::cout << f.to_string() << "\n";
    else
      std::cout << QExpansionDocument::from_series(spec, f).serialize() << "\n";
    return kOk;
  } catch (const ObstructionError& e) {
    const auto& r = e.result;
    if (as_text) {
      std::cout << "obstructed: pairing with the dual cusp form f'_" << r.witness_order << " is " << to_string(r.value)
                << "\n  f'_" << r.witness_order << " = " << r.witness.truncate(std::min(r.witness.trunc(), prec)).to_string()
                << "\n";
    } else {
      json j;
      j["status"] = "obstructed";
      j["witness_order"] = r.witness_order;
      j["value"] = to_string(r.value);
      const SpaceSpec ds = spec.dual();
      j["witness"] = QExpansionDocument::from_series(ds, r.witness.truncate(std::min(r.witness.trunc(), prec)),
                                                     r.witness_order).to_json();
      std::cout << j.dump() << "\n";
    }
    return kObstructed;
  }
}

int cmd_duality(const SpaceArgs& a, const std::string& m_range, const std::string& d_range, bool as_json,
                bool verbose) {
  const SpaceSpec spec = a.spec();
  Engine engine;
  const auto [m_lo, m_hi] = parse_range(m_range);
  std::int64_t d_lo = m_lo, d_hi = engine.m_epsilon(spec);
  if (!d_range.empty()) std::tie(d_lo, d_hi) = parse_range(d_range);
  const auto rep = duality_check(engine, spec, m_lo, m_hi, d_lo, d_hi);
  if (as_json) {
    json j;
    j["space"] = spec.label();
    j["m_range"] = {rep.m_lo, rep.m_hi};
    j["d_range"] = {rep.d_lo, rep.d_hi};
    j["f_orders"] = rep.f_orders;
    j["dual_orders"] = rep.dual_orders;
    json ids = json::array();
    for (const auto& id : rep.identities)
      ids.push_back({{"m", id.m}, {"d", id.d}, {"a", to_string(id.a)}, {"b", to_string(id.b)}, {"holds", id.holds}});
    j["identities"] = std::move(ids);
    j["vanishing_checked"] = rep.vanishing_checked;
    j["cross_existence_checked"] = rep.cross_checked;
    json issues = json::array();
    for (const auto& is : rep.issues)
      issues.push_back({{"kind", is.kind}, {"m", is.m}, {"d", is.d}, {"n", is.n}, {"detail", is.detail}});
    j["issues"] = std::move(issues);
    j["ok"] = rep.ok();
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "# " << spec.label() << "  m in [" << rep.m_lo << ", " << rep.m_hi << "], d in [" << rep.d_lo << ", "
              << rep.d_hi << "]\n";
    std::cout << "existing f_m: " << rep.f_orders.size() << ", existing f'_d: " << rep.dual_orders.size() << "\n";
    if (verbose) {
      std::cout << "     m      d   a_m(-d)   b_d(-m)\n";
      for (const auto& id : rep.identities) {
        if (id.a == 0 && id.b == 0) continue;
        std::cout << std::setw(6) << id.m << " " << std::setw(6) << id.d << "  " << std::setw(8) << to_string(id.a)
                  << "  " << std::setw(8) << to_string(id.b) << (id.holds ? "" : "  FAIL") << "\n";
      }
    }
    std::cout << "grid identities: " << rep.identities.size() << ", vanishing checks: " << rep.vanishing_checked
              << ", cross-existence checks: " << rep.cross_checked << "\n";
    for (const auto& is : rep.issues)
      std::cout << "  " << is.kind << " m=" << is.m << " d=" << is.d << ": " << is.detail << "\n";
    std::cout << (rep.ok() ? "all identities hold" : "violations found") << "\n";
  }
  return rep.ok() ? kOk : kFail;
}

int cmd_integrality(const SpaceArgs& a, std::int64_t check_prec, bool as_json) {
  const SpaceSpec spec = a.spec();
  Engine engine;
  const auto rep = integrality_report(engine, spec, check_prec);
  if (as_json) {
    json j;
    j["space"] = spec.label();
    j["reduction_range"] = rep.lowest;
    j["m_epsilon"] = rep.m_epsilon;
    json vs = json::array();
    for (const auto& [m, v] : rep.verdicts) {
      json x{{"m", m}, {"verdict", to_string(v.kind)}, {"check_range", v.check_range}};
      if (v.kind == VerdictKind::certified) {
        x["clearing_form"] = v.clearing;
        x["product_weight"] = v.product_weight;
        x["sturm_bound"] = v.sturm;
        if (v.partner_prime) x["paired_at_prime"] = v.partner_prime;
      }
      if (v.kind == VerdictKind::violation) {
        x["n"] = v.violation_n;
        x["value"] = to_string(v.violation_value);
      }
      vs.push_back(std::move(x));
    }
    j["verdicts"] = std::move(vs);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "# " << spec.label() << "  reduction range m >= " << rep.lowest << " (m_eps = " << rep.m_epsilon
              << ")\n";
    for (const auto& [m, v] : rep.verdicts) {
      std::cout << "f_" << m << ": " << to_string(v.kind);
      if (v.kind == VerdictKind::certified) {
        std::cout << " via " << v.clearing << " (weight " << v.product_weight << ", Sturm bound " << v.sturm << ")";
        if (v.partner_prime) std::cout << " with the sign flipped at p=" << v.partner_prime;
      } else if (v.kind == VerdictKind::verified) {
        std::cout << " (s(n)a(n) integral for n < " << v.check_range << ")";
      } else {
        std::cout << " at n=" << v.violation_n << ": s(n)a(n) = " << to_string(v.violation_value);
      }
      std::cout << "\n";
    }
  }
  return rep.ok() ? kOk : kFail;
}

VVForm load_vv(const std::string& file) {
  const auto doc = read_document(file);
  if (doc.lattice_denom != 1) throw InputError("vvmf expects a scalar form on the lattice Z");
  return psi(doc.series(), DiscriminantForm::build_from(doc.level, doc.epsilon));
}

int cmd_vvmf(const std::string& file, bool as_json) {
  const VVForm F = load_vv(file);
  const auto elems = F.D.elements_with_norms();
  const auto view = F.element_view();
  if (as_json) {
    json j;
    j["discriminant_form"] = F.D.to_string();
    j["lattice_denom"] = F.lattice;
    json comps = json::array();
    for (std::size_t i = 0; i < elems.size(); ++i) {
      json cs = json::array();
      for (const auto& [e, c] : view[i].terms()) cs.push_back(json::array({e, to_string(c)}));
      comps.push_back({{"element", elems[i].coords}, {"norm", to_string(elems[i].norm)},
                       {"residue", elems[i].residue}, {"truncation", view[i].trunc()}, {"coefficients", cs}});
    }
    j["components"] = std::move(comps);
    std::cout << j.dump() << "\n";
    return kOk;
  }
  std::cout << "# " << F.D.to_string() << ", lattice (1/" << F.lattice << ")Z, " << F.components.size()
            << " norm classes\n";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    std::cout << "gamma=(";
    for (std::size_t t = 0; t < elems[i].coords.size(); ++t) std::cout << (t ? "," : "") << elems[i].coords[t];
    std::cout << ") q=" << to_string(elems[i].norm) << " residue " << elems[i].residue << ": " << view[i].to_string()
              << "\n";
  }
  return kOk;
}

std::complex<double> parse_tau(const std::string& text) {
  static const std::regex re(R"(^\s*([-+]?[0-9.eE+-]+)\s*,\s*([-+]?[0-9.eE+-]+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw InputError("tau must be given as re,im");
  return {std::stod(m[1]), std::stod(m[2])};
}

int cmd_check_weil(const std::string& file, const std::string& tau, double tol, bool as_json) {
  const auto doc = read_document(file);
  const VVForm F = load_vv(file);
  const auto r = check_weil_transform(F, doc.weight, parse_tau(tau), tol);
  const bool ok = r.s_deviation < tol && r.t_deviation < tol;
  if (as_json) {
    json j{{"s_deviation", r.s_deviation}, {"t_deviation", r.t_deviation}, {"tail_bound", r.tail_bound},
           {"scale", r.scale}, {"tolerance", tol}, {"ok", ok}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "S deviation: " << r.s_deviation << "\nT deviation: " << r.t_deviation
              << "\ntail bound:  " << r.tail_bound << "\nscale:       " << r.scale << "\n"
              << (ok ? "transformation holds to tolerance" : "transformation FAILS at tolerance") << "\n";
  }
  return ok ? kOk : kFail;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced bases of weakly holomorphic modular forms with epsilon-conditions"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false, as_decimal = false;
  app.add_flag("--json", as_json, "machine-readable output");
  app.add_flag("--decimal", as_decimal, "render coefficients as floating point (display only)");

  std::int64_t level = 0;
  std::string epsilon, components;
  auto* dform = app.add_subcommand("dform", "inspect the discriminant form attached to (N, eps)");
  dform->add_option("--level", level, "level N");
  dform->add_option("--epsilon", epsilon, "sign vector");
  dform->add_option("--components", components, "explicit Jordan components, e.g. \"3^-1 + 5^-1\"");

  SpaceArgs basis_args, dual_args, duality_args, integ_args;
  std::optional<std::int64_t> from, to, dfrom, dto;
  bool no_cache = false;
  auto* basis = app.add_subcommand("basis", "reduced forms f_m of A^eps(N, k, chi)");
  basis_args.attach(basis);
  basis->add_option("--from", from, "lowest order");
  basis->add_option("--to", to, "highest order");
  basis->add_flag("--no-cache", no_cache, "ignore the basis cache");
  auto* dual_basis = app.add_subcommand("dual-basis", "reduced forms f'_d of the dual space (N, 2-k, eps*)");
  dual_args.attach(dual_basis);
  dual_basis->add_option("--from", dfrom, "lowest order");
  dual_basis->add_option("--to", dto, "highest order");
  dual_basis->add_flag("--no-cache", no_cache, "ignore the basis cache");

  std::string pp_file;
  std::int64_t lift_prec = 15;
  bool lift_text = false;
  auto* lift_cmd = app.add_subcommand("lift", "the form with a given principal part, or its obstruction");
  lift_cmd->add_option("--principal-part", pp_file, "q-expansion document carrying the principal part")->required();
  lift_cmd->add_option("--prec", lift_prec, "report coefficients below q^prec");
  lift_cmd->add_flag("--text", lift_text, "print the series instead of a document");

  std::string m_range, d_range;
  bool verbose = false;
  auto* duality = app.add_subcommand("duality", "check the duality grid between f_m and f'_d");
  duality_args.attach(duality);
  duality->add_option("--m-range", m_range, "orders of f_m, e.g. -15..-1")->required();
  duality->add_option("--d-range", d_range, "orders of f'_d (default: lowest m .. m_eps)");
  duality->add_flag("--verbose", verbose, "print every nonzero identity");

  std::int64_t check_prec = 0;
  auto* integ = app.add_subcommand("integrality", "integrality verdicts for s(n) a_m(n)");
  integ_args.attach(integ);
  integ->add_option("--check-prec", check_prec, "scan s(n)a(n) below this exponent (default automatic)");

  std::string input;
  auto* vv = app.add_subcommand("vvmf", "vector-valued components of a scalar form");
  vv->add_option("--input", input, "q-expansion document")->required();

  std::string tau = "0.3,1.1";
  double tol = 1e-8;
  auto* weil = app.add_subcommand("check-weil", "numerical check of the S and T transformations");
  weil->add_option("--input", input, "q-expansion document")->required();
  weil->add_option("--tau", tau, "sample point re,im");
  weil->add_option("--tolerance", tol, "maximal deviation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*dform) return cmd_dform(level, epsilon, components, as_json);
    if (*basis) return cmd_basis(basis_args, from, to, false, as_json, as_decimal, !no_cache);
    if (*dual_basis) return cmd_basis(dual_args, dfrom, dto, true, as_json, as_decimal, !no_cache);
    if (*lift_cmd) return cmd_lift(pp_file, lift_prec, lift_text);
    if (*duality) return cmd_duality(duality_args, m_range, d_range, as_json, verbose);
    if (*integ) return cmd_integrality(integ_args, check_prec, as_json);
    if (*vv) return cmd_vvmf(input, as_json);
    if (*weil) return cmd_check_weil(input, tau, tol, as_json);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const SpanningError& e) {
    std::cerr << "spanning incomplete: " << e.what() << "\n";
    return kSpanning;
  } catch (const ObstructionError& e) {
    std::cerr << "obstructed: " << e.what() << "\n";
    return kObstructed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kFail;
}
