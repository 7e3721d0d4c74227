#pragma once

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "galimage/audit.hpp"
#include "galimage/bounds.hpp"
#include "galimage/lmfdb.hpp"
#include "galimage/modsym.hpp"

namespace galimage::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* tool_version = "1.0.0";
inline constexpr const char* report_schema = "1";

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_incomplete = 2, exit_invalid = 3, exit_network = 4 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return exit_invalid;
    case ErrorKind::incomplete:
    case ErrorKind::decomposition: return exit_incomplete;
    case ErrorKind::unavailable:
    case ErrorKind::network:
    case ErrorKind::parse: return exit_network;
  }
  return exit_failure;
}

/// Desk-scale limits; all adjustable from the command line.
struct Guardrails {
  unsigned audit_max_n = 6;
  u64 dims_max_level = 2000;     // over Q
  u64 mod_ell_max_level = modsym::P1List::max_level;
};

inline json big_json(const BigInt& x) {
  if (x >= 0 && x <= std::numeric_limits<u64>::max()) return static_cast<u64>(x);
  return x.str();
}

inline json family_json(const FamilyMember& m) {
  json j{{"s", m.s}, {"t", m.t}, {"n", m.n}, {"level", big_json(m.level())}};
  if (m.even()) j["u"] = m.u();
  return j;
}

inline json provenance_json(const std::vector<std::string>& ids) {
  json out = json::array();
  for (const auto& id : ids) {
    for (const auto& r : trusted_rules()) {
      if (r.id == id) out.push_back(json{{"rule", r.id}, {"statement", r.statement}});
    }
  }
  return out;
}

/// The common report shape: echo, family, payload, provenance, completeness.
inline json envelope(const std::string& command, json args, std::optional<FamilyMember> family, json result,
                     const std::vector<std::string>& rules, bool complete) {
  json doc{{"schema", report_schema},
           {"tool", json{{"name", "galimage"}, {"version", tool_version}}},
           {"command", json{{"name", command}, {"args", std::move(args)}}}};
  if (family) doc["family"] = family_json(*family);
  doc["result"] = std::move(result);
  doc["provenance"] = provenance_json(rules);
  doc["complete"] = complete;
  return doc;
}

// ---- bound -------------------------------------------------------------------------------

inline json bound_result(const ExceptionalReport& r) {
  json reducible = json::array();
  for (const auto& p : r.reducible.primes) reducible.push_back(big_json(p));
  json factors = json::array();
  for (const auto& f : r.reducible.factorization.factors) {
    factors.push_back(json{{"prime", big_json(f.prime)}, {"exponent", f.exponent}, {"probable", f.probable}});
  }
  json cofactors = json::array();
  for (const auto& c : r.reducible.factorization.cofactors) cofactors.push_back(c.str());
  json primes = json::array();
  for (const auto& e : r.entries) {
    json trail = json::array();
    for (const auto& j : e.trail) trail.push_back(json{{"rule", j.rule}, {"detail", j.detail}, {"trusted", j.trusted}});
    primes.push_back(json{{"ell", e.ell}, {"status", to_string(e.status)}, {"trail", trail}});
  }
  return json{{"reducible_candidates", reducible},
              {"reducible_complete", r.reducible.complete},
              {"bound_number", r.reducible.bound_number.str()},
              {"congruence_modulus", r.reducible.congruence_modulus},
              {"factorization", factors},
              {"unfactored_cofactors", cofactors},
              {"dihedral_candidates", r.dihedral},
              {"density_upper_bound", r.density.str()},
              {"coefficient_degree_lower_bound", coefficient_degree_lower_bound(r.member.n, r.member.t)},
              {"ell_max", r.ell_max},
              {"primes", primes}};
}

inline json cmd_bound(unsigned n, u64 s, u64 t, u64 ell_max) {
  const auto m = FamilyMember::make(n, s, t);
  const auto r = family_report(m, ell_max);
  return envelope("bound", json{{"n", n}, {"s", s}, {"t", t}, {"ell_max", ell_max}}, m, bound_result(r), r.assumptions,
                  r.complete());
}

// ---- audit -------------------------------------------------------------------------------

inline json system_json(const modsym::Eigensystem& e, u64 upto) {
  json a = json::object();
  for (u64 p : e.primes) {
    if (p > upto) break;
    a[std::to_string(p)] = e.a(p).to_string();
  }
  return json{{"id", e.id},
              {"field_degree", e.degree},
              {"dimension", e.dimension},
              {"multiplicity", e.multiplicity},
              {"semisimple", e.semisimple},
              {"a", a}};
}

inline json verdict_json(const audit::AuditVerdict& v, const modsym::EigenDecomposition* dec) {
  using namespace audit;
  json targets = json::array();
  for (const auto& t : v.targets) {
    const auto c = semistable_consistency(t);
    const auto [x, y] = t.pair_at_s();
    targets.push_back(json{{"id", t.id},
                           {"order", t.order()},
                           {"field", "F_" + std::to_string(v.ell) + "^" + std::to_string(t.field().degree())},
                           {"generator", t.psi.generator()},
                           {"psi_at_generator", t.psi.value_at_generator().to_string()},
                           {"psi_at_s", t.psi_at(v.member.s).to_string()},
                           {"pair_at_s", json::array({x.to_string(), y.to_string()})},
                           {"consistent", c.consistent},
                           {"branch", to_string(c.branch)}});
  }
  json witnesses = json::array();
  for (const auto& w : v.witnesses) {
    json entry{{"system", w.system},
               {"target", w.target},
               {"frobenius_conjugate", w.conjugate},
               {"branch", to_string(semistable_consistency(v.targets[w.target]).branch)}};
    if (dec) entry["U_s"] = dec->systems[w.system].a(v.member.s).to_string();
    witnesses.push_back(entry);
  }
  json comparisons = json::array();
  for (const auto& c : v.comparisons) {
    comparisons.push_back(json{{"system", c.system}, {"target", c.target}, {"matched", c.matched},
                               {"refuting_prime", c.refuting_prime}});
  }
  json out{{"level", v.level},
           {"ell", v.ell},
           {"sturm_bound", v.sturm},
           {"candidate", v.candidate},
           {"computed", v.computed},
           {"outcome", to_string(v.outcome)},
           {"checked_primes", v.checked_primes},
           {"targets", targets},
           {"consistent_targets", v.consistent_targets},
           {"eigensystem_count", v.systems}};
  if (dec) {
    json systems = json::array();
    for (const auto& e : dec->systems) systems.push_back(system_json(e, 13));
    out["eigensystems"] = systems;
  }
  out["comparisons"] = comparisons;
  out["witnesses"] = witnesses;
  out["caveats"] = v.caveats;
  return out;
}

inline json dihedral_json(const audit::DihedralReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back(json{{"system", e.system}, {"dihedral_pattern", e.dihedral_pattern}, {"witness_prime", e.witness_prime}});
  }
  return json{{"checked_primes", r.checked_primes}, {"any_dihedral", r.any_dihedral()}, {"entries", entries}};
}

inline const std::vector<std::string>& audit_rules() {
  static const std::vector<std::string> ids{"non-cm", "level-raising", "residual-conductor", "dihedral-induction"};
  return ids;
}

inline json cmd_audit(unsigned n, u64 ell, u64 s, u64 t, const Guardrails& g) {
  const auto m = FamilyMember::make(n, s, t);
  audit::AuditOptions opts;
  opts.max_n = g.audit_max_n;
  audit::detail::check_scale(m, ell, opts, "audit");
  const u64 level = static_cast<u64>(m.level());
  require(level <= g.mod_ell_max_level, "audit: level " + std::to_string(level) + " exceeds the mod-ell limit " +
                                            std::to_string(g.mod_ell_max_level));
  const auto dec = modsym::eigensystems_mod_ell(level, ell);
  const auto v = audit::reducibility_audit(m, dec, opts);
  const auto d = audit::dihedral_spotcheck(m, dec, opts);
  json result = verdict_json(v, &dec);
  result["dihedral"] = dihedral_json(d);
  return envelope("audit", json{{"n", n}, {"ell", ell}, {"s", s}, {"t", t}}, m, result, audit_rules(),
                  dec.dimension_matches());
}

/// Every prime 3 < ell <= ell_max outside {s, t}.
inline json cmd_audit_scan(unsigned n, u64 ell_max, u64 s, u64 t, unsigned workers, const Guardrails& g) {
  const auto m = FamilyMember::make(n, s, t);
  audit::AuditOptions opts;
  opts.max_n = g.audit_max_n;
  std::vector<u64> ells;
  for (u64 ell = 5; ell <= ell_max; ++ell) {
    if (is_prime(ell) && ell != s && ell != t) ells.push_back(ell);
  }
  if (!ells.empty()) audit::detail::check_scale(m, ells.front(), opts, "audit");
  const auto verdicts = audit::reducibility_audits(m, ells, workers, opts);
  json list = json::array();
  json witness_ells = json::array();
  bool complete = true;
  for (const auto& v : verdicts) {
    list.push_back(json{{"ell", v.ell},
                        {"candidate", v.candidate},
                        {"outcome", to_string(v.outcome)},
                        {"witnesses", v.witnesses.size()},
                        {"caveats", v.caveats}});
    if (v.outcome == audit::Outcome::witness_found) witness_ells.push_back(v.ell);
    for (const auto& c : v.caveats) complete = complete && c.rfind("new subspace", 0) != 0;
  }
  json result{{"level", big_json(m.level())}, {"ell_max", ell_max}, {"witness_ells", witness_ells}, {"verdicts", list}};
  return envelope("audit", json{{"n", n}, {"ell_max", ell_max}, {"s", s}, {"t", t}}, m, result, audit_rules(), complete);
}

// ---- plan --------------------------------------------------------------------------------

inline json cmd_plan(u64 ell, u64 r0, u64 s, u64 t) {
  const auto p = realization_plan(ell, r0, s, t);
  json result{{"ell", p.ell},
              {"r0", p.r0},
              {"n", p.n},
              {"level", big_json(p.member.level())},
              {"field_exponent_lower_bound", p.r},
              {"coefficient_degree_lower_bound", coefficient_degree_lower_bound(p.n, t)},
              {"reducible_excluded", !is_reducible_candidate(p.member, ell)},
              {"ramification", p.ramification}};
  return envelope("plan", json{{"ell", ell}, {"r0", r0}, {"s", s}, {"t", t}}, p.member, result,
                  {"non-cm", "level-raising", "residual-conductor", "large-image"}, true);
}

// ---- dims --------------------------------------------------------------------------------

inline json cmd_dims(u64 N, std::optional<u64> ell, const Guardrails& g) {
  require(N >= 1, "dims: N must be positive");
  json result{{"N", N},
              {"index", modsym::gamma0_index(N)},
              {"genus", modsym::genus_X0(N)},
              {"cusps", modsym::cusp_count(N)},
              {"elliptic_points_2", modsym::elliptic_points_2(N)},
              {"elliptic_points_3", modsym::elliptic_points_3(N)},
              {"sturm_bound", modsym::sturm_bound(N)},
              {"newform_dimension_formula", modsym::new_dimension(N)}};
  std::size_t cusp_dim = 0, new_dim = 0;
  if (ell) {
    require(N <= g.mod_ell_max_level, "dims: N = " + std::to_string(N) + " exceeds the mod-ell limit " +
                                          std::to_string(g.mod_ell_max_level));
    require(is_prime(*ell), "dims: ell must be prime");
    const auto space = modsym::build_space(N, PrimeField(*ell));
    cusp_dim = space.cuspidal().dim();
    new_dim = space.new_subspace().dim();
    result["field"] = "F_" + std::to_string(*ell);
  } else {
    require(N <= g.dims_max_level, "dims: N = " + std::to_string(N) + " exceeds the rational-computation limit " +
                                       std::to_string(g.dims_max_level) + " (raise it with --max-level or use --ell)");
    const auto space = modsym::build_space(N, RationalField{});
    cusp_dim = space.cuspidal().dim();
    new_dim = space.new_subspace().dim();
    result["field"] = "Q";
  }
  result["cuspidal_dimension"] = cusp_dim;
  result["new_subspace_dimension"] = new_dim;
  const bool consistent = cusp_dim == 2 * modsym::genus_X0(N) && new_dim == 2 * modsym::new_dimension(N);
  result["consistent_with_formulas"] = consistent;
  json args{{"N", N}};
  if (ell) args["ell"] = *ell;
  return envelope("dims", args, std::nullopt, result, {}, consistent);
}

// ---- fetch -------------------------------------------------------------------------------

inline json cmd_fetch(u64 N, std::optional<u64> ell, bool refresh, const lmfdb::ClientConfig& cfg) {
  const auto r = refresh ? lmfdb::refresh_newforms(N, cfg) : lmfdb::fetch_newforms(N, cfg);
  json forms = json::array();
  for (const auto& f : r.set.newforms) {
    json ap = json::object();
    for (const auto& e : f.ap) {
      if (e.p > 13) break;
      ap[std::to_string(e.p)] = e.charpoly;
    }
    forms.push_back(json{{"label", f.label}, {"dim", f.dim}, {"hecke_bound", f.hecke_bound}, {"charpolys", ap}});
  }
  json result{{"N", N},
              {"from_cache", r.from_cache},
              {"file", lmfdb::cache_filename(N)},
              {"source", r.set.source},
              {"timestamp", r.set.timestamp},
              {"newform_count", r.set.newforms.size()},
              {"total_dimension", r.set.total_dim()},
              {"newforms", forms}};
  bool complete = true;
  if (ell) {
    const auto v = lmfdb::cross_validate(N, *ell, cfg);
    json disc = json::array();
    for (const auto& d : v.discrepancies) {
      disc.push_back(json{{"p", d.p}, {"expected", d.expected}, {"computed", d.computed}});
    }
    result["cross_validation"] = json{{"ell", *ell},
                                      {"status", lmfdb::to_string(v.status)},
                                      {"compared_primes", v.compared_primes},
                                      {"discrepancies", disc},
                                      {"unmatched_forms", v.unmatched_forms},
                                      {"warnings", v.warnings}};
    complete = v.status != lmfdb::ValidationStatus::mismatch;
  }
  json args{{"N", N}, {"offline", cfg.offline}, {"refresh", refresh}};
  if (ell) args["ell"] = *ell;
  return envelope("fetch", args, std::nullopt, result, {}, complete);
}

// ---- rendering ---------------------------------------------------------------------------

namespace detail {

inline std::string scalar(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

inline bool flat(const json& j) {
  return std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
}

inline void render(std::ostream& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    const std::string key = j.is_object() ? it.key() : "-";
    if (v.is_primitive()) {
      out << pad << key << (j.is_object() ? ": " : " ") << scalar(v) << "\n";
    } else if (v.empty()) {
      out << pad << key << (j.is_object() ? ": " : " ") << (v.is_array() ? "[]" : "{}") << "\n";
    } else if (v.is_array() && flat(v)) {
      out << pad << key << (j.is_object() ? ": " : " ") << "[";
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar(v[i]);
      out << "]\n";
    } else if (j.is_array() && v.is_object()) {
      std::ostringstream item;
      render(item, v, indent + 2);
      out << pad << "- " << item.str().substr(static_cast<std::size_t>(indent) + 2);
    } else {
      out << pad << key << (j.is_object() ? ":" : "") << "\n";
      render(out, v, indent + 2);
    }
  }
}

}  // namespace detail

/// Indented text view of a report; carries exactly the JSON content.
inline std::string render_text(const json& doc) {
  std::ostringstream out;
  detail::render(out, doc, 0);
  return out.str();
}

inline std::string render_json(const json& doc) { return doc.dump(2) + "\n"; }

// ---- entry point -------------------------------------------------------------------------

/// Parses arguments, runs one subcommand and writes the report. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exceptional primes and residual images for weight-2 newforms of level s*t^n", "galimage"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version);

  bool as_json = false;
  bool offline = false;
  std::string cache_dir;
  unsigned workers = 1;
  Guardrails guard;
  app.add_flag("--json", as_json, "Emit the machine-readable report");
  app.add_flag("--offline", offline, "Never touch the network");
  app.add_option("--cache-dir", cache_dir, "Newform cache directory (default: $GALIMAGE_CACHE_DIR or the shipped fixtures)");
  app.add_option("--workers", workers, "Threads for per-ell scans")->check(CLI::Range(1u, 256u));
  app.add_option("--max-audit-n", guard.audit_max_n, "Largest n accepted by audit")->capture_default_str();
  app.add_option("--max-level", guard.dims_max_level, "Largest level for dims over Q")->capture_default_str();

  unsigned n = 0;
  u64 s = 2, t = 3, ell = 0, ell_max = 0, r0 = 0, N = 0;
  bool refresh = false;

  auto* bound = app.add_subcommand("bound", "Exceptional-prime bounds for one family member");
  bound->add_option("--n", n, "Exponent of t in the level")->required();
  bound->add_option("--s", s, "Semistable prime")->capture_default_str();
  bound->add_option("--t", t, "Wild prime")->capture_default_str();
  bound->add_option("--ell-max", ell_max, "Classify primes up to this bound (default 100)");

  auto* aud = app.add_subcommand("audit", "Search for the reducible residual eigensystem");
  aud->add_option("--n", n, "Exponent of t in the level")->required();
  auto* ell_opt = aud->add_option("--ell", ell, "Residual characteristic");
  auto* scan_opt = aud->add_option("--ell-max", ell_max, "Audit every prime 3 < ell <= ell-max instead");
  ell_opt->excludes(scan_opt);
  aud->add_option("--s", s, "Semistable prime")->capture_default_str();
  aud->add_option("--t", t, "Wild prime")->capture_default_str();

  auto* plan = app.add_subcommand("plan", "Smallest family member realizing a field exponent");
  plan->add_option("--ell", ell, "Residual characteristic")->required();
  plan->add_option("--r0", r0, "Required field exponent")->required();
  plan->add_option("--s", s, "Semistable prime")->capture_default_str();
  plan->add_option("--t", t, "Wild prime")->capture_default_str();

  auto* dims = app.add_subcommand("dims", "Genus, cusps and modular-symbol dimensions for Gamma0(N)");
  dims->add_option("--N", N, "Level")->required();
  auto* dims_ell = dims->add_option("--ell", ell, "Work over F_ell instead of Q");

  auto* fetch = app.add_subcommand("fetch", "Load newform data (cache first) and optionally cross-check it");
  fetch->add_option("--N", N, "Level")->required();
  auto* fetch_ell = fetch->add_option("--ell", ell, "Cross-validate against eigensystems mod ell");
  fetch->add_flag("--refresh", refresh, "Download again and overwrite the cache");

  for (auto* sub : {bound, aud, plan, dims, fetch}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_invalid;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    json doc;
    if (bound->parsed()) {
      doc = cmd_bound(n, s, t, ell_max == 0 ? 100 : ell_max);
    } else if (aud->parsed()) {
      if (scan_opt->count() > 0) {
        doc = cmd_audit_scan(n, ell_max, s, t, workers, guard);
      } else {
        require(ell_opt->count() > 0, "audit: give --ell or --ell-max");
        doc = cmd_audit(n, ell, s, t, guard);
      }
    } else if (plan->parsed()) {
      doc = cmd_plan(ell, r0, s, t);
    } else if (dims->parsed()) {
      doc = cmd_dims(N, dims_ell->count() ? std::optional<u64>(ell) : std::nullopt, guard);
    } else {
      auto cfg = lmfdb::ClientConfig::from_environment();
      if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
      if (offline) cfg.offline = true;
      doc = cmd_fetch(N, fetch_ell->count() ? std::optional<u64>(ell) : std::nullopt, refresh, cfg);
    }
    out << (as_json ? render_json(doc) : render_text(doc));
    if (!doc["complete"].get<bool>()) return exit_incomplete;
    return exit_ok;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    err << "galimage " << command << ": " << e.what() << "\n";
    if (as_json) {
      json doc{{"schema", report_schema},
               {"tool", json{{"name", "galimage"}, {"version", tool_version}}},
               {"command", json{{"name", command}}},
               {"error", json{{"kind", to_string(e.kind())}, {"message", e.what()}, {"exit_code", code}}}};
      out << render_json(doc);
    }
    return code;
  }
}

}  // namespace galimage::cli
