#include "pplab/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "pplab/census.hpp"
#include "pplab/families.hpp"
#include "pplab/version.hpp"

namespace pplab {

using Json = nlohmann::ordered_json;

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "command=" << command << ";p=" << p << ";h=" << h << ";family=" << family << ";branch=" << branch << ";A=" << A
     << ";B=" << B << ";curve=" << curve << ";all=" << all << ";bruteforce=" << bruteforce
     << ";probabilistic=" << probabilistic << ";budget=" << budget << ";seed=" << seed << ";format=" << format;
  return os.str();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::vector<std::uint32_t> parse_digits(const std::string& text, std::uint32_t p, int h) {
  std::vector<std::uint32_t> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw std::invalid_argument("malformed digits '" + text + "'");
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(cur, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cur.size()) throw std::invalid_argument("malformed digits '" + text + "'");
    if (v >= p) throw std::invalid_argument("digit " + cur + " out of range for p = " + std::to_string(p));
    out.push_back(static_cast<std::uint32_t>(v));
    cur.clear();
  };
  for (char ch : text) {
    if (ch == ':' || ch == ',') {
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  flush();
  if (static_cast<int>(out.size()) > h)
    throw std::invalid_argument("'" + text + "' has more than h = " + std::to_string(h) + " digits");
  out.resize(h, 0);
  return out;
}

namespace {

std::string digits_text(const FFElement& e) {
  std::string s;
  for (auto d : e.digits()) {
    if (!s.empty()) s += ':';
    s += std::to_string(d);
  }
  return s;
}

Json meta(const RunConfig& cfg) {
  return Json{{"seed", cfg.seed}, {"config_hash", cfg.hash()}, {"version", kVersion}};
}

Json sqrt_json(const SqrtExpr& e) { return Json{{"expr", e.str()}, {"approx", e.approx()}}; }

class Writer {
 public:
  Writer(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}
  // single sink for an artifact: the --out file if given, stdout otherwise
  void emit(const std::string& content) const {
    if (cfg_.out.empty()) {
      out_ << content;
      return;
    }
    std::ofstream f(cfg_.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + cfg_.out);
    f << content;
  }
  void emit(const Json& j) const { emit(j.dump(2) + "\n"); }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
};

FieldPtr make_field(const RunConfig& cfg) { return FieldCtx::make(cfg.p, cfg.h); }

// ------------------------------------------------------------ commands

int cmd_field_info(const RunConfig& cfg, std::ostream& out) {
  const FieldPtr f = make_field(cfg);
  Json j;
  j["command"] = "field-info";
  j["field"] = f->header();
  j["p"] = f->p();
  j["h"] = f->h();
  j["q"] = f->q();
  j["q_mod_3"] = f->q() % 3;
  j["extension_order"] = f->order(Level::extension).get_str();
  Json mu = Json::array();
  for (const auto& c : f->mu_intersect_base()) mu.push_back(digits_text(c));
  j["mu_intersect_base"] = mu;
  // Euler's criterion for -3
  j["minus_3_is_square"] = f->from_int(-3, Level::base).pow((f->q() - 1) / 2).is_one();
  j["meta"] = meta(cfg);
  Writer(cfg, out).emit(j);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const FieldPtr f = make_field(cfg);
  const Family fam = parse_family(cfg.family);
  const FFElement A = f->from_digits(parse_digits(cfg.A, cfg.p, cfg.h), Level::base);
  const FFElement B = f->from_digits(parse_digits(cfg.B, cfg.p, cfg.h), Level::base);
  const TrinomialSpec spec(fam, A, B);
  const ConditionResult cond = check_conditions(spec);

  Json j;
  j["command"] = "verify";
  j["field"] = f->header();
  j["family"] = cfg.family;
  j["A"] = digits_text(A);
  j["B"] = digits_text(B);
  j["conditions"] = Json{{"pass", cond.pass}, {"reasons", cond.reasons}};
  bool anomaly = false;
  if (!cfg.bruteforce) {
    j["bruteforce"] = "skipped";
  } else {
    try {
      const bool pp = is_permutation_bruteforce(spec, cfg.budget);
      j["bruteforce"] = pp ? "PP" : "not-PP";
      anomaly = cond.pass && !pp;
    } catch (const BudgetExceeded& e) {
      j["bruteforce"] = "budget-exceeded";
      j["error"] = e.what();
      anomaly = true;
    }
  }
  j["anomaly"] = anomaly;
  j["meta"] = meta(cfg);
  Writer(cfg, out).emit(j);
  return anomaly ? kExitFinding : kExitOk;
}

int cmd_census(const RunConfig& cfg, std::ostream& out) {
  const Family fam = parse_family(cfg.family);
  CensusOptions opt;
  opt.bruteforce = cfg.bruteforce;
  opt.workers = cfg.workers;
  opt.budget = cfg.budget;
  const CensusReport rep = run_census(fam, cfg.p, cfg.h, opt);
  const bool bad = !rep.anomalies.empty() || rep.bruteforce_partial;

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "# seed=" << cfg.seed << " config_hash=" << cfg.hash() << " version=" << kVersion << " field=" << rep.field->header()
       << "\n";
    os << "family,p,h,q,A,B,passes,bruteforce_pp\n";
    for (const auto& r : rep.rows) {
      os << to_string(fam) << ',' << rep.p << ',' << rep.h << ',' << rep.q << ',' << digits_text(r.A) << ','
         << digits_text(r.B) << ',' << (r.passes ? 1 : 0) << ',';
      if (r.over_budget)
        os << "budget";
      else if (r.bruteforce_pp)
        os << (*r.bruteforce_pp ? 1 : 0);
      else
        os << "skipped";
      os << '\n';
    }
    Writer(cfg, out).emit(os.str());
    return bad ? kExitFinding : kExitOk;
  }

  Json j;
  j["command"] = "census";
  j["field"] = rep.field->header();
  j["family"] = to_string(fam);
  j["p"] = rep.p;
  j["h"] = rep.h;
  j["q"] = rep.q;
  j["pairs_on_curve"] = rep.pairs_on_curve;
  j["pairs_passing"] = rep.pairs_passing;
  j["pairs_bruteforce_pp"] = rep.pairs_bruteforce_pp ? Json(*rep.pairs_bruteforce_pp) : Json();
  j["bruteforce_partial"] = rep.bruteforce_partial;
  if (rep.bound) {
    Json b = sqrt_json(rep.bound->value());
    b["formula"] = rep.bound->str();
    j["bound_value"] = b;
  } else {
    j["bound_value"] = "none";
  }
  j["bound_count"] = rep.bound_count;
  j["bound_satisfied"] = rep.bound_satisfied;
  if (!rep.per_b.empty()) {
    Json pb = Json::array();
    for (const auto& x : rep.per_b)
      pb.push_back(Json{{"B", digits_text(x.B)}, {"passing", x.passing}, {"split_passing", x.split_passing}});
    j["per_B"] = pb;
  }
  Json an = Json::array();
  for (const auto& [A, B] : rep.anomalies) an.push_back(Json{{"A", digits_text(A)}, {"B", digits_text(B)}});
  j["anomalies"] = an;
  j["meta"] = meta(cfg);
  Writer(cfg, out).emit(j);
  return bad ? kExitFinding : kExitOk;
}

int cmd_curves(const RunConfig& cfg, std::ostream& out) {
  std::vector<CurveId> ids;
  const std::uint64_t q = make_field(cfg)->q();
  if (!cfg.curve.empty()) {
    ids.push_back(parse_curve(cfg.curve));
  } else {
    ids.push_back(CurveId::P1);
    if (q % 3 == 1) {
      ids.push_back(CurveId::P2);
      ids.push_back(CurveId::P3);
    }
  }
  std::vector<CurveCountReport> reps;
  for (auto id : ids) reps.push_back(curve_point_count(id, cfg.p, cfg.h, cfg.workers));
  bool ok = true;
  for (const auto& r : reps) ok = ok && r.within_window();

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "# seed=" << cfg.seed << " config_hash=" << cfg.hash() << " version=" << kVersion << "\n";
    os << "curve,p,h,q,solution_count,stated_lower_bound,hasse_weil_upper,within_window\n";
    for (const auto& r : reps)
      os << to_string(r.curve) << ',' << r.p << ',' << r.h << ',' << r.q << ',' << r.solution_count << ','
         << r.stated_lower_bound.str() << ',' << r.hasse_weil_upper.str() << ',' << (r.within_window() ? 1 : 0) << '\n';
    Writer(cfg, out).emit(os.str());
    return ok ? kExitOk : kExitFinding;
  }
  Json arr = Json::array();
  for (const auto& r : reps) {
    Json c;
    c["curve"] = to_string(r.curve);
    c["q"] = r.q;
    c["solution_count"] = r.solution_count;
    c["stated_lower_bound"] = sqrt_json(r.stated_lower_bound);
    c["hasse_weil_upper"] = sqrt_json(r.hasse_weil_upper);
    c["genus_used"] = r.genus;
    c["slack"] = r.slack;
    c["lower_ok"] = r.lower_ok;
    c["upper_ok"] = r.upper_ok;
    c["within_window"] = r.within_window();
    if (!r.parameter.empty()) c["parameter"] = r.parameter;
    if (r.curve == CurveId::P1) c["degenerate_fibres"] = r.degenerate_fibres;
    if (!r.note.empty()) c["note"] = r.note;
    arr.push_back(c);
  }
  Json j{{"command", "curves"}, {"p", cfg.p}, {"h", cfg.h}, {"curves", arr}, {"meta", meta(cfg)}};
  Writer(cfg, out).emit(j);
  return ok ? kExitOk : kExitFinding;
}

int cmd_identities(const RunConfig& cfg, std::ostream& out) {
  std::vector<Family> fams;
  if (cfg.all) {
    fams = {Family::f1, Family::f2};
  } else {
    const Family f = parse_family(cfg.family);
    if (f != Family::f1 && f != Family::f2) throw std::invalid_argument("identities exist for f1 and f2 only");
    fams = {f};
  }
  const VerifyMode mode = cfg.probabilistic ? VerifyMode::probabilistic : VerifyMode::full;
  bool ok = true;
  Json arr = Json::array();
  for (Family f : fams) {
    const IdentityReport r = verify_identity(f, mode, cfg.seed);
    ok = ok && r.holds();
    Json e{{"family", to_string(f)},
           {"mode", to_string(mode)},
           {"holds", r.holds()},
           {"holds_as_displayed", r.holds_as_displayed},
           {"holds_negated", r.holds_negated}};
    if (mode == VerifyMode::full)
      e["residual_terms"] = r.residual_terms;
    else
      e["points"] = r.points;
    arr.push_back(e);
  }
  Json j{{"command", "identities"}, {"identities", arr}};
  if (cfg.all) {
    const bool rec = verify_reciprocal_identity();
    ok = ok && rec;
    j["reciprocal"] = Json{{"identity", "T^3 G(1/T) = -F(T)"}, {"holds", rec}};
  }
  j["all_hold"] = ok;
  j["meta"] = meta(cfg);
  Writer(cfg, out).emit(j);
  return ok ? kExitOk : kExitFinding;
}

int cmd_pipeline(const RunConfig& cfg, std::ostream& out) {
  const Family fam = parse_family(cfg.family);
  const Branch br = parse_branch(cfg.branch);
  const VerifyMode mode = cfg.probabilistic ? VerifyMode::probabilistic : VerifyMode::full;
  const PipelineReport rep = run_resultant_pipeline(fam, br, mode, cfg.seed);

  Json j;
  j["command"] = "pipeline";
  j["family"] = to_string(fam);
  j["branch"] = to_string(br);
  j["mode"] = to_string(mode);
  j["structure_ok"] = rep.structure_ok;
  j["structure"] = rep.structure_detail;
  j["homomorphism_ok"] = rep.homomorphism_ok;
  j["points"] = rep.points;
  Json fs = Json::array();
  for (const auto& c : rep.certified_factors)
    fs.push_back(Json{{"name", c.name}, {"multiplicity", c.multiplicity}, {"divides", c.multiplicity >= 1}});
  j["certified_factors"] = fs;
  j["steps"] = rep.steps;
  const std::string stem = to_string(fam) + "_" + to_string(br);
  if (mode == VerifyMode::full) {
    j["reduced_terms"] = rep.reduced_resultant.num_terms();
    if (!cfg.out.empty()) {
      // golden-file candidate next to the report
      std::filesystem::create_directories(cfg.out);
      const auto path = std::filesystem::path(cfg.out) / (stem + ".zpoly");
      std::ofstream f(path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + path.string());
      f << rep.reduced_resultant.str() << "\n";
      j["golden_candidate"] = path.filename().string();
    }
  }
  j["meta"] = meta(cfg);
  if (!cfg.out.empty()) {
    std::ofstream f(std::filesystem::path(cfg.out) / (stem + ".json"), std::ios::binary);
    f << j.dump(2) << "\n";
  }
  out << j.dump(2) << "\n";
  return rep.structure_ok && rep.homomorphism_ok ? kExitOk : kExitFinding;
}

unsigned default_workers() {
  if (const char* env = std::getenv("PPLAB_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Permutation trinomials over F_{q^3}: conditions, identities, eliminations, censuses."};
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.workers = default_workers();

  auto field_opts = [&](CLI::App* s) {
    s->add_option("--p", cfg.p, "characteristic, a prime > 3")->capture_default_str();
    s->add_option("--h", cfg.h, "q = p^h")->capture_default_str()->check(CLI::Range(1, kMaxBaseDegree));
  };
  auto common = [&](CLI::App* s) {
    s->add_option("--seed", cfg.seed, "RNG seed (root splitting, evaluation points)")->capture_default_str();
    s->add_option("--out", cfg.out, "output path");
    s->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    s->add_option("--workers", cfg.workers, "worker threads (default $PPLAB_WORKERS or 1)")->check(CLI::PositiveNumber);
  };

  auto* verify = app.add_subcommand("verify", "check one (A,B) against the conditions");
  field_opts(verify);
  common(verify);
  verify->add_option("--family", cfg.family)->check(CLI::IsMember({"f1", "f2", "f3", "f4"}));
  verify->add_option("--A", cfg.A, "base-p digits of A, low first, ':'-separated");
  verify->add_option("--B", cfg.B, "base-p digits of B, low first, ':'-separated");
  verify->add_flag("--bruteforce", cfg.bruteforce, "also test bijectivity over F_{q^3}");
  verify->add_option("--budget", cfg.budget)->check(CLI::PositiveNumber);

  auto* census = app.add_subcommand("census", "enumerate the family over F_q");
  field_opts(census);
  common(census);
  census->add_option("--family", cfg.family)->check(CLI::IsMember({"f1", "f2", "f3", "f4"}));
  census->add_flag("--bruteforce", cfg.bruteforce);
  census->add_option("--budget", cfg.budget)->check(CLI::PositiveNumber);

  auto* curves = app.add_subcommand("curves", "affine point counts of the auxiliary systems");
  field_opts(curves);
  common(curves);
  curves->add_option("--curve", cfg.curve, "P1, P2 or P3 (default: all applicable)");

  auto* identities = app.add_subcommand("identities", "verify the elimination identities");
  common(identities);
  identities->add_option("--family", cfg.family)->check(CLI::IsMember({"f1", "f2", "f3", "f4"}));
  identities->add_flag("--all", cfg.all, "f1, f2 and the reciprocal identity");
  identities->add_flag("--probabilistic", cfg.probabilistic, "evaluate at random points mod 2^61-1");

  auto* pipeline = app.add_subcommand("pipeline", "run an elimination and certify its structure");
  common(pipeline);
  pipeline->add_option("--family", cfg.family)->check(CLI::IsMember({"f1", "f2", "f3", "f4"}));
  pipeline->add_option("--branch", cfg.branch)->check(CLI::IsMember({"a_nonzero", "a_zero"}));
  pipeline->add_flag("--probabilistic", cfg.probabilistic);

  auto* info = app.add_subcommand("field-info", "describe the field tower");
  field_opts(info);
  common(info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "census") return cmd_census(cfg, out);
    if (cfg.command == "curves") return cmd_curves(cfg, out);
    if (cfg.command == "identities") return cmd_identities(cfg, out);
    if (cfg.command == "pipeline") return cmd_pipeline(cfg, out);
    if (cfg.command == "field-info") return cmd_field_info(cfg, out);
  } catch (const PipelineError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::invalid_argument& e) {  // includes CongruenceError
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace pplab
