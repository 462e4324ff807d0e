// Command-line front end: Haar sampling, geometry queries, SO(4)
// factorization, isometry verification sweeps, and the acceptance report.
//
// Exit codes: 0 success, 1 criterion/verdict failure, 2 usage or parse
// error, 3 cut locus, 4 membership failure.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liegeom/acceptance.hpp"
#include "liegeom/covering_un.hpp"
#include "liegeom/geometry.hpp"
#include "liegeom/isometries.hpp"
#include "liegeom/json_io.hpp"
#include "liegeom/so4.hpp"

namespace {

using namespace liegeom;

constexpr int kExitOk = 0;
constexpr int kExitCriterion = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCutLocus = 3;
constexpr int kExitMembership = 4;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::CutLocus:
      return kExitCutLocus;
    case ErrorCode::NotInGroup:
    case ErrorCode::NotTangent:
    case ErrorCode::TooFar:
      return kExitMembership;
    default:
      return kExitUsage;
  }
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("LIEGEOM_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 12345;
}

json load_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("bad JSON: ") + e.what());
  }
}

Matrix load_matrix(const std::string& path) {
  return matrix_from_json(load_json(path));
}

void print_matrix_text(std::ostream& os, const Matrix& m) {
  const bool real = is_effectively_real(m);
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (c) os << "  ";
      if (real) {
        os << m(r, c).real();
      } else {
        os << m(r, c).real() << (m(r, c).imag() < 0 ? "-" : "+")
           << std::abs(m(r, c).imag()) << "i";
      }
    }
    os << "\n";
  }
}

struct CommonOpts {
  std::string group = "SO:3";
  std::optional<std::uint64_t> seed;
  std::string format = "json";
};

int cmd_sample(const CommonOpts& opts, int samples) {
  const GroupId g = parse_group_descriptor(opts.group);
  const std::uint64_t seed = resolve_seed(opts.seed);
  SeededSampler s{seed, 0};
  json out = {{"group", g.name()}, {"seed", seed}, {"samples", json::array()}};
  for (int i = 0; i < samples; ++i) {
    const auto drawn = haar_sample(g, s);
    s = drawn.next;
    const MembershipReport rep = membership(g, drawn.value.m);
    out["samples"].push_back(
        {{"matrix", matrix_to_json(drawn.value.m)},
         {"membership_residual", rep.max_residual}});
  }
  if (opts.format == "json") {
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "group " << g.name() << " seed " << seed << "\n";
    for (const auto& item : out["samples"]) {
      print_matrix_text(std::cout, matrix_from_json(item["matrix"]));
      std::cout << "membership_residual "
                << item["membership_residual"].get<double>() << "\n\n";
    }
  }
  return kExitOk;
}

MetricSpec metric_from_flag(GroupId g, const std::string& name) {
  if (name == "killing") return MetricSpec::killing(g);
  if (name == "frobenius") return MetricSpec::frobenius(g);
  fail(ErrorCode::InvalidArgument, "unknown metric: " + name);
}

MetricSpec default_metric(GroupId g) {
  return g.family == GroupFamily::U ? MetricSpec::frobenius(g)
                                    : MetricSpec::killing(g);
}

int cmd_geo_distance(const CommonOpts& opts, const std::string& metric_name,
                     const std::string& a_path, const std::string& b_path) {
  const GroupId g = parse_group_descriptor(opts.group);
  const MetricSpec m = metric_name.empty() ? default_metric(g)
                                           : metric_from_flag(g, metric_name);
  const GroupElement a = make_group_element(g, load_matrix(a_path));
  const GroupElement b = make_group_element(g, load_matrix(b_path));
  const double d = distance(m, a, b);
  if (opts.format == "json") {
    std::cout << json{{"distance", d}}.dump() << "\n";
  } else {
    std::cout << d << "\n";
  }
  return kExitOk;
}

int cmd_geo_point(const CommonOpts& opts, const std::string& x_path,
                  const std::string& v_path, double t) {
  const GroupId g = parse_group_descriptor(opts.group);
  const GroupElement x = make_group_element(g, load_matrix(x_path));
  const AlgebraElement v = make_algebra_element(g, load_matrix(v_path));
  const GroupElement p = geodesic(x, v, t);
  if (opts.format == "json") {
    std::cout << json{{"point", matrix_to_json(p.m)},
                      {"membership_residual",
                       membership(g, p.m).max_residual}}
                     .dump()
              << "\n";
  } else {
    print_matrix_text(std::cout, p.m);
  }
  return kExitOk;
}

int cmd_geo_log(const CommonOpts& opts, const std::string& a_path,
                const std::string& b_path) {
  const GroupId g = parse_group_descriptor(opts.group);
  const GroupElement a = make_group_element(g, load_matrix(a_path));
  const GroupElement b = make_group_element(g, load_matrix(b_path));
  const AlgebraElement v = riemannian_log(a, b);
  const double residual = (geodesic(a, v, 1.0).m - b.m).norm();
  if (opts.format == "json") {
    std::cout << json{{"log", matrix_to_json(v.v)}, {"residual", residual}}
                     .dump()
              << "\n";
  } else {
    print_matrix_text(std::cout, v.v);
    std::cout << "residual " << residual << "\n";
  }
  return kExitOk;
}

int cmd_factorize_so4(const CommonOpts& opts, const std::string& x_path) {
  const GroupElement x = make_group_element(so(4), load_matrix(x_path));
  const CayleyFactorization f = cayley_factor(x);
  const json out = {{"X1", matrix_to_json(f.x1.m)},
                    {"X2", matrix_to_json(f.x2.m)},
                    {"residual", f.residual}};
  if (opts.format == "json") {
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "X1\n";
    print_matrix_text(std::cout, f.x1.m);
    std::cout << "X2\n";
    print_matrix_text(std::cout, f.x2.m);
    std::cout << "residual " << f.residual << "\n";
  }
  return kExitOk;
}

Matrix off_sheet(const Matrix& a) {
  Matrix d = Matrix::Identity(a.rows(), a.cols());
  d(a.rows() - 1, a.cols() - 1) = -1.0;
  return a * d;
}

struct VerifyCase {
  std::string label;
  PointMap map;
  Verdict expected;
  std::string note;
};

std::vector<VerifyCase> verify_cases_for_family(GroupId g,
                                                const std::string& family,
                                                SeededSampler& s, int draws) {
  std::vector<VerifyCase> cases;
  const auto fams = families_for(g);

  auto add_family_draws = [&](const FamilyInfo& info) {
    for (int d = 0; d < draws; ++d) {
      const bool sheet =
          info.domain == ParamDomain::MatchedParityOrthogonal && d % 2;
      auto a = haar_sample(g, s);
      auto b = haar_sample(g, a.next);
      s = b.next;
      Matrix pa = sheet ? off_sheet(a.value.m) : a.value.m;
      Matrix pb = sheet ? off_sheet(b.value.m) : b.value.m;
      cases.push_back({std::string(family_name(info.tag)) +
                           (sheet ? "(det=-1 sheet)" : ""),
                       family_point_map(g, info.tag, pa, pb),
                       Verdict::Isometry,
                       ""});
    }
  };

  for (const auto& info : fams) {
    if (family == family_name(info.tag)) {
      add_family_draws(info);
      return cases;
    }
  }

  // Families outside the list: known falsification targets and the SU(2)
  // canonicalization cases.
  const FamilyTag tag = parse_family(family);
  auto a = haar_sample(g, s);
  auto b = haar_sample(g, a.next);
  s = b.next;
  if (g.family == GroupFamily::U && g.n >= 3 &&
      (tag == FamilyTag::DetTwist || tag == FamilyTag::DetAdjoint)) {
    cases.push_back({family, family_point_map(g, tag, a.value.m, b.value.m),
                     Verdict::NotIsometry,
                     "expected falsification: det twists are isometries of "
                     "U(2) only"});
    return cases;
  }
  if (g.family == GroupFamily::SU && g.n == 2 &&
      (tag == FamilyTag::Conjugate || tag == FamilyTag::Transpose)) {
    const IsometryMap canon = canonicalize_su2(tag, a.value.m, b.value.m);
    cases.push_back(
        {family, family_point_map(g, tag, a.value.m, b.value.m),
         Verdict::Isometry,
         std::string("canonicalizes into the listed family '") +
             family_name(canon.family) + "', not a new family"});
    return cases;
  }
  fail(ErrorCode::InvalidArgument,
       family + " is neither a family of " + g.name() +
           " nor a known falsification target");
}

std::vector<VerifyCase> falsification_cases(GroupId g, SeededSampler& s) {
  std::vector<VerifyCase> cases;
  auto a = haar_sample(g, s);
  auto b = haar_sample(g, a.next);
  s = b.next;
  if (g.family == GroupFamily::U && g.n >= 3) {
    for (const FamilyTag tag : {FamilyTag::DetTwist, FamilyTag::DetAdjoint}) {
      cases.push_back({std::string(family_name(tag)) + " (excluded)",
                       family_point_map(g, tag, a.value.m, b.value.m),
                       Verdict::NotIsometry, "excluded family"});
    }
  }
  if (g.family == GroupFamily::SO && g.n % 2 == 0) {
    cases.push_back({"transpose (mixed parity)",
                     family_point_map(g, FamilyTag::Transpose, a.value.m,
                                      off_sheet(b.value.m)),
                     Verdict::NotIsometry,
                     "mixed-parity parameters leave the group"});
  }
  return cases;
}

int cmd_verify(const CommonOpts& opts, const std::string& family, bool all,
               int samples, int draws, const std::string& metric_name) {
  const GroupId g = parse_group_descriptor(opts.group);
  const std::uint64_t seed = resolve_seed(opts.seed);
  const MetricSpec m = metric_name.empty() ? default_metric(g)
                                           : metric_from_flag(g, metric_name);
  SeededSampler s{seed, 0};

  std::vector<VerifyCase> cases;
  if (all) {
    for (const auto& info : families_for(g)) {
      auto fam_cases =
          verify_cases_for_family(g, family_name(info.tag), s, draws);
      cases.insert(cases.end(), fam_cases.begin(), fam_cases.end());
    }
    auto fals = falsification_cases(g, s);
    cases.insert(cases.end(), fals.begin(), fals.end());
  } else {
    cases = verify_cases_for_family(g, family, s, draws);
  }

  bool all_expected = true;
  json results = json::array();
  for (const auto& vc : cases) {
    const VerificationReport rep =
        verify_isometry(vc.map, m, SeededSampler{seed, 500}, samples);
    const bool ok = rep.verdict == vc.expected;
    all_expected = all_expected && ok;
    json entry = {{"family", vc.label},
                  {"verdict", to_string(rep.verdict)},
                  {"expected", to_string(vc.expected)},
                  {"samples", rep.samples},
                  {"max_metric_defect", rep.max_metric_defect},
                  {"max_membership_defect", rep.max_membership_defect},
                  {"ok", ok}};
    if (!vc.note.empty()) entry["note"] = vc.note;
    results.push_back(std::move(entry));
  }

  json out = {{"group", g.name()},
              {"seed", seed},
              {"results", std::move(results)},
              {"all_expected", all_expected}};
  if (all) {
    // Component-count cross-check: family tags times parameter sheets.
    int from_families = 0;
    for (const auto& info : families_for(g)) from_families += info.components();
    const int expected_components = component_count(g);
    out["component_count"] = {{"from_families", from_families},
                              {"expected", expected_components}};
    if (from_families != expected_components) all_expected = false;
    out["all_expected"] = all_expected;
  }

  if (opts.format == "json") {
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "group " << g.name() << " seed " << seed << "\n";
    for (const auto& entry : out["results"]) {
      std::cout << (entry["ok"].get<bool>() ? "[ ok ] " : "[FAIL] ")
                << entry["family"].get<std::string>() << ": "
                << entry["verdict"].get<std::string>()
                << " (metric defect "
                << entry["max_metric_defect"].get<double>() << ")";
      if (entry.contains("note")) {
        std::cout << " -- " << entry["note"].get<std::string>();
      }
      std::cout << "\n";
    }
  }
  return all_expected ? kExitOk : kExitCriterion;
}

int cmd_report(const CommonOpts& opts) {
  const std::uint64_t seed = resolve_seed(opts.seed);
  const acceptance::Report rep = acceptance::run_report(seed);
  if (opts.format == "json") {
    std::cout << acceptance::report_to_json(rep).dump() << "\n";
  } else {
    std::cout << acceptance::report_to_text(rep);
  }
  return rep.all_pass ? kExitOk : kExitCriterion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical geometry of compact matrix groups"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::optional<std::uint64_t> seed_flag;

  auto add_common = [&](CLI::App* cmd, bool with_group = true) {
    if (with_group) {
      cmd->add_option("--group", opts.group, "group descriptor, e.g. SO:4");
    }
    cmd->add_option("--seed", seed_flag, "RNG seed (overrides LIEGEOM_SEED)");
    cmd->add_option("--format", opts.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
  };

  // sample
  int samples = 1;
  auto* sample_cmd = app.add_subcommand("sample", "draw Haar samples");
  add_common(sample_cmd);
  sample_cmd->add_option("--samples", samples, "number of draws")
      ->check(CLI::PositiveNumber);

  // geo
  auto* geo_cmd = app.add_subcommand("geo", "geodesic geometry queries");
  geo_cmd->require_subcommand(1);
  std::string a_path, b_path, x_path, v_path, metric_name;
  double t_param = 0.0;
  auto* dist_cmd = geo_cmd->add_subcommand("distance", "geodesic distance");
  add_common(dist_cmd);
  dist_cmd->add_option("--metric", metric_name, "killing or frobenius");
  dist_cmd->add_option("--a", a_path, "matrix JSON file")->required();
  dist_cmd->add_option("--b", b_path, "matrix JSON file")->required();
  auto* point_cmd = geo_cmd->add_subcommand("point", "point on a geodesic");
  add_common(point_cmd);
  point_cmd->add_option("--x", x_path, "base point JSON file")->required();
  point_cmd->add_option("--v", v_path, "velocity JSON file")->required();
  point_cmd->add_option("--t", t_param, "parameter value")->required();
  auto* log_cmd = geo_cmd->add_subcommand("log", "Riemannian logarithm");
  add_common(log_cmd);
  log_cmd->add_option("--a", a_path, "matrix JSON file")->required();
  log_cmd->add_option("--b", b_path, "matrix JSON file")->required();

  // factorize-so4
  auto* fact_cmd =
      app.add_subcommand("factorize-so4", "Cayley factorization of SO(4)");
  add_common(fact_cmd, /*with_group=*/false);
  fact_cmd->add_option("--x", x_path, "SO(4) matrix JSON file")->required();

  // verify
  std::string family;
  bool verify_all = false;
  int verify_samples = 100, verify_draws = 4;
  auto* verify_cmd =
      app.add_subcommand("verify", "verify isometry families numerically");
  add_common(verify_cmd);
  verify_cmd->add_option("--family", family, "family tag to verify");
  verify_cmd->add_flag("--all", verify_all,
                       "verify every family plus the falsification suite");
  verify_cmd->add_option("--samples", verify_samples, "samples per draw")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--draws", verify_draws, "parameter draws per family")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--metric", metric_name, "killing or frobenius");

  // report
  auto* report_cmd =
      app.add_subcommand("report", "run the full acceptance suite");
  add_common(report_cmd, /*with_group=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  opts.seed = seed_flag;
  try {
    if (sample_cmd->parsed()) return cmd_sample(opts, samples);
    if (dist_cmd->parsed())
      return cmd_geo_distance(opts, metric_name, a_path, b_path);
    if (point_cmd->parsed()) return cmd_geo_point(opts, x_path, v_path, t_param);
    if (log_cmd->parsed()) return cmd_geo_log(opts, a_path, b_path);
    if (fact_cmd->parsed()) return cmd_factorize_so4(opts, x_path);
    if (verify_cmd->parsed()) {
      if (!verify_all && family.empty()) {
        std::cerr << "verify needs --family or --all\n";
        return kExitUsage;
      }
      return cmd_verify(opts, family, verify_all, verify_samples, verify_draws,
                        metric_name);
    }
    if (report_cmd->parsed()) return cmd_report(opts);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
