#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scone/dual_cone.hpp"
#include "scone/scone_member.hpp"
#include "scone/univariate.hpp"

using namespace scone;

namespace {

constexpr int kUsage = 3;

struct Flags {
  double tol = 1e-8;
  double gamma_tol = 1e-6;
  bool exact = false;
  bool reduced_only = false;
  int max_iters = 400;
  std::uint64_t seed = 1;
  std::string mode = "reduced";
  int N = 0;
  int d = 4;
  std::string input;
  std::string cert;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Certified: return 0;
    case Verdict::Refuted: return 1;
    default: return 2;
  }
}

MembershipOptions membership(const Flags& f) {
  MembershipOptions o;
  o.tol = f.tol;
  o.max_iters = f.max_iters;
  o.seed = f.seed;
  return o;
}

json membership_json(const MembershipResult& r) {
  json j{{"verdict", verdict_name(r.verdict)}, {"margin", r.margin}};
  if (r.cert) j["certificate"] = certificate_to_json(*r.cert);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

int cmd_check(const Flags& fl) {
  auto f = parse_sfunction(read_json(fl.input), fl.exact);
  auto r = scone_membership(f, membership(fl));
  emit(membership_json(r));
  std::cerr << verdict_name(r.verdict) << (r.cert ? std::string(" (") + certificate_kind(*r.cert) + ")" : "") << "\n";
  return verdict_code(r.verdict);
}

int cmd_dual_check(const Flags& fl) {
  auto u = parse_dual_vector(read_json(fl.input), fl.exact);
  auto rep = dual_membership(u, parse_dual_mode(fl.mode));
  emit(dual_report_to_json(rep));
  std::cerr << (rep.member ? "member" : "not a member") << (rep.exact ? " (exact)" : "") << "\n";
  return rep.member ? 0 : 1;
}

int cmd_decompose(const Flags& fl) {
  auto f = parse_sfunction(read_json(fl.input), fl.exact);
  auto r = scone_membership(f, membership(fl));
  if (r.verdict == Verdict::Certified && r.cert) {
    if (const auto* dec = std::get_if<AGDecomposition>(&*r.cert)) r.cert = decompose_to_circuits(*dec, fl.reduced_only);
  }
  emit(membership_json(r));
  std::cerr << verdict_name(r.verdict) << "\n";
  return verdict_code(r.verdict);
}

int cmd_extreme(const Flags& fl) {
  const json doc = read_json(fl.input);
  const json& sj = doc.at("support");
  std::vector<Exponent> ev, od;
  for (const auto& e : sj.at("even")) ev.push_back(exponent_from_json(e));
  for (const auto& e : sj.value("odd", json::array())) od.push_back(exponent_from_json(e));
  const Support s(sj.at("n").get<std::size_t>(), ev, od);
  ExtremalityLabel lab;
  if (doc.contains("ray")) {
    const auto& ray = doc.at("ray");
    lab = classify_extreme(MonomialRay{exponent_from_json(ray.at("beta")), ray.value("sign", 0)}, s);
  } else {
    auto cf = circuit_function_from_json(doc.at("circuit"), s.even, fl.exact);
    lab = classify_extreme(cf, s, fl.exact ? 0.0 : 1e-9);
  }
  emit({{"kind", extreme_kind_name(lab.kind)}, {"reason", lab.reason}});
  std::cerr << extreme_kind_name(lab.kind) << "\n";
  return lab.kind == ExtremeKind::NotExtreme ? 1 : 0;
}

int cmd_bound(const Flags& fl) {
  auto f = parse_sfunction(read_json(fl.input), fl.exact);
  BoundOptions o;
  o.gamma_tol = fl.gamma_tol;
  o.membership = membership(fl);
  auto lb = sonc_lower_bound(f, o);
  emit({{"gamma", lb.gamma}, {"queries", lb.queries}, {"certificate", certificate_to_json(lb.cert)}});
  std::cerr << "SONC lower bound " << lb.gamma << "\n";
  return 0;
}

int cmd_approx(const Flags& fl) {
  auto f = unipoly_from_json(read_json(fl.input), fl.exact);
  ApproxOptions o;
  o.membership = membership(fl);
  auto st = approx_step(f, fl.N, o);
  emit({{"N", st.N},
        {"c_star", st.c_star},
        {"x0", st.x0},
        {"pN", unipoly_to_json(st.pN)},
        {"queries", st.queries},
        {"certificate", certificate_to_json(st.cert)}});
  std::cerr << "N = " << st.N << ", c* = " << st.c_star << "\n";
  return 0;
}

int cmd_putinar(const Flags& fl) {
  auto r = putinar_verify(fl.d);
  emit(putinar_report_to_json(r));
  std::cerr << "pairing " << format_rational(r.pairing) << (r.all_ok() ? ", all checks pass" : ", a check failed")
            << "\n";
  return r.all_ok() ? 0 : 1;
}

int cmd_qmodule(const Flags& fl) {
  auto f = unipoly_from_json(read_json(fl.input), true);
  auto r = qmodule_search(f, fl.d, membership(fl));
  emit(qmodule_result_to_json(r));
  std::cerr << (r.found ? "representation found" : "NoCertificateFound") << "\n";
  return r.found ? 0 : 2;
}

int cmd_verify(const Flags& fl) {
  auto f = parse_sfunction(read_json(fl.input), fl.exact);
  json cj = read_json(fl.cert);
  if (cj.contains("certificate")) cj = cj.at("certificate");
  auto cert = certificate_from_json(cj, f, fl.exact);
  auto v = verify_certificate(f, cert, fl.exact ? 0.0 : 1e-9);
  emit({{"ok", v.ok}, {"kind", certificate_kind(cert)}, {"reason", v.reason}});
  std::cerr << (v.ok ? "certificate verified" : "certificate rejected: " + v.reason) << "\n";
  return v.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"S-cone membership certificates"};
  app.require_subcommand(1);
  Flags fl;
  if (const char* e = std::getenv("SCONE_EXACT"); e && std::string(e) == "1") fl.exact = true;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", fl.tol, "membership tolerance")->check(CLI::PositiveNumber);
    sub->add_flag("--exact", fl.exact, "rational arithmetic for inputs and checks");
    sub->add_option("--max-iters", fl.max_iters, "Newton step budget")->check(CLI::PositiveNumber);
    sub->add_option("--seed", fl.seed, "seed for randomized internals");
  };
  auto file_cmd = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", fl.input, "input JSON file")->required();
    add_common(sub);
    return sub;
  };

  auto* check = file_cmd("check", "decide membership of an S-function");
  auto* dual = file_cmd("dual-check", "decide membership of a dual vector");
  dual->add_option("--mode", fl.mode, "allLambda | circuits | reduced | lp");
  auto* decompose = file_cmd("decompose", "circuit decomposition of a certified function");
  decompose->add_flag("--reduced-only", fl.reduced_only, "use reduced circuits only");
  auto* extreme = file_cmd("extreme", "classify a circuit function or monomial ray");
  auto* bound = file_cmd("bound", "SONC lower bound by bisection");
  bound->add_option("--gamma-tol", fl.gamma_tol, "bisection tolerance")->check(CLI::PositiveNumber);
  auto* approx = file_cmd("approx", "univariate SONC approximation step");
  approx->add_option("--N", fl.N, "degree of the added monomial")->required()->check(CLI::PositiveNumber);
  auto* qmod = file_cmd("qmodule", "quadratic module search over [0, 1]");
  qmod->add_option("--d", fl.d, "degree bound")->check(CLI::NonNegativeNumber);
  auto* putinar = app.add_subcommand("putinar", "exact impossibility report for (x - 1/2)^4 + 1/1000");
  putinar->add_option("--d", fl.d, "degree bound (>= 4)")->check(CLI::Range(4, 400));
  add_common(putinar);
  auto* verify = file_cmd("verify", "check a certificate against a function");
  verify->add_option("certificate", fl.cert, "certificate JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(fl);
    if (*dual) return cmd_dual_check(fl);
    if (*decompose) return cmd_decompose(fl);
    if (*extreme) return cmd_extreme(fl);
    if (*bound) return cmd_bound(fl);
    if (*approx) return cmd_approx(fl);
    if (*putinar) return cmd_putinar(fl);
    if (*qmod) return cmd_qmodule(fl);
    if (*verify) return cmd_verify(fl);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
