// Command line entry points: law checking, the calculus and the Taylor demo.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cohdiff/denot.hpp"
#include "cohdiff/differential.hpp"
#include "cohdiff/exponential.hpp"
#include "cohdiff/lawcheck.hpp"

using namespace cohdiff;

namespace {

constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Kind> models(const std::string& m) {
  if (m == "all") return {Kind::Coh, Kind::Nucs, Kind::Rel};
  try {
    return {parse_kind(m)};
  } catch (const std::exception&) {
    throw UsageError("unknown model '" + m + "' (coh, nucs, rel or all)");
  }
}

// Relations on !S E rewritten with sources (m0,m1), the way they are usually displayed.
Rel pair_form(const Rel& r) {
  const Arrow s2 = seely2_inv();
  Rel out;
  for (const auto& [m, t] : r.pairs())
    for (const auto& p : s2.image(m, 1000)) out.insert(p, t);
  return out;
}

int check_laws(const std::string& model, int trials, std::uint64_t seed, int degree, int web,
               const std::vector<std::string>& only, const std::string& summary) {
  RunOptions opt;
  opt.trials = trials;
  opt.seed = seed;
  opt.budget.max_degree = degree;
  opt.web_size = web;
  for (const auto& n : only)
    if (!find_diagram(n)) throw UsageError("unknown diagram '" + n + "'");
  std::vector<CheckReport> all;
  for (Kind k : models(model)) {
    auto rs = run_all(k, opt, only);
    all.insert(all.end(), rs.begin(), rs.end());
  }
  std::cout << text_report(all);
  if (!summary.empty()) {
    std::ofstream out(summary);
    if (!out) throw UsageError("cannot write " + summary);
    out << json_summary(all, opt) << "\n";
  }
  for (const auto& r : all)
    if (!r.passed) return 1;
  return 0;
}

calc::Term read_term(const std::string& path) { return calc::parse_term(slurp(path)); }

int typecheck_cmd(const std::string& path) {
  const calc::Term m = read_term(path);
  const calc::Ty t = calc::typecheck({}, m);
  std::cout << calc::show(m) << " : " << t.str() << "\n";
  return 0;
}

int reduce_cmd(const std::string& path, int fuel, bool trace) {
  const calc::Term m = read_term(path);
  const calc::Ty t = calc::typecheck({}, m);
  int n = 0;
  auto on_step = [&](const calc::Step& s) {
    ++n;
    if (trace) std::cout << n << "\t" << s.rule << "\t" << calc::show(s.term) << "\n";
  };
  try {
    const calc::Term nf = calc::normalize(m, fuel, on_step);
    std::cout << calc::show(nf) << " : " << t.str() << "\n";
    return 0;
  } catch (const calc::FuelExhausted& e) {
    std::cout << "fuel exhausted after " << e.fuel << " steps\n" << calc::show(e.last) << "\n";
    return 1;
  }
}

int eval_cmd(const std::string& path, int degree, int nats, const std::string& kind) {
  denot::SemEnv env;
  env.degree = degree;
  env.nat_bound = nats;
  if (kind == "rel")
    env.kind = Kind::Rel;
  else if (kind == "nucs")
    env.kind = Kind::Nucs;
  else
    throw UsageError("--kind must be rel or nucs");
  const calc::Term m = read_term(path);
  const denot::SemRel r = denot::interp_term({}, m, env);
  std::cout << "# " << calc::show(m) << " : " << r.type.str() << "\n" << write_rel(r.rel);
  return 0;
}

int derive_cmd(const std::string& rel_path, const std::string& space_path, const std::string& name,
               int degree, bool raw) {
  const auto spaces = parse_space_file(slurp(space_path));
  Space e;
  if (name.empty()) {
    if (spaces.size() != 1) throw UsageError("--source is needed when the space file declares several spaces");
    e = spaces.begin()->second;
  } else {
    auto it = spaces.find(name);
    if (it == spaces.end()) throw UsageError("no space named '" + name + "'");
    e = it->second;
  }
  const Rel s = read_rel(slurp(rel_path));
  const Rel d = dhat(s, e, Budget{degree, 200000});
  std::cout << write_rel(raw ? d : pair_form(d));
  return 0;
}

int demo_taylor() {
  const Budget b{3, 20000};
  const Rel s{{parse_atom("[a]"), parse_atom("b")}};
  const Rel s2{{parse_atom("[a,a]"), parse_atom("b")}};
  for (Kind k : {Kind::Coh, Kind::Nucs}) {
    const Space e = base_space(k, "E", {parse_atom("a")}, {});
    std::cout << "== " << kind_name(k) << "\n";
    std::cout << "-- Ds, s = {([a],b)}\n" << write_rel(pair_form(dhat(s, e, b)));
    std::cout << "-- Ds', s' = {([a,a],b)}\n" << write_rel(pair_form(dhat(s2, e, b)));
  }
  std::cout << "Fun s and Fun s' agree on every clique; only NUCS keeps the derivative of s'.\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohdiff: coherent differentiation toolkit"};
  app.require_subcommand(1);

  std::string model = "all", summary, only_list;
  int trials = 100, degree = 3, web = 4;
  std::uint64_t seed = 1;
  auto* laws = app.add_subcommand("check-laws", "Run the registered categorical diagrams");
  laws->add_option("--model", model, "coh, nucs, rel or all")->capture_default_str();
  laws->add_option("--trials", trials)->capture_default_str()->check(CLI::PositiveNumber);
  laws->add_option("--seed", seed)->capture_default_str();
  laws->add_option("--budget", degree, "maximal multiset degree")->capture_default_str()->check(CLI::Range(0, 6));
  laws->add_option("--web", web, "maximal base web size")->capture_default_str()->check(CLI::Range(1, 6));
  laws->add_option("--only", only_list, "comma separated diagram names");
  laws->add_option("--summary", summary, "write a JSON summary to this file");

  std::string file;
  auto* tc = app.add_subcommand("typecheck", "Type a closed term");
  tc->add_option("FILE", file)->required();

  int fuel = 1000;
  bool trace = false;
  auto* red = app.add_subcommand("reduce", "Normalize a closed term");
  red->add_option("FILE", file)->required();
  red->add_option("--fuel", fuel)->capture_default_str()->check(CLI::NonNegativeNumber);
  red->add_flag("--trace", trace, "print every step");

  std::string kind = "nucs";
  int nats = 3;
  auto* ev = app.add_subcommand("eval", "Print the truncated relation of a closed term");
  ev->add_option("FILE", file)->required();
  ev->add_option("--budget", degree)->capture_default_str()->check(CLI::Range(0, 6));
  ev->add_option("--nats", nats, "naturals 0..N")->capture_default_str()->check(CLI::Range(0, 20));
  ev->add_option("--kind", kind, "rel or nucs")->capture_default_str();

  std::string space_file, source;
  bool raw = false;
  auto* der = app.add_subcommand("derive", "Compute the derivative of a relation !E -> F");
  der->add_option("FILE", file, ".rel file")->required();
  der->add_option("--space", space_file, ".space file declaring E")->required();
  der->add_option("--source", source, "name of E in the space file");
  der->add_option("--budget", degree)->capture_default_str()->check(CLI::Range(0, 6));
  der->add_flag("--raw", raw, "sources as multisets of tagged atoms");

  std::string which;
  auto* demo = app.add_subcommand("demo", "Built-in demonstrations");
  demo->add_option("NAME", which, "taylor")->required()->check(CLI::IsMember({"taylor"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*laws) {
      std::vector<std::string> only;
      std::stringstream ss(only_list);
      for (std::string n; std::getline(ss, n, ',');)
        if (!n.empty()) only.push_back(n);
      return check_laws(model, trials, seed, degree, web, only, summary);
    }
    if (*tc) return typecheck_cmd(file);
    if (*red) return reduce_cmd(file, fuel, trace);
    if (*ev) return eval_cmd(file, degree, nats, kind);
    if (*der) return derive_cmd(file, space_file, source, degree, raw);
    if (*demo) return demo_taylor();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const calc::TermParseError& e) {
    std::cerr << file << ":" << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
