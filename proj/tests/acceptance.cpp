// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <iostream>
#include <sstream>

#include "kscatter/verify.hpp"
#include "oracle.hpp"

using namespace kscatter;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) note << "failed: " << what;
      ok = false;
    }
  }
  void require(const CheckResult& c, const std::string& prefix) { require(c.passed, prefix + c.name + ": " + c.detail); }
};

Seed rank2_seed(std::int64_t s) { return Seed(SkewForm(2, {0, s, -s, 0}), {0, 1}); }

// Oracle directions vs diagram walls, zero tails ignored.
bool matches_oracle(const ScatteringDiagram& d, int s, int k) {
  auto want = oracle::scatter_rank2(s, k);
  std::map<oracle::Exp, std::vector<Integer>> got;
  for (const auto& w : d.walls()) {
    std::vector<Integer> c(w.function.coeffs().begin(), w.function.coeffs().end());
    while (!c.empty() && c.back() == 0) c.pop_back();
    got[{int(w.direction()[0]), int(w.direction()[1])}] = c;
  }
  if (got.size() != want.size()) return false;
  for (auto& [e, c] : want) {
    std::vector<Integer> v(c.begin(), c.end());
    while (!v.empty() && v.back() == 0) v.pop_back();
    if (got[e] != v) return false;
  }
  return true;
}

std::map<std::pair<std::int64_t, std::int64_t>, ScatteringDiagram> diagrams;
const ScatteringDiagram& diagram(std::int64_t s, std::int64_t k) {
  auto key = std::pair{s, k};
  if (!diagrams.count(key)) diagrams.emplace(key, complete(rank2_seed(s), k));
  return diagrams.at(key);
}

std::vector<ThetaFunction> criterion4_thetas;
std::vector<StructureConstantTable> criterion5_tables;

void c1(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  auto d = complete(rank2_seed(1), 8);
  bool identity = loop_is_identity(d, generic_loop(d));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(d.walls().size() == 3, "wall count " + std::to_string(d.walls().size()));
  const Wall* g = nullptr;
  for (const auto& w : d.walls())
    if (!w.is_initial()) g = &w;
  o.require(g && g->support == Cone::ray(LatticeVector{-1, -1}) &&
                g->function == WallFunction::binomial(LatticeVector{1, 1}, 8, *d.monoid()),
            "generated wall");
  o.require(identity, "loop defect");
  o.require(matches_oracle(d, 1, 8), "cancellation oracle");
  o.require(secs < 1.0, "runtime " + std::to_string(secs));
  o.note << "3 walls, generated (-R(1,1), 1 + z^(1,1)), loop identity mod J^9, " << secs << " s";
}

void c2(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  SplitMix rng(0x6b736361ULL);
  for (int s : {2, 3}) {
    const auto& d = diagram(s, 6);
    o.require(check_consistency(d, 64, rng), "s=" + std::to_string(s) + " ");
    o.require(check_wall_form(d), "s=" + std::to_string(s) + " ");
    o.require(matches_oracle(d, s, 6), "oracle s=" + std::to_string(s));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 300, "runtime");
  o.note << "<e1,e2> = 2, 3 at k=6: 64 loops each, nonnegative single-direction walls, oracle agrees, " << secs << " s";
}

void c3(Outcome& o) {
  std::size_t n = 0;
  for (auto key : {std::pair{1, 8}, std::pair{2, 6}, std::pair{3, 6}}) {
    const auto& d = diagram(key.first, key.second);
    o.require(check_cwall_confinement(d), "s=" + std::to_string(key.first) + " ");
    for (const auto& w : d.walls()) n += !w.is_initial();
  }
  o.note << n << " generated walls confined, none incoming";
}

void c4(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<LatticeVector> ms{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}};
  std::size_t checks = 0;
  for (int s : {1, 2}) {
    const auto& d = diagram(s, 6);
    for (const auto& w : d.walls())
      for (const auto& m : ms) {
        ++checks;
        o.require(theta_consistency_check(d, m, w, 6),
                  "s=" + std::to_string(s) + " wall " + w.direction().to_string() + " m=" + m.to_string());
      }
    for (const auto& m : ms)
      for (const auto& q : chamber_points(d)) {
        std::vector<LatticeVector> conds = basepoint_conditions(d, m, 6);
        bool generic = true;
        for (const auto& f : conds) generic &= sign(dot(f, q)) != 0;
        if (generic) criterion4_thetas.push_back(theta(d, m, q, 6));
      }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 60, "runtime");
  o.note << checks << " wall/exponent pairs consistent at k=6, " << secs << " s";
}

void c5(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  for (int s : {1, 2}) {
    MirrorAlgebra alg(diagram(s, 6).truncated(5));
    SplitMix rng(0x6b736361ULL + s);
    auto a = check_algebra(alg, 5, 20, 20, rng);
    std::string p = "s=" + std::to_string(s) + " ";
    o.require(a.commutativity, p);
    o.require(a.associativity, p);
    o.require(a.unit, p);
    o.require(a.frobenius, p);
    // tables of this criterion feed criterion 6
    SplitMix again(0x6b736361ULL + 100 + s);
    for (int i = 0; i < 20; ++i) {
      std::vector<LatticeVector> ps;
      std::size_t n = 2 + again.next() % 3;
      for (std::size_t j = 0; j < n; ++j) ps.push_back({again.uniform(-2, 2), again.uniform(-2, 2)});
      criterion5_tables.push_back(alg.structure_constants(ps, 5));
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 300, "runtime");
  o.note << "A2 and <e1,e2>=2 at k=5: commutativity, 20 associativity triples, unit, 20 Frobenius tuples, " << secs << " s";
}

void c6(Outcome& o) {
  std::size_t coeffs = 0;
  for (int s : {1, 2}) {
    MirrorAlgebra alg(diagram(s, 6).truncated(5));
    SplitMix rng(0x6b736361ULL + s);
    auto a = check_algebra(alg, 5, 20, 20, rng);
    o.require(a.positivity, "");
    o.require(a.convexity, "");
  }
  for (const auto& t : criterion4_thetas) {
    o.require(t.table.all_coefficients_nonnegative(), "theta " + t.m.to_string() + " at " + t.basepoint.to_string());
    for (const auto& [off, c] : t.table.terms()) {
      auto deg = t.table.monoid()->degree(off);
      o.require(deg && *deg <= 6, "theta offset " + off.to_string());
      ++coeffs;
    }
  }
  for (const auto& t : criterion5_tables) {
    LatticeVector sum(2);
    for (const auto& p : t.inputs) sum += p;
    for (const auto& [q, c] : t.entries) {
      o.require(c >= 0, "table entry at " + q.to_string());
      auto deg = rank2_seed(1).monoid()->degree(q - sum);
      o.require(deg && *deg <= t.order, "q - sum p at " + q.to_string());
      ++coeffs;
    }
  }
  o.note << coeffs << " theta coefficients and structure constants nonnegative and P-convex";
}

void c7(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  auto cs = ClusterSeed::from_seed(rank2_seed(1));
  auto rep = compare_exchange(diagram(1, 8).truncated(4), cs, 4);
  std::size_t matched = 0;
  for (const auto& r : rep.relations) matched += r.matched;
  o.require(rep.relations.size() == 5 && matched == 5, std::to_string(matched) + "/5 relations");
  for (const auto& e : rep.dictionary) o.require(e.matched, "dictionary g=" + e.g.to_string());
  auto vars = cluster_variables(run_mutations(cs, {0, 1, 0, 1, 0}));
  for (const auto& v : vars) o.require(v.all_coefficients_positive(), "Laurent positivity " + v.to_string());
  for (const auto& f : oracle::a2_cluster_variables()) {
    LaurentPolynomial p(2);
    for (auto& [e, c] : f.numerator) p.add_term(LatticeVector{e[0] - f.denominator[0], e[1] - f.denominator[1]}, c);
    o.require(std::find(vars.begin(), vars.end(), p) != vars.end(), "classical variable " + p.to_string());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 60, "runtime");
  o.note << matched << "/5 exchange relations, " << vars.size() << " positive Laurent variables, " << secs << " s";
}

void c8(Outcome& o) {
  auto t0 = std::chrono::steady_clock::now();
  VerifyOptions opt;
  opt.full = true;
  for (const auto& [name, fan] : {std::pair{"P2", Fan::projective_plane()}, std::pair{"P1xP1", Fan::p1_times_p1()},
                                  std::pair{"Bl1P2", Fan::blown_up_plane()}}) {
    auto rep = verify_toric(fan, opt);
    for (const auto& c : rep.checks) o.require(c, std::string(name) + " ");
    // class of every product against the hat-function oracle
    auto phi = build_phi(fan);
    std::vector<oracle::Exp> rays;
    for (const auto& r : fan.rays()) rays.push_back({int(r[0]), int(r[1])});
    SplitMix rng(17);
    for (int i = 0; i < 100; ++i) {
      LatticeVector a{rng.uniform(-3, 3), rng.uniform(-3, 3)}, b{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      auto want = oracle::toric_gamma(rays, {int(a[0]), int(a[1])}, {int(b[0]), int(b[1])});
      o.require(toric_product(fan, phi, a, b).gamma == CurveClass(want.begin(), want.end()),
                std::string(name) + " oracle class at " + a.to_string() + b.to_string());
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 60, "runtime");
  o.note << "P2, P1xP1, Bl1P2: weights, cocycle, vanishing, segments, nef, Stanley-Reisner, oracle classes, " << secs
         << " s";
}

void c9(Outcome& o) {
  std::size_t compared = 0;
  for (int s : {1, 2}) {
    MirrorAlgebra alg(diagram(s, 6).truncated(4));
    for (const auto& ps : std::vector<std::vector<LatticeVector>>{
             {{1, 0}, {-1, 0}}, {{-1, -1}, {1, 0}}, {{0, -1}, {-1, 0}, {1, 1}}, {{2, -1}, {-1, 2}}}) {
      auto ref = alg.structure_constants(ps, 4);
      auto pts = alg.basepoints_in_cell(ps, 4, ref.basepoint, 5);
      std::set<std::string> distinct;
      for (const auto& q : pts) distinct.insert(q.to_string());
      o.require(pts.size() == 5 && distinct.size() == 5, "five distinct basepoints");
      for (const auto& q : pts) {
        auto t = alg.structure_constants(ps, 4, q);
        o.require(t.entries == ref.entries, "table at " + q.to_string());
        ++compared;
      }
    }
  }
  o.note << compared << " tables at certified basepoints coincide with their chamber reference";
}

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  Run r;
  FILE* p = popen((std::string(KSCATTER_CLI) + " " + args + " 2>/dev/null").c_str(), "r");
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void c10(Outcome& o) {
  fs::path dir = fs::temp_directory_path() / ("kscatter_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto at = [&](const std::string& n) { return (dir / n).string(); };
  write_file_atomic(at("a2.seed"), write_seed(rank2_seed(1)));
  write_file_atomic(at("k2.seed"), write_seed(rank2_seed(2)));
  std::size_t outputs = 0;

  for (int run = 0; run < 2; ++run) {
    std::string tag = std::to_string(run);
    for (const char* seed : {"a2", "k2"}) {
      std::string base = std::string(seed) + tag;
      cli("scatter " + at(std::string(seed) + ".seed") + " -k 6 -o " + at(base + ".diag") + " --svg " + at(base + ".svg"));
      cli("theta " + at(base + ".diag") + " --m=-1,-1 -k 5 -o " + at(base + ".theta"));
      cli("theta " + at(base + ".diag") + " --m=1,1 --basepoint -5/7,-3/11 -o " + at(base + ".theta2"));
      cli("multiply " + at(base + ".diag") + " --p=1,0 --p=-1,0 --p=0,-1 -k 4 -o " + at(base + ".table"));
      cli("mutate " + at(std::string(seed) + ".seed") + " --sequence 1,2,1,2,1 -o " + at(base + ".trace"));
      cli("verify " + at(base + ".diag") + " --level quick -o " + at(base + ".report"));
    }
    cli("toric Bl1P2 product --a=1,-1 --a=2,1 --b=-1,2 --b=-1,-1 -o " + at("toric" + tag + ".product"));
    cli("toric P1xP1 weight --p=2,-1 --p=0,3 -o " + at("toric" + tag + ".weight"));
    cli("verify P2 --level quick -o " + at("toric" + tag + ".report"));
  }

  auto same = [&](const std::string& a, const std::string& b) {
    bool ok = fs::exists(at(a)) && fs::exists(at(b)) && read_file(at(a)) == read_file(at(b));
    o.require(ok, "byte-identical " + a);
    ++outputs;
    return ok;
  };
  for (const char* seed : {"a2", "k2"}) {
    std::string b0 = std::string(seed) + "0", b1 = std::string(seed) + "1";
    for (const char* ext : {".diag", ".svg", ".theta", ".theta2", ".table", ".trace", ".report"}) same(b0 + ext, b1 + ext);
    auto text = [&](const char* ext) { return read_file(at(b0 + ext)); };
    auto d = parse_diagram(text(".diag"));
    o.require(d == complete(rank2_seed(seed[0] == 'a' ? 1 : 2), 6) && write_diagram(d) == text(".diag"), "diagram round trip");
    o.require(write_theta(parse_theta(text(".theta"))) == text(".theta"), "theta round trip");
    o.require(write_theta(parse_theta(text(".theta2"))) == text(".theta2"), "theta round trip");
    o.require(write_table(parse_table(text(".table"))) == text(".table"), "table round trip");
    o.require(write_trace(parse_trace(text(".trace"))) == text(".trace"), "trace round trip");
    o.require(write_report(parse_report(text(".report"))) == text(".report"), "report round trip");
  }
  for (const char* ext : {".product", ".weight", ".report"}) {
    same(std::string("toric0") + ext, std::string("toric1") + ext);
    auto t = read_file(at(std::string("toric0") + ext));
    if (std::string(ext) == ".report") o.require(write_report(parse_report(t)) == t, "toric report round trip");
    else o.require(write_toric(parse_toric(t)) == t, "toric round trip");
  }
  fs::remove_all(dir);
  o.note << outputs << " CLI outputs byte-identical across two runs and re-parse to equal values";
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"A2 pentagon", c1},
      {"Kronecker consistency", c2},
      {"C-wall confinement", c3},
      {"theta consistency", c4},
      {"mirror-algebra laws", c5},
      {"positivity and convexity", c6},
      {"cluster comparison", c7},
      {"toric mode", c8},
      {"basepoint independence", c9},
      {"determinism and round trip", c10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note << " exception: " << e.what();
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << (i + 1) << " (" << criteria[i].first << "): " << o.note.str()
              << std::endl;
  }
  std::cout << (failed ? "ACCEPTANCE FAILED: " + std::to_string(failed) + " criteria" : std::string("ACCEPTANCE PASSED"))
            << std::endl;
  return failed ? 1 : 0;
}
