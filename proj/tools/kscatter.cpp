// kscatter: command-line front end for scattering diagrams, theta functions,
// structure constants, toric classes and cluster mutation.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kscatter/verify.hpp"

using namespace kscatter;

namespace {

enum Exit { Ok = 0, VerifyFailed = 1, InputError = 2, InternalError = 3 };

void emit(const std::optional<std::string>& out, const std::string& text) {
  if (out) {
    write_file_atomic(*out, text);
  } else {
    std::cout << text;
  }
}

Fan load_fan(const std::string& source) {
  if (source == "P2") return Fan::projective_plane();
  if (source == "P1xP1") return Fan::p1_times_p1();
  if (source == "Bl1P2") return Fan::blown_up_plane();
  return parse_fan(read_file(source));
}

std::vector<std::size_t> parse_sequence(const std::string& text, std::size_t rank) {
  std::vector<std::size_t> seq;
  auto parsed = parse_lattice_vector(text);
  for (auto v : parsed.coords()) {
    if (v < 1 || static_cast<std::size_t>(v) > rank)
      throw Error(ErrorCode::InvalidArgument, "mutation index " + std::to_string(v) + " out of range");
    seq.push_back(static_cast<std::size_t>(v - 1));
  }
  return seq;
}

bool looks_like_fan(const std::string& text) { return text.find("\nray ") != std::string::npos || text.rfind("ray ", 0) == 0; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-order scattering diagrams, theta functions and mirror structure constants"};
  app.require_subcommand(1);

  std::optional<std::string> out;
  std::int64_t order = 6;

  auto* scatter = app.add_subcommand("scatter", "complete a rank-2 seed to a consistent diagram");
  std::string seed_path;
  std::optional<std::string> svg;
  scatter->add_option("seed", seed_path, "seed file")->required();
  scatter->add_option("--order,-k", order, "truncation order")->check(CLI::NonNegativeNumber);
  scatter->add_option("--svg", svg, "also write an SVG drawing here");
  scatter->add_option("--out,-o", out, "output file (default stdout)");

  auto* theta_cmd = app.add_subcommand("theta", "theta function at a basepoint");
  std::string diagram_path, m_text;
  std::optional<std::string> basepoint_text;
  std::optional<std::int64_t> order_opt;
  theta_cmd->add_option("diagram", diagram_path, "diagram file")->required();
  theta_cmd->add_option("--m", m_text, "asymptotic exponent, e.g. --m=1,0")->required();
  theta_cmd->add_option("--basepoint", basepoint_text, "exact basepoint, e.g. 2/3,1/7 (default: certified automatic)");
  theta_cmd->add_option("--order,-k", order_opt, "order (default: diagram order)");
  theta_cmd->add_option("--out,-o", out, "output file (default stdout)");

  auto* multiply = app.add_subcommand("multiply", "structure constants of a product of theta functions");
  std::vector<std::string> p_texts;
  multiply->add_option("diagram", diagram_path, "diagram file")->required();
  multiply->add_option("--p", p_texts, "input exponent; repeat for each factor, e.g. --p=1,0 --p=-1,0")->required();
  multiply->add_option("--basepoint", basepoint_text, "exact basepoint (default: certified automatic)");
  multiply->add_option("--order,-k", order_opt, "order (default: diagram order)");
  multiply->add_option("--out,-o", out, "output file (default stdout)");

  auto* toric = app.add_subcommand("toric", "toric mode: kinks, weights and class-graded products");
  std::string fan_source, toric_action = "kinks";
  std::vector<std::string> a_texts, b_texts, w_texts;
  toric->add_option("fan", fan_source, "fan file or one of P2, P1xP1, Bl1P2")->required();
  toric->add_option("action", toric_action, "kinks | product | weight")
      ->check(CLI::IsMember({"kinks", "product", "weight"}));
  toric->add_option("--a", a_texts, "first factor of a product (repeatable)");
  toric->add_option("--b", b_texts, "second factor of a product (repeatable)");
  toric->add_option("--p", w_texts, "point for a weight (repeatable)");
  toric->add_option("--out,-o", out, "output file (default stdout)");

  auto* mutate = app.add_subcommand("mutate", "cluster mutation trace in the initial variables");
  std::string sequence_text;
  mutate->add_option("seed", seed_path, "seed file")->required();
  mutate->add_option("--sequence", sequence_text, "1-based indices, e.g. 1,2,1,2,1")->required();
  mutate->add_option("--out,-o", out, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "run the invariant battery");
  std::string target, level = "full", mode = "auto";
  verify->add_option("target", target, "diagram, seed or fan file (or P2, P1xP1, Bl1P2)")->required();
  verify->add_option("--level", level, "quick | full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--mode", mode, "cluster | toric | auto")->check(CLI::IsMember({"cluster", "toric", "auto"}));
  verify->add_option("--order,-k", order_opt, "order used when completing a seed (default 6)");
  verify->add_option("--out,-o", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? Ok : InputError;
  }

  try {
    if (*scatter) {
      auto seed = parse_seed(read_file(seed_path));
      auto d = complete(seed, order);
      if (svg) write_file_atomic(*svg, render_svg(d));
      emit(out, write_diagram(d));
      return Ok;
    }
    if (*theta_cmd) {
      auto d = parse_diagram(read_file(diagram_path));
      std::int64_t k = order_opt.value_or(d.order());
      if (k > d.order()) throw Error(ErrorCode::OrderMismatch, "order exceeds the diagram order");
      auto m = parse_lattice_vector(m_text);
      if (m.rank() != d.rank()) throw Error(ErrorCode::DimensionMismatch, "--m has the wrong length");
      RationalPoint q = basepoint_text ? parse_rational_point(*basepoint_text)
                                       : generic_point(d.rank(), std::nullopt, basepoint_conditions(d, m, k)).point;
      emit(out, write_theta(ThetaDump{d.seed(), k, theta(d, m, q, k)}));
      return Ok;
    }
    if (*multiply) {
      auto d = parse_diagram(read_file(diagram_path));
      std::int64_t k = order_opt.value_or(d.order());
      if (k > d.order()) throw Error(ErrorCode::OrderMismatch, "order exceeds the diagram order");
      std::vector<LatticeVector> ps;
      for (const auto& t : p_texts) {
        ps.push_back(parse_lattice_vector(t));
        if (ps.back().rank() != d.rank()) throw Error(ErrorCode::DimensionMismatch, "--p has the wrong length");
      }
      MirrorAlgebra algebra(d);
      std::optional<RationalPoint> q;
      if (basepoint_text) q = parse_rational_point(*basepoint_text);
      emit(out, write_table(algebra.structure_constants(ps, k, q)));
      return Ok;
    }
    if (*toric) {
      Fan fan = load_fan(fan_source);
      auto phi = build_phi(fan);
      ToricReport report{fan, phi.kinks, {}, {}};
      if (toric_action == "product") {
        if (a_texts.empty() || a_texts.size() != b_texts.size())
          throw Error(ErrorCode::InvalidArgument, "product needs matching --a and --b lists");
        for (std::size_t i = 0; i < a_texts.size(); ++i) {
          auto a = parse_lattice_vector(a_texts[i]), b = parse_lattice_vector(b_texts[i]);
          auto p = toric_product(fan, phi, a, b);
          report.products.push_back({a, b, p.q, p.gamma, p.root});
        }
      } else if (toric_action == "weight") {
        if (w_texts.empty()) throw Error(ErrorCode::InvalidArgument, "weight needs at least one --p");
        for (const auto& t : w_texts) {
          auto p = parse_lattice_vector(t);
          report.weights.emplace_back(p, weight(fan, p));
        }
      }
      emit(out, write_toric(report));
      return Ok;
    }
    if (*mutate) {
      auto seed = parse_seed(read_file(seed_path));
      auto cs = ClusterSeed::from_seed(seed);
      emit(out, write_trace(run_mutations(cs, parse_sequence(sequence_text, cs.rank))));
      return Ok;
    }
    if (*verify) {
      VerifyOptions options;
      options.full = level == "full";
      VerifyReport report;
      bool builtin = target == "P2" || target == "P1xP1" || target == "Bl1P2";
      std::string text = builtin ? std::string() : read_file(target);
      bool toric_mode = mode == "toric" || (mode == "auto" && (builtin || looks_like_fan(text)));
      if (toric_mode) {
        report = verify_toric(load_fan(target), options);
      } else if (text.find("order") != std::string::npos && text.find("\nwall") != std::string::npos) {
        report = verify_diagram(parse_diagram(text), options);
      } else {
        report = verify_diagram(complete(parse_seed(text), order_opt.value_or(6)), options);
      }
      emit(out, write_report(report));
      return report.passed() ? Ok : VerifyFailed;
    }
  } catch (const ParseError& e) {
    std::cerr << "kscatter: " << e.what() << '\n';
    return InputError;
  } catch (const Error& e) {
    std::cerr << "kscatter: " << e.what() << '\n';
    return e.code() == ErrorCode::Internal ? InternalError : InputError;
  } catch (const std::exception& e) {
    std::cerr << "kscatter: " << e.what() << '\n';
    return InternalError;
  }
  return Ok;
}
