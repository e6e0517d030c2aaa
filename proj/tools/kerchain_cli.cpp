// kerchain: verification suites, membership queries, certificates and DOT
// export for the double of <a, t> along H.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kerchain/certify.hpp"
#include "kerchain/construction.hpp"
#include "kerchain/graphs.hpp"
#include "kerchain/kernel_chain.hpp"
#include "kerchain/suites.hpp"

namespace {

using namespace kerchain;
namespace kc = kerchain::construction;

constexpr int kExitParse = 2;

int write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return kExitParse;
  }
  out << text;
  return 0;
}

int run_verify(const VerifyOptions& opt, bool ball_claim) {
  if (opt.max_len == 0) std::cout << "notice: L = 0, ball agreement skipped\n";
  bool ok = true;
  for (const Report& r : kerchain::run_verify(opt)) {
    std::cout << r;
    ok = ok && r.ok();
  }
  if (ball_claim) {
    Report r{"ball_claim", {}};
    for (std::size_t n = 0; n <= opt.max_r; ++n)
      r.add("n=" + std::to_string(n), kc::ball_claim_holds(n),
            "least matching index " + std::to_string(kc::minimal_ball_index(n, 2 * opt.max_r + 2)));
    std::cout << r;
    ok = ok && r.ok();
  }
  std::cout << (ok ? "verify: all checks passed\n" : "verify: FAILED\n");
  return ok ? 0 : 1;
}

int run_member(const std::string& word, const std::string& target) {
  FreeWord w;
  try {
    w = kc::alphabet().parse(word);
  } catch (const InvalidInput& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  }
  bool in = false;
  if (target == "H") {
    in = kc::in_h(w);
  } else if (target.rfind("Hr:", 0) == 0) {
    std::size_t r = 0;
    try {
      r = std::stoul(target.substr(3));
    } catch (const std::exception&) {
      std::cerr << "bad target: " << target << "\n";
      return kExitParse;
    }
    in = kc::in_hr(w, r);
  } else {
    std::cerr << "target must be H or Hr:<r>\n";
    return kExitParse;
  }
  std::cout << (in ? "true" : "false") << "\n";
  return in ? 0 : 1;
}

int run_certify(const std::string& expr, std::size_t bound_m, const std::string& out) {
  DoubleElement w;
  try {
    w = parse_element(expr);
  } catch (const InvalidInput& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  }
  if (Double::is_trivial(w)) {
    std::cerr << "error: trivial element has no certificate\n";
    return 1;
  }
  const Certificate c = certify(w, bound_m);
  if (int rc = write_output(to_json(c), out)) return rc;
  std::ostream& summary = out.empty() || out == "-" ? std::cerr : std::cout;
  summary << "case " << to_string(c.kind) << ", index " << c.quotient_cover().index() << ", " << c.facts.size()
          << " facts\n";
  return 0;
}

int run_check(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return kExitParse;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    const bool ok = check(certificate_from_json(buf.str()));
    std::cout << (ok ? "true" : "false") << "\n";
    return ok ? 0 : 1;
  } catch (const InvalidInput& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  }
}

std::vector<FreeWord> parse_words(const std::vector<std::string>& texts) {
  std::vector<FreeWord> out;
  for (const std::string& s : texts) out.push_back(kc::alphabet().parse(s));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel-chain counterexample toolkit: subgroup graphs, the double along H, certificates"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  std::size_t max_vertices = vertex_cap().load();
  app.add_option("--seed", seed, "seed for randomized property suites");
  app.add_option("--max-vertices", max_vertices, "refuse graphs with more vertices than this");

  VerifyOptions vopt;
  bool ball_claim = false;
  auto* verify = app.add_subcommand("verify", "run every verification suite");
  verify->add_option("-N,--N", vopt.max_n, "kernel chain / strict increase bound");
  verify->add_option("-M,--M", vopt.max_m, "generator bound for invariance and H ⊆ H_r");
  verify->add_option("-L,--L", vopt.max_len, "word length bound for exhaustive ball agreement");
  verify->add_flag("--ball-claim", ball_claim, "also test ball isomorphism of H's and H_(n+1)'s covers");

  std::string member_word, member_target = "H";
  auto* member = app.add_subcommand("member", "decide membership in H or H_r");
  member->add_option("word", member_word, "word, e.g. \"t^3 a^8 t^-3\"")->required();
  member->add_option("--in", member_target, "H or Hr:<r>");

  std::string cert_expr, cert_out;
  std::size_t cert_m = 8;
  auto* certify_cmd = app.add_subcommand("certify", "write a residual-finiteness certificate");
  certify_cmd->add_option("expr", cert_expr, "element, e.g. \"[t a^-1 t^-1] * [t a t^-1]'\"")->required();
  certify_cmd->add_option("-M,--M", cert_m, "number of H generators spot-checked in K");
  certify_cmd->add_option("-o,--out", cert_out, "output file (stdout if omitted)");

  std::string check_path;
  auto* check_cmd = app.add_subcommand("check", "re-verify a certificate file");
  check_cmd->add_option("file", check_path)->required();

  std::optional<std::size_t> dot_bhat, dot_bhat_r, dot_hr;
  std::vector<std::string> dot_gens;
  std::string dot_out;
  auto* dot = app.add_subcommand("dot", "export a subgroup graph as Graphviz DOT");
  auto* dot_group = dot->add_option_group("target");
  dot_group->add_option("--bhat", dot_bhat, "core of H's cover truncated at t-level L");
  dot_group->add_option("--bhat-r", dot_bhat_r, "directly built core of H_r's cover");
  dot_group->add_option("--hr", dot_hr, "folded graph of H_r's generators");
  dot_group->add_option("--gens", dot_gens, "fold the given generator words");
  dot_group->require_option(1);
  dot->add_option("-o,--out", dot_out, "output file (stdout if omitted)");

  std::vector<std::string> fold_gens;
  auto* fold = app.add_subcommand("fold", "fold generators and print the graph's edge list");
  fold->add_option("gens", fold_gens, "generator words");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }
  vertex_cap().store(max_vertices);
  vopt.seed = seed;

  try {
    if (verify->parsed()) return run_verify(vopt, ball_claim);
    if (member->parsed()) return run_member(member_word, member_target);
    if (certify_cmd->parsed()) return run_certify(cert_expr, cert_m, cert_out);
    if (check_cmd->parsed()) return run_check(check_path);
    if (dot->parsed()) {
      std::optional<CoreGraph> g;
      if (dot_bhat) g = kc::truncated_h_core(*dot_bhat).graph;
      if (dot_bhat_r) g = kc::hr_core(*dot_bhat_r);
      if (dot_hr) g = kc::hr_graph(*dot_hr);
      if (!dot_gens.empty()) g = CoreGraph::from_generators(2, parse_words(dot_gens));
      return write_output(to_dot(*g, kc::alphabet()), dot_out);
    }
    if (fold->parsed()) {
      const CoreGraph g = CoreGraph::from_generators(2, parse_words(fold_gens));
      std::cout << "vertices " << g.vertex_count() << "\nbasepoint " << g.basepoint() << "\n";
      for (const Edge& e : g.edges()) std::cout << e.src << ' ' << kc::alphabet().symbol(e.gen) << ' ' << e.dst << "\n";
      return 0;
    }
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
