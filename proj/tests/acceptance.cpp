// Acceptance run: one PASS/FAIL line per criterion. With an argument, runs
// only that criterion number; exit status is nonzero if any selected one fails.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kerchain/certify.hpp"
#include "kerchain/construction.hpp"
#include "kerchain/kernel_chain.hpp"
#include "kerchain/suites.hpp"
#include "oracle_checks.hpp"

namespace {

using namespace kerchain;
namespace kc = kerchain::construction;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s << " s";
  return os.str();
}

Outcome within(Outcome o, const Timer& timer, double limit) {
  const double s = timer.seconds();
  if (limit > 0 && s >= limit) o.pass = false;
  o.detail += (o.detail.empty() ? "" : "; ") + fmt_seconds(s) + (limit > 0 ? " (limit " + fmt_seconds(limit) + ")" : "");
  return o;
}

Outcome from_report(const Report& r) {
  Outcome o{r.ok(), std::to_string(r.checks.size() - r.failures()) + "/" + std::to_string(r.checks.size()) + " checks"};
  for (const Check& c : r.checks)
    if (!c.passed) {
      o.detail += ", first failure " + c.name + ": " + c.witness;
      break;
    }
  return o;
}

Outcome c1_kernel_chain() {
  Timer timer;
  Outcome o{true, ""};
  for (std::size_t n = 1; n <= 10 && o.pass; ++n) {
    try {
      const DoubleElement w = kernel_witness(n);
      const bool dies = Double::is_trivial(iterate_phi(n, w));
      const bool survives = !Double::is_trivial(iterate_phi(n - 1, w));
      if (!dies || !survives) o = {false, "n=" + std::to_string(n) + " " + format_element(w)};
    } catch (const VerificationFailure& e) {
      o = {false, e.what()};
    }
  }
  if (o.pass) o.detail = "n=1..10";
  return within(o, timer, 10.0);
}

Outcome c2_strict_increase() {
  Timer timer;
  return within(from_report(kc::verify_strict_increase(10)), timer, 0);
}

Outcome c3_phi_invariance() {
  Timer timer;
  return within(from_report(kc::verify_phi_invariance(16)), timer, 0);
}

Outcome c4_h_in_hr() {
  Timer timer;
  return within(from_report(kc::verify_h_in_hr(12, 6)), timer, 5.0);
}

Outcome c5_ball_agreement() {
  Timer timer;
  const kc::BallAgreement ba = kc::verify_ball_agreement(7);
  Outcome o = from_report(ba.report);
  if (ba.words_checked != 4372) o = {false, std::to_string(ba.words_checked) + " words, expected 4372"};
  std::string radii;
  for (std::size_t len = 1; len < ba.minimal_radius.size(); ++len)
    radii += (radii.empty() ? "" : ",") + std::to_string(ba.minimal_radius[len]);
  o.detail += ", " + std::to_string(ba.words_checked) + " words, minimal radius r(|w|) for |w|=1..7: " + radii;
  return within(o, timer, 30.0);
}

Outcome c6_cross_construction() {
  Timer timer;
  Outcome o = from_report(kc::verify_cross_construction(6));
  const CoreGraph g = kc::hr_core(3);
  if (g.vertex_count() != 15 || g.edge_count() != 19) o.pass = false;
  o.detail += ", r=3 core has " + std::to_string(g.vertex_count()) + " vertices and " +
              std::to_string(g.edge_count()) + " edges";
  return within(o, timer, 0);
}

Outcome c7_ball_isomorphism() {
  Timer timer;
  Outcome o{true, ""};
  std::string holds, least;
  for (std::size_t n = 0; n <= 6; ++n) {
    const bool ok = kc::ball_claim_holds(n);
    o.pass = o.pass && ok;
    holds += std::string(holds.empty() ? "" : ",") + (ok ? "T" : "F");
    least += (least.empty() ? "" : ",") + std::to_string(kc::minimal_ball_index(n, 14));
  }
  o.detail = "n=0..6 isomorphic: " + holds + "; least r with matching radius-n balls: " + least;
  return within(o, timer, 0);
}

Outcome c8_hall() {
  Timer timer;
  return within(from_report(verify_hall_random(0, 200)), timer, 20.0);
}

Outcome c9_certify() {
  Timer timer;
  Outcome o{true, ""};
  auto round_trip = [&](const DoubleElement& w) {
    const bool ok = check(certify(w, 8)) && check(certificate_from_json(to_json(certify(w, 8))));
    if (!ok && o.pass) o = {false, "failed for " + format_element(w)};
  };
  for (std::size_t n = 1; n <= 6; ++n) round_trip(kernel_witness(n));
  Rng rng(0);
  std::uniform_int_distribution<int> n_dist(1, 4), side_dist(0, 1);
  std::size_t random_done = 0;
  while (random_done < 50) {
    std::vector<Syllable> raw;
    Side side = side_dist(rng) ? Side::left : Side::right;
    for (int i = n_dist(rng); i > 0; --i) {
      raw.push_back({side, random_reduced_word(rng, 2, 1, 6)});
      side = flip(side);
    }
    const DoubleElement w = h_double().normalize(raw);
    if (Double::is_trivial(w)) continue;
    round_trip(w);
    ++random_done;
  }
  bool identity_rejected = false;
  try {
    certify(DoubleElement{}, 8);
  } catch (const InvalidInput&) {
    identity_rejected = true;
  }
  if (!identity_rejected) o = {false, "certify of the identity did not error"};
  if (o.pass) o.detail = "6 kernel witnesses, 50 random elements, identity rejected";
  return within(o, timer, 0);
}

Outcome c10_oracle() {
  Timer timer;
  Rng rng(0);
  Outcome o{true, ""};
  std::size_t most_factors = 0, over_eight = 0, widest_cap = 0;
  for (std::size_t done = 0; done < 200 && o.pass; ++done) {
    const HallInstance inst = random_hall_instance(rng);
    const oracle::Agreement a = oracle::graph_agrees_with_products(rng, inst.gens);
    if (!a.ok) {
      std::string gens;
      for (const FreeWord& w : inst.gens) gens += " [" + kc::alphabet().format(w) + "]";
      o = {false, "instance " + std::to_string(done) + " generators" + gens + ": " + a.witness};
    }
    most_factors = std::max(most_factors, a.max_factors_used);
    if (a.max_factors_used > 8) ++over_eight;
    widest_cap = std::max(widest_cap, a.partial_length_used);
  }
  if (o.pass)
    o.detail = "200 instances, words of length <= " + std::to_string(oracle::kWordLength) +
               ", partial products of length <= " + std::to_string(widest_cap) +
               "; most factors needed " + std::to_string(most_factors) + ", instances needing more than 8: " +
               std::to_string(over_eight);
  return within(o, timer, 0);
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"kernel chain", c1_kernel_chain},         {"strict increase", c2_strict_increase},
      {"phi invariance", c3_phi_invariance},     {"H in H_r", c4_h_in_hr},
      {"ball agreement", c5_ball_agreement},     {"cross construction", c6_cross_construction},
      {"ball isomorphism", c7_ball_isomorphism}, {"hall completion", c8_hall},
      {"certificate round trip", c9_certify},    {"oracle equivalence", c10_oracle},
  };
  std::size_t only = 0;
  if (argc > 1) only = std::strtoul(argv[1], nullptr, 10);
  if (argc > 1 && (only < 1 || only > criteria.size())) {
    std::cerr << "usage: acceptance [1.." << criteria.size() << "]\n";
    return 2;
  }
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && only != i + 1) continue;
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].name << "  " << o.detail
              << std::endl;
  }
  return all ? 0 : 1;
}
