#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dualhash/dualhash.hpp"

using namespace dualhash;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_infeasible = 2;
constexpr int exit_verification = 3;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FamilyArgs {
  std::string family = "f1";
  std::optional<std::size_t> n, m, l, t;
};

void add_family_flags(CLI::App* cmd, FamilyArgs& a) {
  cmd->add_option("--family", a.family, "mt, f1, f2, f3, f4 or g")
      ->check(CLI::IsMember({"mt", "f1", "f2", "f3", "f4", "g"}));
  cmd->add_option("--n", a.n, "input bits");
  cmd->add_option("--m", a.m, "output bits");
  cmd->add_option("--l", a.l, "blocks (f1) or intermediate length (g)");
  cmd->add_option("--t", a.t, "source min-entropy in bits");
}

// Family for an n-bit input, plus how many zero bits the input needs.
FeasibleParams build_family(const FamilyArgs& a, std::size_t n) {
  if (!a.m) throw usage_error("--m is required");
  const std::size_t m = *a.m;
  if (a.family == "mt") return {make_mt(n, m), n, m, 0};
  if (a.family == "f1") {
    if (!a.l) return feasible_f1(n, m);
    FamilySpec s = make_f1(m, *a.l);
    if (s.n < n) throw infeasible_error("f1: l*m is smaller than the input length");
    return {s, n, m, s.n - n};
  }
  if (a.family == "f2") return feasible_f2(n, m);
  if (a.family == "g") {
    if (!a.l) throw usage_error("--l is required for g");
    return {make_g(n, *a.l, m), n, m, 0};
  }
  if (!a.t) throw usage_error("--t is required for " + a.family);
  FamilySpec s = a.family == "f3" ? make_f3(n, m, *a.t) : make_f4(n, m, *a.t);
  return {s, n, m, 0};
}

BitVector read_seed(const std::optional<std::string>& file, const std::optional<std::string>& hex, std::size_t d) {
  std::vector<std::uint8_t> bytes;
  if (file) {
    bytes = read_file(*file);
  } else if (hex) {
    if (hex->size() % 2) throw usage_error("--seed-hex needs an even number of digits");
    const BitVector v = BitVector::from_hex(*hex, hex->size() * 4);
    bytes = v.to_bytes();
  } else {
    throw usage_error("a seed is required (--seed-file or --seed-hex)");
  }
  if (bytes.size() * 8 < d)
    throw usage_error("seed too short: family needs " + std::to_string(d) + " bits, got " +
                      std::to_string(bytes.size() * 8));
  return BitVector::from_bytes(bytes, d);
}

std::string claim_text(const std::optional<double>& c) {
  if (!c) return "none";
  std::ostringstream os;
  os << *c;
  return os.str();
}

void print_eps(const char* label, double log2_eps) {
  std::printf("  %-34s %.6e  (log2 %.4f)\n", label, std::exp2(log2_eps), log2_eps);
}

// ---------------------------------------------------------------------------

struct AmplifyArgs {
  FamilyArgs fam;
  std::string in;
  std::optional<std::string> out, seed_file, seed_hex;
  std::optional<double> seed_minentropy;
};

int cmd_amplify(const AmplifyArgs& a) {
  const auto bytes = read_file(a.in);
  BitVector x;
  if (has_magic(bytes)) {
    x = parse_keyfile(bytes).payload;
  } else {
    x = BitVector::from_bytes(bytes, bytes.size() * 8);
  }
  if (a.fam.n) {
    if (*a.fam.n > x.size()) throw usage_error("--n exceeds the input length");
    x = x.slice(0, *a.fam.n);
  }
  const auto fp = build_family(a.fam, x.size());
  const FamilySpec& s = fp.spec;
  const BitVector seed = read_seed(a.seed_file, a.seed_hex, s.d);
  const BitVector y = evaluate(s, seed, x.resized(s.n));

  KeyFile out;
  out.header.n = y.size();
  out.header.m = s.m;
  out.header.d = s.d;
  out.header.padding = fp.padding;
  out.header.family = to_text(s);
  out.payload = y;
  if (a.out)
    write_file(*a.out, serialize_keyfile(out));
  else
    std::printf("%s\n", y.to_hex().c_str());

  const auto c = s.claims();
  std::printf("family      %s\n", to_text(s).c_str());
  std::printf("input bits  %zu (padding %zu)\n", fp.requested_n, fp.padding);
  std::printf("output bits %zu%s\n", s.m, s.m != fp.requested_m ? " (grown to the nearest feasible length)" : "");
  std::printf("seed bits   %zu\n", s.d);
  std::printf("delta       universal %s, dual %s\n", claim_text(c.universal).c_str(), claim_text(c.dual).c_str());
  if (a.fam.t) {
    const auto b = verify::theoretical_bound(s, static_cast<double>(*a.fam.t));
    std::printf("epsilon at t=%zu (uniform seed, %s route):\n", *a.fam.t, b.formula_id.c_str());
    print_eps("uniform seed", b.log2_epsilon);
    if (a.seed_minentropy) {
      const double d = static_cast<double>(s.d), h = *a.seed_minentropy;
      print_eps("seed H_min=h, direct 2^(d-h)",
                security::penalty_nonuniform_log2(b.log2_epsilon, d, h, security::PenaltyRoute::Direct));
      print_eps("seed H_min=h, collision 2^((d-h)/2)",
                security::penalty_nonuniform_log2(b.log2_epsilon, d, h, security::PenaltyRoute::Collision));
    }
  } else {
    std::printf("no --t given: security report omitted\n");
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string family = "f1";
  std::vector<std::size_t> n_list = {100000, 200000, 1000000, 2000000};
  int reps = 3;
  bool crossover = false;
};

FamilySpec bench_family(const std::string& fam, std::size_t n) {
  if (fam == "mt") return make_mt(n, n / 2);
  if (fam == "f2") return make_f2(find_na_at_least(std::max<std::size_t>(2, (n + 2) / 3)).k, 3);
  return make_f1(find_na_at_least(std::max<std::size_t>(2, (n + 1) / 2)).k, 2);
}

template <class F>
double best_seconds(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

int cmd_bench(const BenchArgs& a) {
  std::mt19937_64 gen(2024);
  std::printf("%-10s %-12s %-10s %-12s %-10s %-8s\n", "family", "n", "path", "ms/hash", "Mbit/s", "ratio");
  double prev = 0;
  for (std::size_t n : a.n_list) {
    const FamilySpec s = bench_family(a.family, n);
    const BitVector seed = BitVector::random(s.d, gen);
    const BitVector x = BitVector::random(s.n, gen);
    volatile std::size_t sink = 0;
    const double sec = best_seconds(a.reps, [&] { sink = sink + evaluate(s, seed, x).popcount(); });
    const std::size_t conv = s.kind == FamilyKind::MT ? s.n - 1 : s.k + 1;
    std::printf("%-10s %-12zu %-10s %-12.3f %-10.2f ", a.family.c_str(), s.n,
                conv < schoolbook_threshold ? "schoolbook" : "ntt", sec * 1e3, static_cast<double>(s.n) / sec / 1e6);
    if (prev > 0) std::printf("%-8.3f\n", sec / prev);
    else std::printf("%-8s\n", "-");
    prev = sec;
  }
  if (a.crossover) {
    std::printf("\ncyclic convolution crossover (us per call)\n%-8s %-12s %-12s\n", "L", "schoolbook", "ntt");
    for (std::size_t L = 16; L <= 4096; L *= 2) {
      const BitVector u = BitVector::random(L, gen), v = BitVector::random(L, gen);
      volatile std::size_t sink = 0;
      const int inner = 200;
      const double sb = best_seconds(a.reps, [&] {
        for (int i = 0; i < inner; ++i) sink = sink + cyclic_convolve_schoolbook(u, v).popcount();
      });
      const double nt = best_seconds(a.reps, [&] {
        for (int i = 0; i < inner; ++i) sink = sink + cyclic_convolve_ntt(u, v).popcount();
      });
      std::printf("%-8zu %-12.2f %-12.2f\n", L, sb / inner * 1e6, nt / inner * 1e6);
    }
    std::printf("library switches to the transform at L >= %zu\n", schoolbook_threshold);
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------

struct NaArgs {
  std::uint64_t lower = 2;
  std::uint64_t count = 1;
  std::uint64_t k = 0;
};

int cmd_na_find(const NaArgs& a) {
  std::uint64_t lower = a.lower;
  for (std::uint64_t i = 0; i < a.count; ++i) {
    const auto r = find_na_at_least(lower);
    std::printf("%llu\n", static_cast<unsigned long long>(r.k));
    lower = r.k + 1;
  }
  return exit_ok;
}

int cmd_na_check(const NaArgs& a) {
  std::printf("%s\n", is_in_na(a.k) ? "true" : "false");
  return exit_ok;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  FamilyArgs fam;
  std::optional<double> seed_minentropy;
  std::optional<std::string> csv;
};

int cmd_verify(const VerifyArgs& a) {
  if (!a.fam.n) throw usage_error("--n is required");
  const auto fp = build_family(a.fam, *a.fam.n);
  const FamilySpec& s = fp.spec;
  if (s.n > 16) throw usage_error("verify works on families with n <= 16 (padded n is " + std::to_string(s.n) + ")");
  std::ostringstream csv;
  csv << "check,parameter,measured,bound,ok\n";
  bool all_ok = true;

  const auto uniform = verify::SeedDistribution::uniform(s.d);
  const auto claims = s.claims();
  const auto du = verify::measure_delta_universal(s, uniform);
  const auto dd = verify::measure_delta_dual(s, uniform);
  std::printf("family %s\n", to_text(s).c_str());
  auto delta_line = [&](const char* name, const verify::DeltaMeasurement& meas, const std::optional<double>& claim) {
    const bool ok = !claim || meas.delta.value() <= *claim + 1e-12;
    all_ok = all_ok && ok;
    std::printf("%-12s measured %-10s (%.6f)  claim %-6s %s\n", name, meas.delta.str().c_str(), meas.delta.value(),
                claim_text(claim).c_str(), ok ? "ok" : "VIOLATED");
    csv << name << ",," << meas.delta.value() << "," << (claim ? *claim : NAN) << "," << ok << "\n";
  };
  delta_line("delta", du, claims.universal);
  delta_line("delta_dual", dd, claims.dual);

  std::printf("\n%-4s %-14s %-14s %-10s %s\n", "t", "measured", "bound", "route", "");
  for (std::size_t t = 1; t <= s.n; ++t) {
    const auto src = verify::flat_source(s.n, t, 1000 + t);
    const auto r = verify::empirical_leftover(s, uniform, src);
    const bool ok = r.measured <= r.bound.epsilon * (1 + 1e-12);
    all_ok = all_ok && ok;
    std::printf("%-4zu %-14.6g %-14.6g %-10s %s\n", t, r.measured, r.bound.epsilon, r.bound.formula_id.c_str(),
                ok ? "ok" : "VIOLATED");
    csv << "leftover," << t << "," << r.measured << "," << r.bound.epsilon << "," << ok << "\n";
  }

  if (a.seed_minentropy) {
    const auto h = static_cast<std::size_t>(std::floor(*a.seed_minentropy));
    const auto sd = verify::SeedDistribution::flat(s.d, h, 7);
    std::printf("\nseed H_min = %zu of d = %zu (collision route penalty 2^((d-h)/2))\n", h, s.d);
    for (std::size_t t = 1; t <= s.n; ++t) {
      const auto src = verify::flat_source(s.n, t, 1000 + t);
      const auto r = verify::empirical_leftover(s, sd, src);
      const bool ok = r.measured <= r.penalized_bound * (1 + 1e-12);
      all_ok = all_ok && ok;
      std::printf("%-4zu %-14.6g %-14.6g %s\n", t, r.measured, r.penalized_bound, ok ? "ok" : "VIOLATED");
      csv << "leftover_nonuniform," << t << "," << r.measured << "," << r.penalized_bound << "," << ok << "\n";
    }
  }
  if (a.csv) {
    std::ofstream f(*a.csv);
    f << csv.str();
  }
  std::printf("\n%s\n", all_ok ? "all checks passed" : "verification FAILED");
  return all_ok ? exit_ok : exit_verification;
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
  double n = 0, m = 0, t = 0;
  std::optional<double> l, eta, d, h;
  double delta = 1, delta_prime = 1;
  std::optional<std::string> csv;
};

int cmd_bounds(const BoundsArgs& a) {
  using namespace security;
  std::vector<std::pair<std::string, double>> rows;
  rows.emplace_back("universal, classical", bound_universal_classical_log2(a.delta, a.m, a.t));
  rows.emplace_back("dual, classical", bound_dual_classical_log2(a.delta, a.m, a.t));
  rows.emplace_back("universal, quantum", bound_universal_quantum_log2(a.delta, a.m, a.t,
                                                                       a.eta ? std::optional(std::log2(*a.eta)) : std::nullopt));
  rows.emplace_back("dual then dual", bound_dual_dual_concat_log2(a.delta, a.delta_prime, a.m, a.t));
  if (a.l) {
    rows.emplace_back("concatenated, classical", bound_concat_classical_log2(a.delta, a.delta_prime, a.m, *a.l, a.t));
    if (a.eta)
      rows.emplace_back("concatenated, quantum",
                        bound_concat_quantum_log2(a.delta, a.delta_prime, a.m, *a.l, a.t, std::log2(*a.eta)));
    if (a.m < *a.l && *a.l < a.n) {
      const auto g = g_bounds(a.n, *a.l, a.m, a.t, a.eta);
      rows.emplace_back("g_{n,l,m}, classical", g.log2_epsilon_c);
      rows.emplace_back("g_{n,l,m}, quantum", g.log2_epsilon_q);
    }
  }
  if (a.m < a.t && a.t < a.n) rows.emplace_back("f3 (l = t)", f3_bound_log2(a.n, a.m, a.t));
  if (a.m < a.t && (a.m + a.t) / 2 < a.n) rows.emplace_back("f4 (l = (t+m)/2)", f4_bound_log2(a.n, a.m, a.t));

  std::printf("n=%g m=%g t=%g delta=%g delta'=%g\n", a.n, a.m, a.t, a.delta, a.delta_prime);
  std::printf("%-28s %-14s %-12s\n", "bound", "epsilon", "log2");
  for (auto& [name, le] : rows) std::printf("%-28s %-14.6e %-12.4f\n", name.c_str(), std::exp2(le), le);

  const auto conv = dual_delta_conversion(a.delta, a.n, a.m);
  std::printf("\ndual of a delta-universal family: delta = %.6g%s\n", conv.value, conv.valid ? "" : " (invalid)");
  std::printf("seed lower bound (dual, delta):  %.4f bits\n", seed_lower_bound_dual(a.n, a.m, a.delta));

  std::ostringstream csv;
  csv << "bound,epsilon,log2_epsilon\n";
  for (auto& [name, le] : rows) csv << '"' << name << "\"," << std::exp2(le) << "," << le << "\n";

  if (a.d && a.h && *a.h < *a.d) {
    std::printf("\nnon-uniform seed (d=%g, H_min=%g):\n", *a.d, *a.h);
    for (auto& [name, le] : rows) {
      const double direct = penalty_nonuniform_log2(le, *a.d, *a.h, PenaltyRoute::Direct);
      const double coll = penalty_nonuniform_log2(le, *a.d, *a.h, PenaltyRoute::Collision);
      std::printf("%-28s direct %-14.6e collision %-14.6e\n", name.c_str(), std::exp2(direct), std::exp2(coll));
    }
  } else if (a.d && a.h && *a.h > *a.d) {
    throw usage_error("--seed-minentropy exceeds --d");
  }
  if (a.csv) {
    std::ofstream f(*a.csv);
    f << csv.str();
  }
  return exit_ok;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  double n = 1e6, alpha = 0.5, beta = 0.01, gamma = 1;
  std::optional<double> log2_eps;
  bool numeric = false;
  std::optional<std::string> csv;
};

int cmd_compare(const CompareArgs& a) {
  using namespace security;
  std::vector<ComparisonRow> rows;
  if (a.log2_eps) {
    rows = comparison_table_constant_epsilon(a.n, a.alpha, *a.log2_eps);
    std::printf("n=%g alpha=%g log2(eps)=%g (constant)\n", a.n, a.alpha, *a.log2_eps);
  } else {
    rows = comparison_table(RegimeParams{a.alpha, a.beta, a.gamma, a.n});
    std::printf("n=%g alpha=%g beta=%g gamma=%g\n", a.n, a.alpha, a.beta, a.gamma);
  }
  std::printf("%-10s %-28s %-28s %-32s\n", "method", "t (classical)", "t (quantum)", "h (seed bits)");
  std::ostringstream csv;
  csv << "method,t_classical,t_quantum,h\n";
  for (const auto& r : rows) {
    std::printf("%-10s %-28s %-28s %-32s\n", r.name.c_str(), r.t_classical.render(a.numeric).c_str(),
                r.t_quantum.render(a.numeric).c_str(), r.h.render(a.numeric).c_str());
    csv << r.name << ",\"" << r.t_classical.render(a.numeric) << "\",\"" << r.t_quantum.render(a.numeric) << "\",\""
        << r.h.render(a.numeric) << "\"\n";
  }
  if (a.csv) {
    std::ofstream f(*a.csv);
    f << csv.str();
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dual universal hashing for privacy amplification"};
  app.require_subcommand(1);

  AmplifyArgs amp;
  auto* c_amp = app.add_subcommand("amplify", "hash a key file with a supplied seed");
  add_family_flags(c_amp, amp.fam);
  c_amp->add_option("--in", amp.in, "input key (key file or raw bytes)")->required();
  c_amp->add_option("--out", amp.out, "output key file (hex on stdout if absent)");
  auto* sf = c_amp->add_option("--seed-file", amp.seed_file, "raw seed bytes");
  auto* sh = c_amp->add_option("--seed-hex", amp.seed_hex, "seed as hex");
  sf->excludes(sh);
  c_amp->add_option("--seed-minentropy", amp.seed_minentropy, "min-entropy h of the seed, for the penalized report");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "time hashing at several input lengths");
  c_bench->add_option("--family", bench.family)->check(CLI::IsMember({"mt", "f1", "f2"}));
  c_bench->add_option("--n", bench.n_list, "input lengths")->delimiter(',');
  c_bench->add_option("--reps", bench.reps)->check(CLI::PositiveNumber);
  c_bench->add_flag("--crossover", bench.crossover, "also time schoolbook vs transform convolution");

  NaArgs na;
  auto* c_na = app.add_subcommand("na", "fields with a circulant representation");
  c_na->require_subcommand(1);
  auto* c_find = c_na->add_subcommand("find", "smallest k >= lower");
  c_find->add_option("lower", na.lower)->required();
  c_find->add_option("--count", na.count, "print this many successive values");
  auto* c_check = c_na->add_subcommand("check", "membership test");
  c_check->add_option("k", na.k)->required();

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "exhaustive checks of a small family");
  add_family_flags(c_ver, ver.fam);
  c_ver->add_option("--seed-minentropy", ver.seed_minentropy);
  c_ver->add_option("--csv", ver.csv);

  BoundsArgs bnd;
  auto* c_bnd = app.add_subcommand("bounds", "evaluate the security bounds");
  c_bnd->add_option("--n", bnd.n)->required();
  c_bnd->add_option("--m", bnd.m)->required();
  c_bnd->add_option("--t", bnd.t)->required();
  c_bnd->add_option("--l", bnd.l);
  c_bnd->add_option("--eta", bnd.eta);
  c_bnd->add_option("--delta", bnd.delta);
  c_bnd->add_option("--delta-prime", bnd.delta_prime);
  c_bnd->add_option("--d", bnd.d, "seed bits");
  c_bnd->add_option("--seed-minentropy", bnd.h);
  c_bnd->add_option("--csv", bnd.csv);

  CompareArgs cmp;
  auto* c_cmp = app.add_subcommand("compare", "seed and entropy requirements of several extractors");
  c_cmp->add_option("--n", cmp.n);
  c_cmp->add_option("--alpha", cmp.alpha);
  c_cmp->add_option("--beta", cmp.beta);
  c_cmp->add_option("--gamma", cmp.gamma);
  c_cmp->add_option("--log2-eps", cmp.log2_eps, "constant epsilon instead of 2^(-beta n^gamma)");
  c_cmp->add_flag("--numeric", cmp.numeric, "drop asymptotic markers");
  c_cmp->add_option("--csv", cmp.csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*c_amp) return cmd_amplify(amp);
    if (*c_bench) return cmd_bench(bench);
    if (*c_find) return cmd_na_find(na);
    if (*c_check) return cmd_na_check(na);
    if (*c_ver) return cmd_verify(ver);
    if (*c_bnd) return cmd_bounds(bnd);
    if (*c_cmp) return cmd_compare(cmp);
  } catch (const infeasible_error& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return exit_infeasible;
  } catch (const field_unavailable_error& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return exit_infeasible;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_usage;
  }
  return exit_usage;
}
