#pragma once

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "rasl/bounds.hpp"
#include "rasl/flowgraph.hpp"
#include "rasl/harness.hpp"
#include "rasl/repair.hpp"

// The end-to-end verification suite: every check is equality-grade (exact
// field elements, exact rationals), so there are no tolerances to tune.
namespace rasl::selftest {

struct Outcome {
  bool pass = false;
  std::string detail;
};

inline CodeConfig gf13_config() {
  const Field& f = FieldRegistry::instance().get(13, 1);
  CodeConfig cfg;
  cfg.field = &f;
  cfg.good = build_monomial_good_poly(
      f, 3, {f.from_int(1), f.from_int(8), f.from_int(12), f.from_int(5)});
  cfg.m1 = 2;
  cfg.m2 = 2;
  cfg.r = 2;
  cfg.validate();
  return cfg;
}

inline CodeConfig canonical_tower_config(std::uint64_t seed = 777) {
  auto sk = instantiate_tower(2, {2, 3, 5, 7}, 3, seed);
  return make_tower_config(sk, 2, 2, 2);
}

inline CodeConfig gf64_multi_config() {
  const Field& f = FieldRegistry::instance().get(2, 6);
  std::vector<Element> values;
  for (std::uint64_t i = 1; i < 64 && values.size() < 12; ++i) {
    Element y = f.from_index(i);
    if (!f.is_zero(y) && nth_roots(f, y, 3).size() == 3) values.push_back(y);
  }
  CodeConfig cfg;
  cfg.field = &f;
  cfg.good = build_monomial_good_poly(f, 3, values);
  cfg.m1 = 4;
  cfg.m2 = 8;
  cfg.r = 2;
  cfg.common_subfield = &FieldRegistry::instance().subfield(f, 3);
  cfg.validate();
  return cfg;
}

inline CodeConfig gf256_multi_config() {
  const Field& f = FieldRegistry::instance().get(2, 8);
  std::vector<Element> values;
  for (std::uint64_t i = 1; i < 256 && values.size() < 36; ++i) {
    Element y = f.from_index(i);
    if (!f.is_zero(y) && nth_roots(f, y, 5).size() == 5) values.push_back(y);
  }
  CodeConfig cfg;
  cfg.field = &f;
  cfg.good = build_monomial_good_poly(f, 5, values);
  cfg.m1 = 4;
  cfg.m2 = 32;
  cfg.r = 3;
  cfg.common_subfield = &FieldRegistry::instance().subfield(f, 4);
  cfg.validate();
  return cfg;
}

inline std::vector<Element> random_message(const CodeConfig& cfg, Rng& rng) {
  std::vector<Element> a(cfg.k());
  for (auto& e : a) e = cfg.field->random(rng);
  return a;
}

// 1. Exhaustive minimum distance of the GF(13) instance equals both closed
//    forms exactly.
inline Outcome criterion_distance() {
  auto cfg = gf13_config();
  std::size_t d = min_distance_bruteforce(cfg);
  long long closed = (long long)((cfg.m2 + 1) * cfg.w() - cfg.r + 1);
  long long singleton = bounds::singleton_locality_bound((long long)cfg.n(), (long long)cfg.k(),
                                                         (long long)cfg.r, (long long)cfg.delta());
  std::ostringstream os;
  os << "brute-force d = " << d << ", closed form = " << closed << ", bound = " << singleton;
  return {d == 8 && closed == 8 && singleton == 8, os.str()};
}

// 2. Remainder decomposition equals independent polynomial reduction for
//    every class, 1000 random messages.
inline Outcome criterion_remainder() {
  auto cfg = gf13_config();
  const Field& f = *cfg.field;
  Rng rng(0x52101);
  for (int trial = 0; trial < 1000; ++trial) {
    auto a = random_message(cfg, rng);
    // rebuild F_a through interpolation + CRT, then compare reductions
    std::vector<std::pair<Poly<Field>, Poly<Field>>> congruences;
    for (std::size_t i = 0; i < cfg.m1; ++i) {
      std::vector<std::pair<Element, Element>> pts;
      for (std::size_t j = 0; j < cfg.r; ++j)
        pts.push_back({cfg.class_roots(i)[j], a[i * cfg.r + j]});
      congruences.push_back({cfg.class_modulus(i), poly_interpolate(f, pts)});
    }
    Poly<Field> F = crt_combine(f, congruences);
    RemainderTable table = remainder_decompose(cfg, F);
    for (std::size_t j = 0; j < cfg.r; ++j)
      if (!table.rows[j].is_zero() && *table.rows[j].degree() > cfg.m1 - 1)
        return {false, "coefficient row degree exceeds m1-1"};
    for (std::size_t i = 0; i < cfg.m(); ++i) {
      Poly<Field> direct = poly_mod(F, cfg.class_modulus(i));
      Poly<Field> from_table = table.class_poly(cfg.class_value(i));
      if (!(direct == from_table))
        return {false, "table row mismatch at class " + std::to_string(i)};
    }
  }
  return {true, "1000 random messages, all classes match the divmod oracle"};
}

// 3. Canonical tower: each rack repaired exactly for 100 random messages;
//    the w* = 2 racks meter exactly 3 F_q symbols = Dr/(D-K+1).
inline Outcome criterion_full_rack(const CodeConfig& cfg) {
  RepairEngine eng(cfg);
  Rng rng(0x52103);
  Rational target = bounds::cutset_locality(3, 2, 2);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_message(cfg, rng);
    auto [cw, table] = encode(cfg, a);
    for (std::size_t rack = 0; rack < cfg.m(); ++rack) {
      std::size_t wi = (*cfg.tower)[rack].w_i;
      std::size_t ws = eng.w_star(rack);
      auto variant =
          wi % ws == 0 ? RepairEngine::Variant::II : RepairEngine::Variant::I;
      auto res = eng.full_rack({cw}, rack, variant, 0x700 + rack);
      if (!(res.recovered_columns[0] == cw.cols[rack]))
        return {false, "column mismatch at rack " + std::to_string(rack)};
      if (ws == 2) {
        if (!(res.report.per_stripe_fq == Rational(3)) || !(res.report.bound == target) ||
            !res.report.optimal)
          return {false, "bandwidth not exactly 3 F_q symbols at rack " + std::to_string(rack)};
      } else {
        // w* = 1 rack: (1 + m1 - 1) r / 1 = 4 symbols from D = 2 helpers,
        // which meets D r / (D - K + 1) as well
        if (!(res.report.per_stripe_fq == Rational(4)) || !res.report.optimal)
          return {false, "w*=1 rack bandwidth not exactly 4 F_q symbols"};
      }
    }
  }
  return {true, "4 racks x 100 messages exact; w*=2 racks at 3 F_q symbols = Dr/(D-K+1)"};
}

// 4. Partial repair |E| = delta = 2 on a w* = 2 rack: exactly 3/2 F_q symbols
//    per stripe, equal to the partial cut-set bound.
inline Outcome criterion_partial(const CodeConfig& cfg) {
  RepairEngine eng(cfg);
  Rng rng(0x52104);
  Rational target = bounds::partial_cutset(3, 2, 2, 2);
  std::size_t rack = 1;  // degree-3 class: w* = 2, variant I
  for (int batch = 0; batch < 50; ++batch) {
    std::vector<ArrayCodeword> stripes;
    for (int s = 0; s < 2; ++s) {
      auto a = random_message(cfg, rng);
      auto [cw, table] = encode(cfg, a);
      stripes.push_back(cw);
    }
    auto res = eng.partial_single(stripes, rack, {0, 2}, RepairEngine::Variant::I, 0x900);
    for (int s = 0; s < 2; ++s)
      if (!(res.recovered_columns[(std::size_t)s] == stripes[(std::size_t)s].cols[rack]))
        return {false, "partial repair mismatch"};
    if (!(res.report.per_stripe_fq == Rational(3, 2)) || !(res.report.bound == target) ||
        !res.report.optimal)
      return {false, "bandwidth not exactly 3/2 F_q symbols (got " +
                         res.report.per_stripe_fq.str() + ")"};
  }
  return {true, "100 messages (50 two-stripe batches) exact at 3/2 F_q symbols = bound"};
}

// 5. Multi-rack partial repair at the scheme's per-helper counts.
inline Outcome criterion_multi() {
  auto cfg64 = gf64_multi_config();
  RepairEngine eng64(cfg64);
  Rng rng(0x52105);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_message(cfg64, rng);
    auto [cw, table] = encode(cfg64, a);
    ErasurePattern pat;
    pat.racks.push_back({(std::size_t)(trial % cfg64.m()), {0, 2}});
    auto res = eng64.multi_partial({cw}, pat);
    for (const auto& w : res.transcript.recovered)
      if (!(w.value == cw.cols[w.rack][w.position])) return {false, "GF(64) value mismatch"};
    if (!(res.report.per_helper_per_stripe_symbols == Rational(1)))
      return {false, "GF(64) per-helper count != 1 subfield element"};
    if (res.transcript.helpers.size() != 11) return {false, "GF(64) helper count != 11"};
  }
  auto cfg256 = gf256_multi_config();
  RepairEngine eng256(cfg256);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_message(cfg256, rng);
    auto [cw, table] = encode(cfg256, a);
    ErasurePattern pat;
    std::size_t r1 = (std::size_t)(trial % cfg256.m());
    std::size_t r2 = (r1 + 1 + (std::size_t)(trial % (cfg256.m() - 1))) % cfg256.m();
    if (r1 == r2) r2 = (r2 + 1) % cfg256.m();
    pat.racks.push_back({std::min(r1, r2), {0, 1, 2, 3}});
    pat.racks.push_back({std::max(r1, r2), {0, 1, 2, 3, 4}});
    auto res = eng256.multi_partial({cw}, pat);
    for (const auto& w : res.transcript.recovered)
      if (!(w.value == cw.cols[w.rack][w.position])) return {false, "GF(256) value mismatch"};
    if (!(res.report.per_helper_per_stripe_symbols == Rational(5)))
      return {false, "GF(256) per-helper count != 5 subfield elements"};
  }
  return {true, "GF(64) tau=1 at M=1 and GF(256) tau=2 at M=5, 100 seeds each, exact"};
}

// 6. Capacity formula vs the exact flow oracle.
inline Outcome criterion_capacity_oracle() {
  Rng rng(0x52106);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t N = 2 + rng.below(7);
    std::size_t K = 1 + rng.below(N - 1);
    std::size_t D = K + rng.below(N - K);
    long long L = 1 + (long long)rng.below(6);
    long long r = 1 + (long long)rng.below((std::uint64_t)L);
    std::vector<long long> s(N);
    for (auto& v : s) v = (long long)rng.below((std::uint64_t)L + 1);
    Rational beta((long long)rng.below(37), 1 + (long long)rng.below(12));
    auto c = bounds::capacity_c((long long)N, (long long)K, (long long)D, beta, s, r);
    auto g = flow::worst_case_graph(N, K, D, beta, s, r);
    g.audit();
    if (!(g.min_cut() == c)) return {false, "worst-case min-cut != capacity at trial " +
                                                std::to_string(trial)};
  }
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t N = 2 + rng.below(7);
    std::size_t K = 1 + rng.below(N - 1);
    std::size_t D = K + rng.below(N - K);
    long long L = 1 + (long long)rng.below(6);
    long long r = 1 + (long long)rng.below((std::uint64_t)L);
    std::vector<long long> s(N);
    for (auto& v : s) v = (long long)rng.below((std::uint64_t)L + 1);
    Rational beta((long long)rng.below(37), 1 + (long long)rng.below(12));
    auto c = bounds::capacity_c((long long)N, (long long)K, (long long)D, beta, s, r);
    auto g = flow::random_evolution(N, K, D, beta, s, r, rng.below(12), rng.next());
    if (g.min_cut() < c)
      return {false, "random evolution fell below capacity at trial " + std::to_string(trial)};
  }
  return {true, "500 worst-case equalities and 500 evolution lower bounds, exact"};
}

// 7. Threshold formula: exact beta_min inversion agrees with the piecewise
//    branches, plus the worked instance.
inline Outcome criterion_threshold() {
  {
    std::vector<long long> s{1, 1, 1, 1};
    auto bm = bounds::beta_min(4, 2, 3, 2, s);
    if (!bm || !(*bm == Rational(1, 2))) return {false, "worked instance beta_min != 1/2"};
    if (bounds::feasible(4, 2, 3, Rational(9, 20), s, 2))
      return {false, "beta = 9/20 should be infeasible"};
    auto rs = bounds::r_star(4, 2, 3, Rational(9, 20), s, 2);
    if (rs.branch != "t=1" || !rs.value || !(*rs.value == Rational(21, 10)))
      return {false, "r* branch/value mismatch at beta = 9/20 (branch " + rs.branch + ")"};
    auto top = bounds::r_star(4, 2, 3, Rational(1, 2), s, 2);
    if (!top.value || !(*top.value == Rational(2)))
      return {false, "r* at the threshold should equal r = 2"};
  }
  Rng rng(0x52107);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t N = 2 + rng.below(7);
    std::size_t K = 1 + rng.below(N - 1);
    std::size_t D = K + rng.below(N - K);
    long long L = 1 + (long long)rng.below(6);
    long long r = 1 + (long long)rng.below((std::uint64_t)L);
    std::vector<long long> s(N);
    for (auto& v : s) v = (long long)rng.below((std::uint64_t)L + 1);

    auto agree = [&](const Rational& beta) -> bool {
      bool feas = bounds::feasible((long long)N, (long long)K, (long long)D, beta, s, r);
      auto rs = bounds::r_star((long long)N, (long long)K, (long long)D, beta, s, r);
      bool formula_feas = rs.value.has_value() && *rs.value <= Rational(r);
      return feas == formula_feas;
    };

    auto bm = bounds::beta_min((long long)N, (long long)K, (long long)D, r, s);
    if (!bm) return {false, "beta_min missing with D >= K"};
    if (!agree(*bm)) return {false, "disagreement at beta_min, trial " + std::to_string(trial)};
    if (*bm > Rational(0)) {
      Rational eps = *bm / Rational(1024);
      if (bounds::feasible((long long)N, (long long)K, (long long)D, *bm - eps, s, r))
        return {false, "beta_min not minimal, trial " + std::to_string(trial)};
      if (!agree(*bm - eps)) return {false, "disagreement below beta_min"};
    }
    for (int probe = 0; probe < 5; ++probe) {
      Rational beta((long long)rng.below(25), 1 + (long long)rng.below(12));
      if (!agree(beta))
        return {false, "formula/feasibility disagreement, trial " + std::to_string(trial)};
    }
  }
  return {true, "100 random instances: bisection threshold and piecewise branches agree exactly"};
}

// 8. With s = 0 and r = L the machinery reproduces the plain cut-set bound.
inline Outcome criterion_reduction() {
  {
    auto expect = bounds::cutset_mds(4, 2, 4, 1);
    if (!(expect == Rational(16, 3))) return {false, "cutset_mds(4,2,4,1) != 16/3"};
    std::vector<long long> s(5, 0);
    auto bm = bounds::beta_min(5, 2, 4, 4, s);
    if (!bm || !(Rational(4) * *bm == expect)) return {false, "D*beta_min != 16/3"};
  }
  std::size_t points = 0;
  for (long long D = 2; D <= 8 && points < 50; ++D)
    for (long long K = 1; K <= D && points < 50; ++K)
      for (long long L = 1; L <= 3 && points < 50; ++L) {
        long long N = D + 1;
        std::vector<long long> s((std::size_t)N, 0);
        auto bm = bounds::beta_min(N, K, D, L, s);
        if (!bm) return {false, "beta_min missing on grid"};
        if (!(Rational(D) * *bm == bounds::cutset_mds(D, K, L, 1)))
          return {false, "grid point mismatch at D=" + std::to_string(D) +
                             " K=" + std::to_string(K) + " L=" + std::to_string(L)};
        auto c = bounds::capacity_c(N, K, D, *bm, s, L);
        if (!(c == Rational(K * L))) return {false, "capacity at threshold != K*L"};
        ++points;
      }
  return {true, "50 grid points reduce to D*L/(D-K+e), e.g. 16/3 at (4,2,4,1)"};
}

// 9. Deterministic benches with bound-consistent rows.
inline Outcome criterion_determinism() {
  auto sk = instantiate_tower(2, {2, 3, 5}, 3, 777);
  auto cfg = make_tower_config(sk, 1, 2, 2);
  auto rows1 = sim::bench(cfg, 3);
  auto rows2 = sim::bench(cfg, 3);
  auto csv1 = sim::rows_to_csv(rows1), csv2 = sim::rows_to_csv(rows2);
  if (csv1 != csv2) return {false, "tower bench CSV not byte-identical"};

  auto cfg64 = gf64_multi_config();
  auto rows64a = sim::bench(cfg64, 2);
  auto rows64b = sim::bench(cfg64, 2);
  if (sim::rows_to_csv(rows64a) != sim::rows_to_csv(rows64b))
    return {false, "multi bench CSV not byte-identical"};

  auto consistent = [&](const std::vector<sim::ExperimentRow>& rows,
                        const CodeConfig& c) -> bool {
    for (const auto& row : rows) {
      if (row.scheme == "local") {
        if (!(row.fq_total == Rational(0))) return false;
        continue;
      }
      if (row.optimal != (row.fq_per_stripe == row.bound)) return false;
      if (row.scheme == "full-I" || row.scheme == "full-II") {
        if (!(row.bound == bounds::cutset_locality((long long)row.helpers_count, (long long)c.m1,
                                                   (long long)c.r)))
          return false;
      }
    }
    return true;
  };
  if (!consistent(rows1, cfg) || !consistent(rows64a, cfg64))
    return {false, "row optimal flags inconsistent with bounds"};
  return {true, "two runs byte-identical on both configs; flags consistent with bounds"};
}

// Runs everything; prints one line per criterion.  The canonical tower is
// heavyweight, so it is built once and shared by criteria 3 and 4.
inline bool run_all(std::ostream& os) {
  using Clock = std::chrono::steady_clock;
  bool all = true;
  auto run = [&](int idx, const std::string& name, std::function<Outcome()> fn) {
    auto t0 = Clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    os << (out.pass ? "[PASS] " : "[FAIL] ") << "criterion " << idx << " (" << name << "): "
       << out.detail << "  [" << (int)(secs * 1000) << " ms]" << std::endl;
    all = all && out.pass;
  };

  run(1, "minimum distance", criterion_distance);
  run(2, "remainder decomposition", criterion_remainder);
  {
    CodeConfig canonical = canonical_tower_config();
    run(3, "full-rack repair optimality", [&] { return criterion_full_rack(canonical); });
    run(4, "partial single-rack repair", [&] { return criterion_partial(canonical); });
  }
  run(5, "multi-rack partial repair", criterion_multi);
  run(6, "capacity vs flow oracle", criterion_capacity_oracle);
  run(7, "threshold formula", criterion_threshold);
  run(8, "cut-set reduction", criterion_reduction);
  run(9, "bench determinism", criterion_determinism);
  return all;
}

}  // namespace rasl::selftest
