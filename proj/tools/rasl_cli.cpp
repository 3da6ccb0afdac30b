// Command-line front end: construct codes, drive the cluster simulator, query
// bounds, and run the verification campaigns.
//
// Exit codes: 0 success, 1 usage / input error, 2 verification failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "rasl/selftest.hpp"

using namespace rasl;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

Element parse_class_value(const Field& f, const json& v) {
  if (v.is_number_unsigned() || v.is_number_integer())
    return f.from_index(v.get<std::uint64_t>());
  return f.parse(v.get<std::string>());
}

CodeConfig construct_config(const json& spec) {
  std::string kind = spec.at("kind").get<std::string>();
  if (kind == "tower") {
    auto degrees = spec.at("degrees").get<std::vector<std::size_t>>();
    auto sk = instantiate_tower(spec.at("p").get<std::uint64_t>(), degrees,
                                spec.at("w").get<std::uint64_t>(),
                                spec.value("seed", (std::uint64_t)1));
    std::optional<std::size_t> common;
    if (spec.contains("common_subfield") && !spec.at("common_subfield").is_null())
      common = spec.at("common_subfield").get<std::size_t>();
    return make_tower_config(sk, spec.at("m1").get<std::size_t>(),
                             spec.at("m2").get<std::size_t>(), spec.at("r").get<std::size_t>(),
                             common);
  }
  if (kind != "monomial") throw std::runtime_error("unknown spec kind: " + kind);
  const Field& f = FieldRegistry::instance().get(spec.at("p").get<std::uint64_t>(),
                                                 spec.at("N").get<std::size_t>());
  std::uint64_t w = spec.at("w").get<std::uint64_t>();
  std::vector<Element> values;
  if (spec.contains("class_values")) {
    for (const auto& v : spec.at("class_values")) values.push_back(parse_class_value(f, v));
  } else {
    std::size_t want = spec.at("auto_classes").get<std::size_t>();
    if (!f.order().fits_u64())
      throw std::runtime_error("auto_classes needs a small field; list class_values instead");
    for (std::uint64_t i = 1; i < f.order().as_u64() && values.size() < want; ++i) {
      Element y = f.from_index(i);
      if (nth_roots(f, y, w).size() == w) values.push_back(y);
    }
    if (values.size() != want)
      throw std::runtime_error("auto_classes: not enough full classes in this field");
  }
  CodeConfig cfg;
  cfg.field = &f;
  cfg.good = build_monomial_good_poly(f, w, values);
  cfg.m1 = spec.at("m1").get<std::size_t>();
  cfg.m2 = spec.at("m2").get<std::size_t>();
  cfg.r = spec.at("r").get<std::size_t>();
  if (spec.contains("common_subfield") && !spec.at("common_subfield").is_null())
    cfg.common_subfield = &FieldRegistry::instance().subfield(
        f, spec.at("common_subfield").get<std::size_t>());
  cfg.validate();
  return cfg;
}

ErasurePattern parse_pattern(const std::string& text) {
  // "rack:pos,pos;rack:pos,..."
  ErasurePattern pat;
  std::istringstream racks(text);
  std::string part;
  while (std::getline(racks, part, ';')) {
    auto colon = part.find(':');
    if (colon == std::string::npos) throw std::runtime_error("bad pattern chunk: " + part);
    ErasurePattern::RackErasure re;
    re.rack = std::stoull(part.substr(0, colon));
    std::istringstream poss(part.substr(colon + 1));
    std::string p;
    while (std::getline(poss, p, ',')) re.positions.insert(std::stoull(p));
    pat.racks.push_back(std::move(re));
  }
  return pat;
}

std::map<std::string, std::string> parse_kv(const std::vector<std::string>& args) {
  std::map<std::string, std::string> out;
  for (const auto& a : args) {
    auto eq = a.find('=');
    if (eq == std::string::npos) throw std::runtime_error("expected key=value, got " + a);
    out[a.substr(0, eq)] = a.substr(eq + 1);
  }
  return out;
}

long long kv_int(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("missing argument " + key);
  return std::stoll(it->second);
}

std::vector<long long> kv_list(const std::map<std::string, std::string>& kv,
                               const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("missing argument " + key);
  std::vector<long long> out;
  std::istringstream is(it->second);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rack-aware locally repairable array codes: construction, repair, bounds"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "seed for every randomized search");

  // construct
  auto* c_construct = app.add_subcommand("construct", "build a code configuration from a JSON spec");
  std::string spec_path, out_path = "-";
  c_construct->add_option("--spec", spec_path, "spec JSON file")->required();
  c_construct->add_option("--out", out_path, "output path (default stdout)");

  // encode
  auto* c_encode = app.add_subcommand("encode", "encode a byte stream into a cluster");
  std::string config_path, in_path, cluster_out = "-";
  bool no_shadow = false;
  c_encode->add_option("--config", config_path, "configuration JSON")->required();
  c_encode->add_option("--in", in_path, "input data file")->required();
  c_encode->add_option("--out", cluster_out, "cluster JSON output");
  c_encode->add_flag("--no-shadow", no_shadow, "drop the verification shadow copy");

  // inject
  auto* c_inject = app.add_subcommand("inject", "mark cells erased");
  std::string cluster_path, pattern_text, inject_out = "-";
  long long rack_opt = -1;
  std::string positions_text;
  c_inject->add_option("--cluster", cluster_path, "cluster JSON")->required();
  c_inject->add_option("--rack", rack_opt, "erase a whole rack");
  c_inject->add_option("--positions", positions_text, "comma list of positions (with --rack)");
  c_inject->add_option("--pattern", pattern_text, "multi-rack pattern rack:p,p;rack:p,...");
  c_inject->add_option("--out", inject_out, "cluster JSON output");

  // repair
  auto* c_repair = app.add_subcommand("repair", "repair everything currently erased");
  std::string repair_cluster, repair_out = "-", rows_out, policy_text = "auto",
              format = "csv";
  c_repair->add_option("--cluster", repair_cluster, "cluster JSON")->required();
  c_repair->add_option("--out", repair_out, "cluster JSON output");
  c_repair->add_option("--rows", rows_out, "experiment rows output path");
  c_repair->add_option("--policy", policy_text,
                       "auto|full-I|full-II|partial-single|multi-partial|naive-grs");
  c_repair->add_option("--format", format, "rows format: csv|json");

  // bench
  auto* c_bench = app.add_subcommand("bench", "pattern x seed sweep to CSV");
  std::string bench_config, bench_out = "-";
  std::size_t bench_seeds = 3, bench_stripes = 1;
  bool bench_timings = false;
  std::string bench_format = "csv";
  c_bench->add_option("--config", bench_config, "configuration JSON")->required();
  c_bench->add_option("--seeds", bench_seeds, "seeds per pattern");
  c_bench->add_option("--stripes", bench_stripes, "stripes per cluster");
  c_bench->add_option("--out", bench_out, "output path");
  c_bench->add_option("--format", bench_format, "csv|json");
  c_bench->add_flag("--timings", bench_timings, "include wall-clock column (non-reproducible)");

  // bounds
  auto* c_bounds = app.add_subcommand("bounds", "evaluate a closed-form bound");
  bool b_singleton = false, b_mds = false, b_locality = false, b_partial = false,
       b_capacity = false, b_feasible = false, b_rstar = false, b_betamin = false;
  std::vector<std::string> bound_args;
  c_bounds->add_flag("--singleton", b_singleton, "n,k,r,delta");
  c_bounds->add_flag("--cutset-mds", b_mds, "D,K,L,e");
  c_bounds->add_flag("--cutset-locality", b_locality, "D,K,r");
  c_bounds->add_flag("--partial-cutset", b_partial, "D,K,e,delta");
  c_bounds->add_flag("--capacity", b_capacity, "N,K,D,beta,r,s");
  c_bounds->add_flag("--feasible", b_feasible, "N,K,D,beta,r,s");
  c_bounds->add_flag("--r-star", b_rstar, "N,K,D,beta,r,s");
  c_bounds->add_flag("--beta-min", b_betamin, "N,K,D,r,s");
  c_bounds->add_option("args", bound_args, "key=value arguments (s as s=1,2,3; beta as beta=1/2)");

  // flow-verify
  auto* c_flow = app.add_subcommand("flow-verify", "formula vs min-cut campaign");
  std::size_t trials = 500, max_n = 8;
  c_flow->add_option("--trials", trials, "number of random instances");
  c_flow->add_option("--max-n", max_n, "maximum number of storage vertices");

  // selftest
  auto* c_selftest = app.add_subcommand("selftest", "run the full acceptance suite");

  // export-dot (flow graph inspection)
  auto* c_dot = app.add_subcommand("flow-dot", "emit a worst-case flow graph as DOT");
  std::vector<std::string> dot_args;
  std::string dot_out = "-";
  c_dot->add_option("args", dot_args, "N= K= D= beta= r= s=");
  c_dot->add_option("--out", dot_out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_construct) {
      auto cfg = construct_config(read_json(spec_path));
      write_text(out_path, config_to_json(cfg).dump(2) + "\n");
    } else if (*c_encode) {
      auto cfg = config_from_json(read_json(config_path));
      auto st = sim::ClusterState::encode_bytes(cfg, read_bytes(in_path), !no_shadow);
      write_text(cluster_out, st.to_json().dump() + "\n");
    } else if (*c_inject) {
      auto cluster_json = read_json(cluster_path);
      auto cfg = config_from_json(cluster_json.at("config"));
      auto st = sim::ClusterState::from_json(cfg, cluster_json);
      if (!pattern_text.empty()) {
        st.inject_pattern(parse_pattern(pattern_text));
      } else if (rack_opt >= 0) {
        if (positions_text.empty()) {
          st.inject_rack((std::size_t)rack_opt);
        } else {
          std::set<std::size_t> pos;
          std::istringstream is(positions_text);
          std::string tok;
          while (std::getline(is, tok, ',')) pos.insert(std::stoull(tok));
          st.inject_positions((std::size_t)rack_opt, pos);
        }
      } else {
        std::cerr << "inject: need --rack or --pattern\n";
        return 1;
      }
      write_text(inject_out, st.to_json().dump() + "\n");
    } else if (*c_repair) {
      auto cluster_json = read_json(repair_cluster);
      auto cfg = config_from_json(cluster_json.at("config"));
      auto st = sim::ClusterState::from_json(cfg, cluster_json);
      sim::RepairPolicy policy = sim::RepairPolicy::Auto;
      if (policy_text == "full-I") policy = sim::RepairPolicy::ForceFullI;
      else if (policy_text == "full-II") policy = sim::RepairPolicy::ForceFullII;
      else if (policy_text == "partial-single") policy = sim::RepairPolicy::ForcePartialSingle;
      else if (policy_text == "multi-partial") policy = sim::RepairPolicy::ForceMultiPartial;
      else if (policy_text == "naive-grs") policy = sim::RepairPolicy::ForceNaiveGrs;
      else if (policy_text != "auto") {
        std::cerr << "repair: unknown policy " << policy_text << "\n";
        return 1;
      }
      auto rows = st.run_repair(policy, seed);
      write_text(repair_out, st.to_json().dump() + "\n");
      if (!rows_out.empty()) {
        if (format == "json") {
          json jr = json::array();
          for (const auto& row : rows) jr.push_back(row.csv_line(false));
          write_text(rows_out, jr.dump(2) + "\n");
        } else {
          write_text(rows_out, sim::rows_to_csv(rows));
        }
      }
    } else if (*c_bench) {
      auto cfg = config_from_json(read_json(bench_config));
      auto rows = sim::bench(cfg, bench_seeds, bench_stripes);
      if (bench_format == "json") {
        json jr = json::array();
        for (const auto& row : rows) jr.push_back(row.csv_line(bench_timings));
        write_text(bench_out, jr.dump(2) + "\n");
      } else {
        write_text(bench_out, sim::rows_to_csv(rows, bench_timings));
      }
    } else if (*c_bounds) {
      auto kv = parse_kv(bound_args);
      json out;
      if (b_singleton) {
        out = {{"query", "singleton"},
               {"value", bounds::singleton_locality_bound(kv_int(kv, "n"), kv_int(kv, "k"),
                                                          kv_int(kv, "r"), kv_int(kv, "delta"))}};
      } else if (b_mds) {
        out = {{"query", "cutset-mds"},
               {"value", bounds::cutset_mds(kv_int(kv, "D"), kv_int(kv, "K"), kv_int(kv, "L"),
                                            kv_int(kv, "e"))
                             .str()}};
      } else if (b_locality) {
        out = {{"query", "cutset-locality"},
               {"value",
                bounds::cutset_locality(kv_int(kv, "D"), kv_int(kv, "K"), kv_int(kv, "r")).str()}};
      } else if (b_partial) {
        out = {{"query", "partial-cutset"},
               {"value", bounds::partial_cutset(kv_int(kv, "D"), kv_int(kv, "K"), kv_int(kv, "e"),
                                                kv_int(kv, "delta"))
                             .str()}};
      } else if (b_capacity || b_feasible || b_rstar) {
        Rational beta = Rational::parse(kv.at("beta"));
        auto s = kv_list(kv, "s");
        long long N = kv_int(kv, "N"), K = kv_int(kv, "K"), D = kv_int(kv, "D"),
                  r = kv_int(kv, "r");
        if (b_capacity) {
          out = {{"query", "capacity"}, {"value", bounds::capacity_c(N, K, D, beta, s, r).str()}};
        } else if (b_feasible) {
          out = {{"query", "feasible"}, {"value", bounds::feasible(N, K, D, beta, s, r)}};
        } else {
          auto rs = bounds::r_star(N, K, D, beta, s, r);
          out = {{"query", "r-star"},
                 {"value", rs.value ? json(rs.value->str()) : json(nullptr)},
                 {"branch", rs.branch}};
        }
      } else if (b_betamin) {
        auto s = kv_list(kv, "s");
        auto bm = bounds::beta_min(kv_int(kv, "N"), kv_int(kv, "K"), kv_int(kv, "D"),
                                   kv_int(kv, "r"), s);
        out = {{"query", "beta-min"}, {"value", bm ? json(bm->str()) : json(nullptr)}};
      } else {
        std::cerr << "bounds: pick one of --singleton --cutset-mds --cutset-locality "
                     "--partial-cutset --capacity --feasible --r-star --beta-min\n";
        return 1;
      }
      std::cout << out.dump() << "\n";
    } else if (*c_flow) {
      Rng rng(seed);
      std::size_t exact = 0, above = 0;
      for (std::size_t t = 0; t < trials; ++t) {
        std::size_t N = 2 + rng.below(max_n - 1);
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
        if (g.min_cut() == c) ++exact;
        auto ge = flow::random_evolution(N, K, D, beta, s, r, rng.below(12), rng.next());
        if (ge.min_cut() >= c) ++above;
      }
      std::cout << exact << "/" << trials << " exact matches\n";
      std::cout << above << "/" << trials << " evolutions at or above the formula\n";
      if (exact != trials || above != trials) return 2;
    } else if (*c_selftest) {
      return selftest::run_all(std::cout) ? 0 : 2;
    } else if (*c_dot) {
      auto kv = parse_kv(dot_args);
      auto s = kv_list(kv, "s");
      auto g = flow::worst_case_graph((std::size_t)kv_int(kv, "N"), (std::size_t)kv_int(kv, "K"),
                                      (std::size_t)kv_int(kv, "D"), Rational::parse(kv.at("beta")),
                                      s, kv_int(kv, "r"));
      write_text(dot_out, g.to_dot());
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
