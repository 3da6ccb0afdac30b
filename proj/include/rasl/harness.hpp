#pragma once

#include <chrono>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "rasl/repair.hpp"
#include "rasl/serialize.hpp"

namespace rasl::sim {

// Fixed-width big-endian byte chunks per symbol; the final stripe is
// zero-padded and the logical byte length recorded, so read-back is
// bit-exact.
inline std::size_t bytes_per_symbol(const Field& f) {
  std::size_t bits = f.characteristic() == 2 ? f.degree() : f.order_minus_one().bit_length();
  return (bits + 7) / 8;
}

inline Element element_from_bytes(const Field& f, const std::uint8_t* data, std::size_t len) {
  if (f.characteristic() == 2) {
    Element e = f.zero();
    for (std::size_t bit = 0; bit < 8 * len; ++bit) {
      std::size_t byte = len - 1 - bit / 8;
      if ((data[byte] >> (bit % 8)) & 1) {
        if (bit >= f.degree())
          throw std::invalid_argument("element_from_bytes: value exceeds field capacity");
        e.w[bit / 64] |= 1ULL << (bit % 64);
      }
    }
    return e;
  }
  BigUint v(0);
  for (std::size_t i = 0; i < len; ++i) {
    v.mul_small(256);
    v.add_small(data[i]);
  }
  std::vector<std::uint64_t> digits(f.degree(), 0);
  for (std::size_t i = 0; i < f.degree(); ++i) digits[i] = v.divmod_small(f.characteristic());
  if (!v.is_zero()) throw std::invalid_argument("element_from_bytes: value exceeds field capacity");
  return f.from_coords(digits);
}

inline void element_to_bytes(const Field& f, const Element& e, std::uint8_t* out, std::size_t len) {
  std::fill(out, out + len, 0);
  if (f.characteristic() == 2) {
    for (std::size_t bit = 0; bit < f.degree(); ++bit)
      if ((e.w[bit / 64] >> (bit % 64)) & 1) out[len - 1 - bit / 8] |= (std::uint8_t)(1u << (bit % 8));
    return;
  }
  BigUint v(0);
  auto c = f.coords(e);
  for (std::size_t i = f.degree(); i-- > 0;) {
    v.mul_small(f.characteristic());
    v.add_small(c[i]);
  }
  for (std::size_t i = len; i-- > 0;) out[i] = (std::uint8_t)v.divmod_small(256);
  if (!v.is_zero()) throw std::logic_error("element_to_bytes: chunk too small");
}

struct ExperimentRow {
  std::string scheme;
  std::size_t tau = 0;
  std::string erasures;  // "rack:count" joined with ';'
  std::size_t helpers_count = 0;
  std::string helpers;   // indices joined with ';'
  std::size_t stripes = 1;
  std::size_t subfield_symbols = 0;  // raw subfield elements over the whole event
  Rational fq_total{0};
  Rational fq_per_stripe{0};
  Rational bound{0};
  bool optimal = false;
  double wall_ms = 0.0;

  static std::string csv_header(bool timings) {
    std::string h =
        "scheme,tau,erasures,D,helpers,stripes,subfield_symbols,fq_total,fq_per_stripe,bound,"
        "optimal";
    if (timings) h += ",wall_ms";
    return h;
  }

  std::string csv_line(bool timings) const {
    std::ostringstream os;
    os << scheme << ',' << tau << ',' << erasures << ',' << helpers_count << ',' << helpers << ','
       << stripes << ',' << subfield_symbols << ',' << fq_total.str() << ','
       << fq_per_stripe.str() << ',' << bound.str() << ',' << (optimal ? "true" : "false");
    if (timings) os << ',' << wall_ms;
    return os.str();
  }
};

enum class RepairPolicy {
  Auto,
  ForceFullI,
  ForceFullII,
  ForcePartialSingle,
  ForceMultiPartial,
  ForceNaiveGrs
};

inline const char* policy_name(RepairPolicy p) {
  switch (p) {
    case RepairPolicy::Auto: return "auto";
    case RepairPolicy::ForceFullI: return "full-I";
    case RepairPolicy::ForceFullII: return "full-II";
    case RepairPolicy::ForcePartialSingle: return "partial-single";
    case RepairPolicy::ForceMultiPartial: return "multi-partial";
    case RepairPolicy::ForceNaiveGrs: return "naive-grs";
  }
  return "?";
}

// A cluster holding one erasure-coded object: stripes of L x m cells, cell
// status, an event log, and cumulative cross-rack traffic.  The shadow copy
// is verification-only instrumentation - the repair path never reads it and
// it can be disabled entirely.
class ClusterState {
 public:
  // A shared engine keeps the per-configuration caches (extension fields,
  // multiplier sets) warm across many clusters; omitted, the cluster owns one.
  ClusterState(const CodeConfig& cfg, bool keep_shadow = true,
               std::shared_ptr<RepairEngine> engine = nullptr)
      : cfg_(&cfg), engine_(std::move(engine)), keep_shadow_(keep_shadow) {
    if (!engine_) engine_ = std::make_shared<RepairEngine>(cfg);
    erased_.assign(cfg.m(), std::vector<bool>(cfg.L(), false));
  }

  static ClusterState encode_bytes(const CodeConfig& cfg, const std::vector<std::uint8_t>& data,
                                   bool keep_shadow = true,
                                   std::shared_ptr<RepairEngine> engine = nullptr) {
    ClusterState st(cfg, keep_shadow, std::move(engine));
    const Field& f = *cfg.field;
    const std::size_t chunk = bytes_per_symbol(f);
    if (data.size() % chunk != 0)
      throw std::invalid_argument("cluster_encode: data length must be a multiple of " +
                                  std::to_string(chunk) + " bytes per symbol");
    st.logical_bytes_ = data.size();
    std::vector<Element> symbols;
    for (std::size_t off = 0; off < data.size(); off += chunk)
      symbols.push_back(element_from_bytes(f, data.data() + off, chunk));
    while (symbols.size() % cfg.k() != 0) symbols.push_back(f.zero());
    for (std::size_t off = 0; off < symbols.size(); off += cfg.k()) {
      std::vector<Element> msg(symbols.begin() + (std::ptrdiff_t)off,
                               symbols.begin() + (std::ptrdiff_t)(off + cfg.k()));
      auto [cw, table] = encode(cfg, msg);
      st.stripes_.push_back(cw);
      if (keep_shadow) st.shadow_.push_back(st.stripes_.back());
    }
    st.log_.push_back("encode bytes=" + std::to_string(data.size()) +
                      " stripes=" + std::to_string(st.stripes_.size()));
    return st;
  }

  const CodeConfig& config() const { return *cfg_; }
  std::size_t stripe_count() const { return stripes_.size(); }
  const std::vector<ArrayCodeword>& stripes() const { return stripes_; }
  const Rational& traffic() const { return traffic_; }
  const std::vector<std::string>& log() const { return log_; }
  std::size_t logical_bytes() const { return logical_bytes_; }
  bool cell_erased(std::size_t rack, std::size_t row) const { return erased_[rack][row]; }

  std::vector<std::uint8_t> read_back() const {
    for (std::size_t rack = 0; rack < cfg_->m(); ++rack)
      for (std::size_t row = 0; row < cfg_->L(); ++row)
        if (erased_[rack][row])
          throw std::runtime_error("read_back: cluster has outstanding erasures");
    const Field& f = *cfg_->field;
    const std::size_t chunk = bytes_per_symbol(f);
    std::vector<std::uint8_t> out;
    for (const auto& cw : stripes_) {
      // stripe message = information classes read in order
      for (std::size_t i = 0; i < cfg_->m1; ++i)
        for (std::size_t j = 0; j < cfg_->r; ++j) {
          std::vector<std::uint8_t> buf(chunk);
          element_to_bytes(f, cw.cols[i][j], buf.data(), chunk);
          out.insert(out.end(), buf.begin(), buf.end());
        }
    }
    out.resize(logical_bytes_);
    return out;
  }

  void inject_rack(std::size_t rack) {
    std::set<std::size_t> all;
    for (std::size_t row = 0; row < cfg_->L(); ++row) all.insert(row);
    inject_positions(rack, all);
  }

  void inject_positions(std::size_t rack, const std::set<std::size_t>& positions) {
    if (rack >= cfg_->m()) throw std::invalid_argument("inject: bad rack index");
    for (auto p : positions) {
      if (p >= cfg_->L()) throw std::invalid_argument("inject: bad position");
      if (erased_[rack][p]) throw std::invalid_argument("inject: cell already erased");
    }
    for (auto p : positions) {
      erased_[rack][p] = true;
      for (auto& cw : stripes_) cw.cols[rack][p] = cfg_->field->zero();
    }
    std::ostringstream os;
    os << "inject rack=" << rack << " positions=";
    for (auto p : positions) os << p << ' ';
    log_.push_back(os.str());
  }

  void inject_pattern(const ErasurePattern& pattern) {
    for (const auto& re : pattern.racks) inject_positions(re.rack, re.positions);
  }

  // Repair everything currently erased.  Local repair is free and always runs
  // first; what remains is dispatched to the cross-rack schemes (or rejected
  // when no scheme applies).
  std::vector<ExperimentRow> run_repair(RepairPolicy policy = RepairPolicy::Auto,
                                        std::uint64_t seed = 0) {
    std::vector<ExperimentRow> rows;
    std::vector<std::size_t> local_racks, cross_racks;
    for (std::size_t rack = 0; rack < cfg_->m(); ++rack) {
      std::size_t cnt = erased_count(rack);
      if (cnt == 0) continue;
      if (cnt <= cfg_->delta() - 1) local_racks.push_back(rack);
      else cross_racks.push_back(rack);
    }

    for (auto rack : local_racks) rows.push_back(repair_local(rack));

    if (cross_racks.empty()) return rows;

    if (policy == RepairPolicy::ForceNaiveGrs) {
      ErasurePattern pat;
      for (auto rack : cross_racks) pat.racks.push_back({rack, erased_set(rack)});
      NaiveGrsPlugin naive;
      auto t0 = std::chrono::steady_clock::now();
      auto res = engine_->via_plugin(stripes_, pat, naive);
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
      absorb(res, cross_racks);
      rows.push_back(make_row(res, cross_racks, ms));
      return rows;
    }

    if (cross_racks.size() == 1) {
      std::size_t rack = cross_racks[0];
      std::size_t cnt = erased_count(rack);
      bool full = cnt == cfg_->L();
      bool use_multi = policy == RepairPolicy::ForceMultiPartial ||
                       (policy == RepairPolicy::Auto && !cfg_->tower && cfg_->common_subfield);
      if (!cfg_->tower && !use_multi)
        throw std::runtime_error(
            "run_repair: no applicable scheme (configuration has neither tower nor common "
            "subfield for this pattern)");
      RepairEngine::Variant variant = pick_variant(rack, policy);
      auto t0 = std::chrono::steady_clock::now();
      RepairEngine::Result res;
      if (use_multi) {
        ErasurePattern pat;
        pat.racks.push_back({rack, erased_set(rack)});
        res = engine_->multi_partial(stripes_, pat);
      } else if (full && policy != RepairPolicy::ForcePartialSingle) {
        res = engine_->full_rack(stripes_, rack, variant, seed);
      } else {
        res = engine_->partial_single(stripes_, rack, erased_set(rack), variant, seed);
      }
      double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      absorb(res, {rack});
      rows.push_back(make_row(res, {rack}, ms));
      return rows;
    }

    // multiple racks beyond locality
    bool all_full = true;
    for (auto rack : cross_racks)
      if (erased_count(rack) != cfg_->L()) all_full = false;
    if (all_full)
      throw std::runtime_error(
          "run_repair: repairing multiple whole-rack erasures is an open problem; no scheme "
          "applies");
    ErasurePattern pat;
    for (auto rack : cross_racks) pat.racks.push_back({rack, erased_set(rack)});
    auto t0 = std::chrono::steady_clock::now();
    auto res = engine_->multi_partial(stripes_, pat);
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    absorb(res, cross_racks);
    rows.push_back(make_row(res, cross_racks, ms));
    return rows;
  }

  // Shadow comparison; true when every cell matches the ground truth.
  bool verify_shadow() const {
    if (!keep_shadow_) throw std::logic_error("verify_shadow: shadow disabled");
    for (std::size_t s = 0; s < stripes_.size(); ++s)
      for (std::size_t rack = 0; rack < cfg_->m(); ++rack)
        for (std::size_t row = 0; row < cfg_->L(); ++row) {
          if (erased_[rack][row]) continue;
          if (!(stripes_[s].cols[rack][row] == shadow_[s].cols[rack][row])) return false;
        }
    return true;
  }

  json to_json() const {
    const Field& f = *cfg_->field;
    json stripes = json::array();
    for (const auto& cw : stripes_) stripes.push_back(codeword_to_json(cw));
    json shadow = json::array();
    for (const auto& cw : shadow_) shadow.push_back(codeword_to_json(cw));
    json status = json::array();
    for (const auto& col : erased_) {
      json c = json::array();
      for (bool b : col) c.push_back(b);
      status.push_back(c);
    }
    (void)f;
    return json{{"config", config_to_json(*cfg_)},
                {"stripes", stripes},
                {"shadow", keep_shadow_ ? shadow : json(nullptr)},
                {"erased", status},
                {"log", log_},
                {"traffic_fq", traffic_.str()},
                {"logical_bytes", logical_bytes_}};
  }

  static ClusterState from_json(const CodeConfig& cfg, const json& j,
                                std::shared_ptr<RepairEngine> engine = nullptr) {
    bool with_shadow = !j.at("shadow").is_null();
    ClusterState st(cfg, with_shadow, std::move(engine));
    for (const auto& cw : j.at("stripes")) st.stripes_.push_back(codeword_from_json(cfg, cw));
    if (with_shadow)
      for (const auto& cw : j.at("shadow")) st.shadow_.push_back(codeword_from_json(cfg, cw));
    auto status = j.at("erased");
    for (std::size_t rack = 0; rack < cfg.m(); ++rack)
      for (std::size_t row = 0; row < cfg.L(); ++row)
        st.erased_[rack][row] = status[rack][row].get<bool>();
    st.log_ = j.at("log").get<std::vector<std::string>>();
    st.traffic_ = Rational::parse(j.at("traffic_fq").get<std::string>());
    st.logical_bytes_ = j.at("logical_bytes").get<std::size_t>();
    return st;
  }

 private:
  std::size_t erased_count(std::size_t rack) const {
    std::size_t cnt = 0;
    for (bool b : erased_[rack]) cnt += b ? 1 : 0;
    return cnt;
  }

  std::set<std::size_t> erased_set(std::size_t rack) const {
    std::set<std::size_t> out;
    for (std::size_t row = 0; row < cfg_->L(); ++row)
      if (erased_[rack][row]) out.insert(row);
    return out;
  }

  RepairEngine::Variant pick_variant(std::size_t rack, RepairPolicy policy) const {
    if (policy == RepairPolicy::ForceFullI) return RepairEngine::Variant::I;
    if (policy == RepairPolicy::ForceFullII) return RepairEngine::Variant::II;
    if (!cfg_->tower) return RepairEngine::Variant::I;
    std::size_t wi = (*cfg_->tower)[rack].w_i;
    std::size_t ws = engine_->w_star(rack);
    return wi % ws == 0 ? RepairEngine::Variant::II : RepairEngine::Variant::I;
  }

  ExperimentRow repair_local(std::size_t rack) {
    auto t0 = std::chrono::steady_clock::now();
    auto erased = erased_set(rack);
    for (auto& cw : stripes_) {
      std::vector<std::pair<std::size_t, Element>> survivors;
      for (std::size_t row = 0; row < cfg_->L(); ++row)
        if (!erased.count(row)) survivors.push_back({row, cw.cols[rack][row]});
      auto col = local_repair_column(*cfg_, rack, survivors, erased);
      cw.cols[rack] = col;
    }
    for (auto row : erased) erased_[rack][row] = false;
    if (keep_shadow_ && !verify_shadow())
      throw std::runtime_error("run_repair: local repair result does not match ground truth");
    ExperimentRow row;
    row.scheme = "local";
    row.tau = 1;
    row.erasures = std::to_string(rack) + ":" + std::to_string(erased.size());
    row.helpers_count = 0;
    row.helpers = "";
    row.stripes = stripes_.size();
    row.subfield_symbols = 0;
    row.fq_total = Rational(0);
    row.fq_per_stripe = Rational(0);
    row.bound = Rational(0);  // intra-rack traffic is free in this model
    row.optimal = true;
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    log_.push_back("local repair rack=" + std::to_string(rack));
    return row;
  }

  void absorb(const RepairEngine::Result& res, const std::vector<std::size_t>& racks) {
    for (const auto& w : res.transcript.recovered) {
      stripes_[w.stripe].cols[w.rack][w.position] = w.value;
    }
    for (auto rack : racks)
      for (std::size_t row = 0; row < cfg_->L(); ++row) erased_[rack][row] = false;
    traffic_ += res.report.total_fq;
    if (keep_shadow_ && !verify_shadow())
      throw std::runtime_error("run_repair: repaired cells do not match ground truth");
    log_.push_back(std::string("cross-rack repair scheme=") +
                   scheme_name(res.transcript.scheme));
  }

  ExperimentRow make_row(const RepairEngine::Result& res, const std::vector<std::size_t>& racks,
                         double ms) const {
    ExperimentRow row;
    row.scheme = scheme_name(res.transcript.scheme);
    row.tau = racks.size();
    std::ostringstream er, hp;
    bool first = true;
    for (auto rack : racks) {
      std::size_t cnt = 0;
      for (const auto& w : res.transcript.recovered)
        if (w.rack == rack && w.stripe == 0) ++cnt;
      er << (first ? "" : ";") << rack << ":" << cnt;
      first = false;
    }
    first = true;
    for (auto h : res.transcript.helpers) {
      hp << (first ? "" : ";") << h;
      first = false;
    }
    row.erasures = er.str();
    row.helpers_count = res.transcript.helpers.size();
    row.helpers = hp.str();
    row.stripes = res.transcript.stripes;
    std::size_t raw = 0;
    for (const auto& ph : res.report.per_helper) raw += ph.symbols;
    row.subfield_symbols = raw;
    row.fq_total = res.report.total_fq;
    row.fq_per_stripe = res.report.per_stripe_fq;
    row.bound = res.report.bound;
    row.optimal = res.report.optimal;
    row.wall_ms = ms;
    return row;
  }

  const CodeConfig* cfg_;
  std::shared_ptr<RepairEngine> engine_;
  bool keep_shadow_;
  std::vector<ArrayCodeword> stripes_;
  std::vector<ArrayCodeword> shadow_;
  std::vector<std::vector<bool>> erased_;
  std::vector<std::string> log_;
  Rational traffic_{0};
  std::size_t logical_bytes_ = 0;
};

// Deterministic sweep of admissible single-event patterns x seeds.  One
// cluster per cell; rows come back in enumeration order so identical seeds
// give identical CSV bytes.
inline std::vector<ExperimentRow> bench(const CodeConfig& cfg, std::size_t seeds,
                                        std::size_t stripes_per_cluster = 1) {
  std::vector<ExperimentRow> rows;
  struct Pattern {
    ErasurePattern pat;
    bool local = false;
  };
  std::vector<Pattern> patterns;
  // sub-locality event (free local repair)
  if (cfg.delta() >= 2) {
    Pattern p;
    p.local = true;
    p.pat.racks.push_back({0, {0}});
    patterns.push_back(p);
  }
  if (cfg.tower || cfg.common_subfield) {
    for (std::size_t rack = 0; rack < cfg.m(); ++rack)
      for (std::size_t e = cfg.delta(); e <= cfg.L(); ++e) {
        Pattern p;
        std::set<std::size_t> pos;
        for (std::size_t i = 0; i < e; ++i) pos.insert(i);
        p.pat.racks.push_back({rack, pos});
        patterns.push_back(p);
      }
  }
  if (cfg.common_subfield) {
    // single- and two-rack partial patterns through the common-subfield scheme
    BigUint need = BigUint::pow_small(cfg.field->characteristic(),
                                      cfg.field->degree() - cfg.common_subfield->sub_degree());
    need.mul_small(2);
    std::size_t max_tau = (need.fits_u64() && need.as_u64() <= cfg.m2) ? 2 : 1;
    for (std::size_t tau = 1; tau <= max_tau && tau + 1 < cfg.m(); ++tau) {
      Pattern p;
      for (std::size_t t = 0; t < tau; ++t) {
        std::set<std::size_t> pos;
        for (std::size_t i = 0; i < cfg.delta(); ++i) pos.insert(i);
        p.pat.racks.push_back({t, pos});
      }
      patterns.push_back(p);
    }
  }

  const std::size_t chunk = bytes_per_symbol(*cfg.field);
  auto engine = std::make_shared<RepairEngine>(cfg);
  for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
    for (std::size_t seed = 0; seed < seeds; ++seed) {
      Rng rng(0xbe9c0000ULL + 1315423911ULL * seed + pi);
      std::vector<std::uint8_t> data(chunk * cfg.k() * stripes_per_cluster);
      for (std::size_t i = 0; i < data.size(); i += chunk) {
        Element e = cfg.field->random(rng);
        element_to_bytes(*cfg.field, e, data.data() + i, chunk);
      }
      ClusterState st = ClusterState::encode_bytes(cfg, data, true, engine);
      st.inject_pattern(patterns[pi].pat);
      auto event_rows = st.run_repair(RepairPolicy::Auto, seed);
      for (auto& row : event_rows) rows.push_back(row);
      if (!st.verify_shadow()) throw std::runtime_error("bench: verification failed");
    }
  }
  return rows;
}

inline std::string rows_to_csv(const std::vector<ExperimentRow>& rows, bool timings = false) {
  std::ostringstream os;
  os << ExperimentRow::csv_header(timings) << '\n';
  for (const auto& row : rows) os << row.csv_line(timings) << '\n';
  return os.str();
}

}  // namespace rasl::sim
