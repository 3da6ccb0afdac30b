#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rasl/bounds.hpp"
#include "rasl/extension.hpp"
#include "rasl/tamo_barg.hpp"

namespace rasl {

// Failed racks with their erased positions.  A full-rack pattern erases every
// position; partial patterns must exceed the local parities (smaller erasures
// are local-repair business and never reach the cross-rack schemes).
struct ErasurePattern {
  struct RackErasure {
    std::size_t rack;
    std::set<std::size_t> positions;
  };
  std::vector<RackErasure> racks;

  std::size_t tau() const { return racks.size(); }

  void validate(const CodeConfig& cfg) const {
    std::set<std::size_t> seen;
    for (const auto& re : racks) {
      if (re.rack >= cfg.m()) throw std::invalid_argument("ErasurePattern: bad rack index");
      if (!seen.insert(re.rack).second)
        throw std::invalid_argument("ErasurePattern: repeated rack");
      if (re.positions.empty()) throw std::invalid_argument("ErasurePattern: empty erasure set");
      for (auto p : re.positions)
        if (p >= cfg.L()) throw std::invalid_argument("ErasurePattern: bad position");
      if (re.positions.size() < cfg.delta())
        throw std::invalid_argument(
            "ErasurePattern: below-locality erasures belong to local repair");
    }
  }
};

enum class RepairScheme { FullRackI, FullRackII, PartialSingle, MultiPartial, GrsPlugin };

inline const char* scheme_name(RepairScheme s) {
  switch (s) {
    case RepairScheme::FullRackI: return "full-I";
    case RepairScheme::FullRackII: return "full-II";
    case RepairScheme::PartialSingle: return "partial-single";
    case RepairScheme::MultiPartial: return "multi-partial";
    case RepairScheme::GrsPlugin: return "naive-grs";
  }
  return "?";
}

// One helper's wire messages: subfield symbols in the subfield's own
// representation.
struct HelperMessage {
  std::size_t helper_rack = 0;
  std::size_t subfield_degree = 0;  // over GF(p)
  std::vector<Element> symbols;     // elements of the subfield's Field
};

struct RepairTranscript {
  RepairScheme scheme = RepairScheme::FullRackI;
  std::size_t stripes = 1;
  std::vector<std::size_t> helpers;
  std::vector<HelperMessage> messages;
  struct Witness {
    std::size_t stripe, rack, position;
    Element value;
  };
  std::vector<Witness> recovered;
};

// Exact bandwidth accounting.  Subfield symbols of degree d count d/N of an
// F_q symbol; `bound` is the matching lower bound (or, for the multi-rack
// scheme, the per-helper closed-form count) and `optimal` is exact equality.
struct BandwidthReport {
  struct PerHelper {
    std::size_t rack;
    std::size_t subfield_degree;
    std::size_t symbols;  // raw subfield element count across the batch
  };
  std::vector<PerHelper> per_helper;
  std::size_t stripes = 1;
  Rational total_fq{0};
  Rational per_stripe_fq{0};
  Rational bound{0};
  bool optimal = false;
  // multi-partial extras
  Rational per_helper_per_stripe_symbols{0};
  Rational per_helper_bound_symbols{0};

  void finalize(std::size_t field_degree) {
    total_fq = Rational(0);
    std::size_t raw = 0;
    for (const auto& ph : per_helper) {
      total_fq += Rational((long long)(ph.symbols * ph.subfield_degree), (long long)field_degree);
      raw += ph.symbols;
    }
    per_stripe_fq = total_fq / Rational((long long)stripes);
    if (!per_helper.empty())
      per_helper_per_stripe_symbols =
          Rational((long long)raw) /
          Rational((long long)(per_helper.size() * stripes));
  }
};

// External (tau, D) GRS repairer interface.  Only the naive full-download
// plugin ships here; anything smarter plugs in behind the same contract.
class GrsRepairPlugin {
 public:
  virtual ~GrsRepairPlugin() = default;
  virtual std::string name() const = 0;
  virtual std::size_t max_tau(const GrsCode& code) const = 0;
  virtual std::size_t helper_count(const GrsCode& code) const = 0;  // the D of the contract

  struct RowResult {
    std::vector<Element> values;     // one per failed index, same order
    Rational per_helper_fq{0};       // download per helper for this call, F_q units
  };
  virtual RowResult repair_row(const GrsCode& code,
                               const std::vector<std::pair<std::size_t, Element>>& helpers,
                               const std::vector<std::size_t>& failed) const = 0;
};

// Every helper ships its whole symbol; the collector erasure-decodes.  Meets
// the cut-set value trivially because D equals the code dimension.
class NaiveGrsPlugin final : public GrsRepairPlugin {
 public:
  std::string name() const override { return "naive-full-download"; }
  std::size_t max_tau(const GrsCode& code) const override {
    return code.length() - code.dim;
  }
  std::size_t helper_count(const GrsCode& code) const override { return code.dim; }

  RowResult repair_row(const GrsCode& code,
                       const std::vector<std::pair<std::size_t, Element>>& helpers,
                       const std::vector<std::size_t>& failed) const override {
    if (helpers.size() != code.dim)
      throw std::invalid_argument("NaiveGrsPlugin: expected exactly dim helpers");
    Poly<Field> msg = grs_erasure_decode(code, helpers);
    RowResult out;
    for (auto idx : failed)
      out.values.push_back(
          code.field->mul(code.multipliers[idx], msg.eval(code.locators[idx])));
    out.per_helper_fq = Rational(1);  // each helper ships its whole symbol
    return out;
  }
};

// Cross-rack repair engine.  Holds the per-configuration caches (extension
// fields, dual bases, multiplier sets); the config itself stays immutable.
class RepairEngine {
 public:
  explicit RepairEngine(const CodeConfig& cfg) : cfg_(cfg) {
    grs_full_ = GrsCode(*cfg.field, cfg.m1, cfg.class_values());
    theta_ = dual_multipliers(grs_full_);
  }

  const CodeConfig& config() const { return cfg_; }

  enum class Variant { I, II };

  // w*_i = r / gcd(w_i, r); the same packing factor drives the partial
  // scheme because L - delta + 1 = r.
  std::size_t w_star(std::size_t rack) const {
    std::size_t wi = tower_entry(rack).w_i;
    return cfg_.r / std::gcd(wi, cfg_.r);
  }

  // Named hypothesis check; empty return means the variant applies.
  std::optional<std::string> full_rack_hypotheses(std::size_t rack, Variant variant) const {
    if (!cfg_.tower) return "tower structure missing from configuration";
    std::size_t wi = tower_entry(rack).w_i;
    std::size_t ws = w_star(rack);
    if (variant == Variant::I && ws > wi)
      return "hypothesis w*_i <= w_i fails (w* = " + std::to_string(ws) +
             ", w_i = " + std::to_string(wi) + ")";
    if (variant == Variant::II && wi % ws != 0)
      return "hypothesis w*_i | w_i fails (w* = " + std::to_string(ws) +
             ", w_i = " + std::to_string(wi) + ")";
    std::size_t need = std::max<std::size_t>(2, ws);
    if (cfg_.m2 < need)
      return "hypothesis m2 >= max{2, w*_i} fails (m2 = " + std::to_string(cfg_.m2) +
             ", needed " + std::to_string(need) + ")";
    return std::nullopt;
  }

  struct Result {
    // recovered[stripe][slot] follows the order of requested positions
    std::vector<std::vector<Element>> recovered_columns;  // full column per stripe (full/partial)
    RepairTranscript transcript;
    BandwidthReport report;
  };

  // ---- full rack ---------------------------------------------------------
  Result full_rack(const std::vector<ArrayCodeword>& batch, std::size_t rack, Variant variant,
                   std::uint64_t seed,
                   std::optional<std::vector<std::size_t>> helper_override = {}) const {
    std::set<std::size_t> all;
    for (std::size_t p = 0; p < cfg_.L(); ++p) all.insert(p);
    return repair_single_rack(batch, rack, all, variant, seed, std::move(helper_override),
                              /*full=*/true);
  }

  // ---- partial erasures in one rack --------------------------------------
  Result partial_single(const std::vector<ArrayCodeword>& batch, std::size_t rack,
                        const std::set<std::size_t>& erased, Variant variant, std::uint64_t seed,
                        std::optional<std::vector<std::size_t>> helper_override = {}) const {
    if (erased.size() < cfg_.delta())
      throw std::invalid_argument("partial_single: fewer than delta erasures; use local repair");
    if (erased.size() > cfg_.L()) throw std::invalid_argument("partial_single: bad erasure set");
    return repair_single_rack(batch, rack, erased, variant, seed, std::move(helper_override),
                              /*full=*/erased.size() == cfg_.L());
  }

  // ---- multiple partially erased racks ------------------------------------
  Result multi_partial(const std::vector<ArrayCodeword>& batch,
                       const ErasurePattern& pattern) const {
    pattern.validate(cfg_);
    if (pattern.tau() == 0) throw std::invalid_argument("multi_partial: empty pattern");
    if (!cfg_.common_subfield)
      throw std::invalid_argument("multi_partial: configuration has no common subfield");
    const Field& f = *cfg_.field;
    const SubfieldHandle& B = *cfg_.common_subfield;
    const std::size_t tau = pattern.tau();

    // m2 >= tau * q / q_1, i.e. tau * p^(N - d_B)
    {
      std::size_t gap = f.degree() - B.sub_degree();
      BigUint need = BigUint::pow_small(f.characteristic(), gap);
      need.mul_small(tau);
      if (!need.fits_u64() || need.as_u64() > cfg_.m2)
        throw std::invalid_argument("multi_partial: hypothesis m2 >= q*tau/q_1 fails (need " +
                                    need.str() + ", have " + std::to_string(cfg_.m2) + ")");
    }

    const std::size_t S = batch.size();
    if (S == 0) throw std::invalid_argument("multi_partial: empty batch");

    std::set<std::size_t> failed_set;
    for (const auto& re : pattern.racks) failed_set.insert(re.rack);
    std::vector<std::size_t> helpers;
    for (std::size_t t = 0; t < cfg_.m(); ++t)
      if (!failed_set.count(t)) helpers.push_back(t);

    // erasure locator Lambda(x) = prod (x - y_failed), plus per-rack constants
    std::vector<Element> lambda_at_helper(helpers.size(), f.one());
    for (std::size_t hi = 0; hi < helpers.size(); ++hi)
      for (const auto& re : pattern.racks)
        lambda_at_helper[hi] =
            f.mul(lambda_at_helper[hi],
                  f.sub(cfg_.class_value(helpers[hi]), cfg_.class_value(re.rack)));

    // needed coefficient indices per failed rack: the top |E_i| - delta + 1
    std::vector<std::vector<std::size_t>> needed(tau);
    for (std::size_t ti = 0; ti < tau; ++ti) {
      std::size_t cnt = pattern.racks[ti].positions.size() - cfg_.delta() + 1;
      for (std::size_t j = cfg_.r - cnt; j < cfg_.r; ++j) needed[ti].push_back(j);
    }

    // helper messages: tr(-theta_t H_j(y_t) / (y_t - y_i)) per (stripe, i, j)
    RepairTranscript transcript;
    transcript.scheme = RepairScheme::MultiPartial;
    transcript.stripes = S;
    transcript.helpers = helpers;
    BandwidthReport report;
    report.stripes = S;

    // message order: stripe-major, then failed rack, then coefficient index
    std::vector<std::vector<Element>> msgs(helpers.size());  // in B-image (parent rep)
    for (std::size_t hi = 0; hi < helpers.size(); ++hi) {
      std::size_t t = helpers[hi];
      HelperMessage hm;
      hm.helper_rack = t;
      hm.subfield_degree = B.sub_degree();
      for (std::size_t st = 0; st < S; ++st) {
        auto rows = column_coeff_rows(batch[st], t);
        for (std::size_t ti = 0; ti < tau; ++ti) {
          Element denom = f.sub(cfg_.class_value(t), cfg_.class_value(pattern.racks[ti].rack));
          for (auto j : needed[ti]) {
            Element arg = f.neg(f.div(f.mul(theta_[t], rows[j]), denom));
            Element tr = B.trace(arg);
            msgs[hi].push_back(tr);
            hm.symbols.push_back(B.project(tr));
          }
        }
      }
      report.per_helper.push_back({t, B.sub_degree(), hm.symbols.size()});
      transcript.messages.push_back(std::move(hm));
    }

    // collector: dual-basis reconstruction with tr(alpha_v Lambda(y_t)) weights
    const BasisPair& bp = common_basis();
    const std::size_t T = bp.basis.size();
    std::vector<std::vector<Element>> weights(helpers.size(), std::vector<Element>(T));
    for (std::size_t hi = 0; hi < helpers.size(); ++hi)
      for (std::size_t v = 0; v < T; ++v)
        weights[hi][v] = B.trace(f.mul(bp.basis[v], lambda_at_helper[hi]));

    std::vector<std::vector<Element>> recovered_columns(S);
    std::size_t msg_stride = 0;
    for (std::size_t ti = 0; ti < tau; ++ti) msg_stride += needed[ti].size();

    Result result;
    for (std::size_t st = 0; st < S; ++st) {
      for (std::size_t ti = 0; ti < tau; ++ti) {
        const auto& re = pattern.racks[ti];
        Element ci = f.one();  // prod over other failed racks (y_i - y_j)
        for (std::size_t tj = 0; tj < tau; ++tj)
          if (tj != ti)
            ci = f.mul(ci, f.sub(cfg_.class_value(re.rack), cfg_.class_value(pattern.racks[tj].rack)));
        Element scale = f.inv(f.mul(ci, theta_[re.rack]));

        std::vector<Element> high(needed[ti].size());
        for (std::size_t jj = 0; jj < needed[ti].size(); ++jj) {
          std::size_t offset = st * msg_stride + needed_offset(needed, ti) + jj;
          Element acc = f.zero();
          for (std::size_t v = 0; v < T; ++v) {
            Element comb = f.zero();
            for (std::size_t hi = 0; hi < helpers.size(); ++hi)
              comb = f.add(comb, f.mul(weights[hi][v], msgs[hi][offset]));
            acc = f.add(acc, f.mul(comb, bp.dual[v]));
          }
          high[jj] = f.mul(acc, scale);  // H_j(y_i)
        }

        // survivors pin the low part
        auto column = complete_column_from_high(batch[st], re.rack, re.positions,
                                                needed[ti], high);
        for (auto pos : re.positions)
          transcript.recovered.push_back({st, re.rack, pos, column[pos]});
        if (tau == 1) recovered_columns[st] = column;
        else recovered_columns[st].insert(recovered_columns[st].end(), column.begin(), column.end());
      }
    }

    report.finalize(f.degree());
    // closed form: per helper, per stripe, M = sum |E_i| - tau (delta - 1) subfield elements
    long long M = 0;
    for (const auto& re : pattern.racks) M += (long long)re.positions.size();
    M -= (long long)(tau * (cfg_.delta() - 1));
    report.per_helper_bound_symbols = Rational(M);
    report.bound = Rational((long long)helpers.size() * M * (long long)B.sub_degree(),
                            (long long)f.degree());
    report.optimal = report.per_stripe_fq == report.bound &&
                     report.per_helper_per_stripe_symbols == report.per_helper_bound_symbols;

    result.recovered_columns = std::move(recovered_columns);
    result.transcript = std::move(transcript);
    result.report = std::move(report);
    return result;
  }

  // ---- reduction to an external (tau, D) GRS repairer ---------------------
  Result via_plugin(const std::vector<ArrayCodeword>& batch, const ErasurePattern& pattern,
                    const GrsRepairPlugin& plugin,
                    std::optional<std::vector<std::size_t>> helper_override = {}) const {
    pattern.validate(cfg_);
    const Field& f = *cfg_.field;
    const std::size_t tau = pattern.tau();
    if (tau == 0) throw std::invalid_argument("via_plugin: empty pattern");
    const std::size_t wbar = pattern.racks[0].positions.size();
    for (const auto& re : pattern.racks)
      if (re.positions.size() != wbar)
        throw std::invalid_argument("via_plugin: pattern must have uniform erasure counts");
    if (tau > plugin.max_tau(grs_full_))
      throw std::invalid_argument("via_plugin: plugin contract cannot handle tau");
    const std::size_t D = plugin.helper_count(grs_full_);

    std::set<std::size_t> failed_set;
    std::vector<std::size_t> failed;
    for (const auto& re : pattern.racks) {
      failed_set.insert(re.rack);
      failed.push_back(re.rack);
    }
    std::vector<std::size_t> helpers;
    if (helper_override) helpers = *helper_override;
    else
      for (std::size_t t = 0; t < cfg_.m() && helpers.size() < D; ++t)
        if (!failed_set.count(t)) helpers.push_back(t);
    if (helpers.size() != D)
      throw std::invalid_argument("via_plugin: plugin contract needs exactly D helpers");
    for (auto h : helpers)
      if (failed_set.count(h)) throw std::invalid_argument("via_plugin: helper is failed");

    const std::size_t S = batch.size();
    const std::size_t rows = wbar - cfg_.delta() + 1;  // low coefficient indices
    RepairTranscript transcript;
    transcript.scheme = RepairScheme::GrsPlugin;
    transcript.stripes = S;
    transcript.helpers = helpers;
    BandwidthReport report;
    report.stripes = S;

    Rational per_helper_cost(0);
    std::vector<std::vector<Element>> recovered_columns(S);
    for (std::size_t st = 0; st < S; ++st) {
      std::vector<std::vector<Element>> helper_rows(helpers.size());
      for (std::size_t hi = 0; hi < helpers.size(); ++hi)
        helper_rows[hi] = column_coeff_rows(batch[st], helpers[hi]);

      std::vector<std::vector<Element>> low_per_rack(tau, std::vector<Element>(rows, f.zero()));
      for (std::size_t j = 0; j < rows; ++j) {
        std::vector<std::pair<std::size_t, Element>> known;
        for (std::size_t hi = 0; hi < helpers.size(); ++hi)
          known.push_back({helpers[hi], helper_rows[hi][j]});
        auto rr = plugin.repair_row(grs_full_, known, failed);
        per_helper_cost += rr.per_helper_fq;
        for (std::size_t ti = 0; ti < tau; ++ti) low_per_rack[ti][j] = rr.values[ti];
      }

      for (std::size_t ti = 0; ti < tau; ++ti) {
        const auto& re = pattern.racks[ti];
        std::vector<std::size_t> low_idx(rows);
        for (std::size_t j = 0; j < rows; ++j) low_idx[j] = j;
        auto column = complete_column_from_low(batch[st], re.rack, re.positions, low_idx,
                                               low_per_rack[ti]);
        for (auto pos : re.positions)
          transcript.recovered.push_back({st, re.rack, pos, column[pos]});
        if (tau == 1) recovered_columns[st] = column;
        else recovered_columns[st].insert(recovered_columns[st].end(), column.begin(), column.end());
      }
    }

    // plugin costs are F_q units; require whole symbols per helper
    if (!per_helper_cost.is_integer())
      throw std::logic_error("via_plugin: plugin reported fractional per-helper symbols");
    for (auto h : helpers)
      report.per_helper.push_back({h, f.degree(), (std::size_t)per_helper_cost.num()});
    report.finalize(f.degree());
    // reduction bound: tau D (wbar - delta + 1) / (D - m1 + tau) per stripe
    report.bound = Rational((long long)(tau * D * rows), (long long)(D - cfg_.m1 + tau));
    report.optimal = report.per_stripe_fq == report.bound;

    Result result;
    result.recovered_columns = std::move(recovered_columns);
    result.transcript = std::move(transcript);
    result.report = std::move(report);
    return result;
  }

  // Coefficient rows of one helper column (message-locality boundary: this is
  // the only input a helper computation gets).
  std::vector<Element> column_coeff_rows(const ArrayCodeword& cw, std::size_t rack) const {
    const Field& f = *cfg_.field;
    const auto& col = cw.cols[rack];
    std::vector<std::pair<Element, Element>> pts;
    for (std::size_t row = 0; row < cfg_.r; ++row)
      pts.push_back({cfg_.class_roots(rack)[row], col[row]});
    Poly<Field> fi = poly_interpolate(f, pts);
    for (std::size_t row = cfg_.r; row < cfg_.L(); ++row)
      if (!(fi.eval(cfg_.class_roots(rack)[row]) == col[row]))
        throw std::runtime_error("column_coeff_rows: helper column inconsistent");
    std::vector<Element> rows(cfg_.r, f.zero());
    for (std::size_t j = 0; j < cfg_.r; ++j) rows[j] = fi.coeff(j);
    return rows;
  }

 private:
  const TowerEntry& tower_entry(std::size_t rack) const {
    if (!cfg_.tower) throw std::invalid_argument("RepairEngine: configuration has no tower");
    return (*cfg_.tower)[rack];
  }

  static std::size_t needed_offset(const std::vector<std::vector<std::size_t>>& needed,
                                   std::size_t ti) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < ti; ++i) off += needed[i].size();
    return off;
  }

  // --- shared single-rack machinery (full and partial are the same scheme on
  //     different row sets) ------------------------------------------------

  Result repair_single_rack(const std::vector<ArrayCodeword>& batch, std::size_t rack,
                            const std::set<std::size_t>& erased, Variant variant,
                            std::uint64_t seed, std::optional<std::vector<std::size_t>> helper_override,
                            bool full) const {
    if (auto bad = full_rack_hypotheses(rack, variant))
      throw std::invalid_argument("repair: " + *bad);
    const Field& f = *cfg_.field;
    const std::size_t S = batch.size();
    if (S == 0) throw std::invalid_argument("repair: empty batch");
    for (const auto& cw : batch)
      if (cw.config != &cfg_) throw std::invalid_argument("repair: codeword of another config");

    const SubfieldHandle& sub = *tower_entry(rack).helper_subfield;
    const std::size_t wi = tower_entry(rack).w_i;
    const std::size_t ws = w_star(rack);
    const std::size_t D = ws + cfg_.m1 - 1;

    std::vector<std::size_t> helpers;
    if (helper_override) {
      helpers = *helper_override;
      if (helpers.size() != D) throw std::invalid_argument("repair: need exactly w*+m1-1 helpers");
      for (auto h : helpers)
        if (h == rack || h >= cfg_.m()) throw std::invalid_argument("repair: bad helper");
    } else {
      for (std::size_t t = 0; t < cfg_.m() && helpers.size() < D; ++t)
        if (t != rack) helpers.push_back(t);
    }

    // rows to recover: all r for a full rack, the low |E| - delta + 1 otherwise
    std::vector<std::size_t> row_idx;
    if (full)
      for (std::size_t j = 0; j < cfg_.r; ++j) row_idx.push_back(j);
    else
      for (std::size_t j = 0; j + cfg_.delta() <= erased.size(); ++j) row_idx.push_back(j);

    // excluded-locator polynomial g_Theta and its per-rack values
    Element g_at_i = f.one();
    std::vector<Element> g_at_helper(helpers.size(), f.one());
    for (std::size_t t = 0; t < cfg_.m(); ++t) {
      if (t == rack) continue;
      if (std::find(helpers.begin(), helpers.end(), t) != helpers.end()) continue;
      g_at_i = f.mul(g_at_i, f.sub(cfg_.class_value(rack), cfg_.class_value(t)));
      for (std::size_t hi = 0; hi < helpers.size(); ++hi)
        g_at_helper[hi] =
            f.mul(g_at_helper[hi], f.sub(cfg_.class_value(helpers[hi]), cfg_.class_value(t)));
    }

    const Element& yi = cfg_.class_value(rack);
    RepairTranscript transcript;
    transcript.scheme = variant == Variant::I ? RepairScheme::FullRackI : RepairScheme::FullRackII;
    if (!full) transcript.scheme = RepairScheme::PartialSingle;
    transcript.stripes = S;
    transcript.helpers = helpers;
    BandwidthReport report;
    report.stripes = S;

    // gather every (stripe, row) value per helper, in a fixed order
    const std::size_t Q = S * row_idx.size();
    std::vector<std::vector<Element>> helper_vals(helpers.size());
    for (std::size_t hi = 0; hi < helpers.size(); ++hi) {
      helper_vals[hi].reserve(Q);
      for (std::size_t st = 0; st < S; ++st) {
        auto rows = column_coeff_rows(batch[st], helpers[hi]);
        for (auto j : row_idx) helper_vals[hi].push_back(rows[j]);
      }
    }

    std::vector<Element> recovered_flat(Q, f.zero());  // H_j(y_i) per (stripe, row)

    if (variant == Variant::I) {
      const ExtField& ext = extension_for(ws);
      const auto& [gamma_basis, gamma_dual] = ext_dual_for(rack, seed);

      const std::size_t groups = (Q + ws - 1) / ws;
      // helper messages: per group, per t < w_i: tr(gamma_t v_j Psi_j)
      std::vector<std::vector<Element>> msgs(helpers.size());
      for (std::size_t hi = 0; hi < helpers.size(); ++hi) {
        HelperMessage hm;
        hm.helper_rack = helpers[hi];
        hm.subfield_degree = sub.sub_degree();
        for (std::size_t g = 0; g < groups; ++g) {
          std::vector<Element> coeffs(ws, f.zero());
          for (std::size_t u = 0; u < ws; ++u) {
            std::size_t q = g * ws + u;
            if (q < Q) coeffs[u] = helper_vals[hi][q];
          }
          ExtElt psi = ext.from_coeffs(coeffs);
          psi = ext.scale(psi, theta_[helpers[hi]]);
          for (std::size_t t = 0; t < wi; ++t) {
            Element tr = ext.trace_to(sub, ext.mul(gamma_basis[t * ws], psi));
            msgs[hi].push_back(tr);
            hm.symbols.push_back(sub.project(tr));
          }
        }
        report.per_helper.push_back({helpers[hi], sub.sub_degree(), hm.symbols.size()});
        transcript.messages.push_back(std::move(hm));
      }

      Element unscale = f.inv(f.mul(theta_[rack], g_at_i));
      for (std::size_t g = 0; g < groups; ++g) {
        // traces tr(gamma_t y_i^u Z) for Z = v_i g_T(y_i) Psi_i
        ExtElt z = ext.zero();
        for (std::size_t t = 0; t < wi; ++t) {
          for (std::size_t u = 0; u < ws; ++u) {
            Element acc = f.zero();
            for (std::size_t hi = 0; hi < helpers.size(); ++hi) {
              Element weight =
                  f.mul(f.pow(cfg_.class_value(helpers[hi]), (std::uint64_t)u), g_at_helper[hi]);
              acc = f.add(acc, f.mul(weight, msgs[hi][g * wi + t]));
            }
            acc = f.neg(acc);
            z = ext.add(z, ext.scale(gamma_dual[t * ws + u], acc));
          }
        }
        ExtElt x = ext.scale(z, unscale);
        for (std::size_t u = 0; u < ws; ++u) {
          std::size_t q = g * ws + u;
          if (q < Q) recovered_flat[q] = x.c[u];
          else if (!f.is_zero(x.c[u]))
            throw std::logic_error("repair: nonzero padding in reconstructed group");
        }
      }
    } else {
      // variant II: row by row inside F_q, trace exponents stride by w*
      const std::size_t reps = wi / ws;
      const BasisPair& ydual = ypow_dual_for(rack);

      std::vector<std::vector<Element>> msgs(helpers.size());
      for (std::size_t hi = 0; hi < helpers.size(); ++hi) {
        HelperMessage hm;
        hm.helper_rack = helpers[hi];
        hm.subfield_degree = sub.sub_degree();
        for (std::size_t q = 0; q < Q; ++q) {
          Element scaled = f.mul(theta_[helpers[hi]], helper_vals[hi][q]);
          for (std::size_t t = 0; t < reps; ++t) {
            Element tr = sub.trace(
                f.mul(f.pow(yi, (std::uint64_t)(ws * t)), scaled));
            msgs[hi].push_back(tr);
            hm.symbols.push_back(sub.project(tr));
          }
        }
        report.per_helper.push_back({helpers[hi], sub.sub_degree(), hm.symbols.size()});
        transcript.messages.push_back(std::move(hm));
      }

      Element unscale = f.inv(f.mul(theta_[rack], g_at_i));
      for (std::size_t q = 0; q < Q; ++q) {
        Element z = f.zero();
        for (std::size_t t = 0; t < reps; ++t) {
          for (std::size_t u = 0; u < ws; ++u) {
            Element acc = f.zero();
            for (std::size_t hi = 0; hi < helpers.size(); ++hi) {
              Element weight =
                  f.mul(f.pow(cfg_.class_value(helpers[hi]), (std::uint64_t)u), g_at_helper[hi]);
              acc = f.add(acc, f.mul(weight, msgs[hi][q * reps + t]));
            }
            acc = f.neg(acc);
            // exponent s = w* t + u indexes the y-power basis
            z = f.add(z, f.mul(ydual.dual[ws * t + u], acc));
          }
        }
        recovered_flat[q] = f.mul(z, unscale);
      }
    }

    // completion: rebuild each stripe's column
    Result result;
    result.recovered_columns.resize(S);
    for (std::size_t st = 0; st < S; ++st) {
      std::vector<Element> vals(row_idx.size());
      for (std::size_t j = 0; j < row_idx.size(); ++j) vals[j] = recovered_flat[st * row_idx.size() + j];
      std::vector<Element> column;
      if (full) {
        std::vector<Element> coeffs(cfg_.r, f.zero());
        for (std::size_t j = 0; j < row_idx.size(); ++j) coeffs[row_idx[j]] = vals[j];
        Poly<Field> fi(f, coeffs);
        for (std::size_t pos = 0; pos < cfg_.L(); ++pos)
          column.push_back(fi.eval(cfg_.class_roots(rack)[pos]));
      } else {
        column = complete_column_from_low(batch[st], rack, erased, row_idx, vals);
      }
      for (auto pos : erased)
        transcript.recovered.push_back({st, rack, pos, column[pos]});
      result.recovered_columns[st] = std::move(column);
    }

    report.finalize(f.degree());
    long long e = (long long)erased.size();
    if (full)
      report.bound = bounds::cutset_locality((long long)D, (long long)cfg_.m1, (long long)cfg_.r);
    else
      report.bound = Rational((long long)D * (e - (long long)cfg_.delta() + 1),
                              (long long)D - (long long)cfg_.m1 + 1);
    report.optimal = report.per_stripe_fq == report.bound;

    result.transcript = std::move(transcript);
    result.report = std::move(report);
    return result;
  }

  // Survivors + known low coefficient rows -> full column.
  std::vector<Element> complete_column_from_low(const ArrayCodeword& cw, std::size_t rack,
                                                const std::set<std::size_t>& erased,
                                                const std::vector<std::size_t>& low_idx,
                                                const std::vector<Element>& low_vals) const {
    const Field& f = *cfg_.field;
    std::vector<Element> coeffs(cfg_.r, f.zero());
    for (std::size_t j = 0; j < low_idx.size(); ++j) coeffs[low_idx[j]] = low_vals[j];
    Poly<Field> low_poly(f, coeffs);
    const std::size_t cut = low_idx.size();  // rows [0, cut) known
    // unknown part: x^cut * ghat(x), deg ghat < r - cut = survivors
    std::vector<std::pair<Element, Element>> pts;
    for (std::size_t pos = 0; pos < cfg_.L(); ++pos) {
      if (erased.count(pos)) continue;
      const Element& beta = cfg_.class_roots(rack)[pos];
      Element rem = f.sub(cw.cols[rack][pos], low_poly.eval(beta));
      Element denom = f.inv(f.pow(beta, (std::uint64_t)cut));
      pts.push_back({beta, f.mul(rem, denom)});
    }
    Poly<Field> ghat = poly_interpolate(f, pts);
    if (!ghat.is_zero() && *ghat.degree() >= cfg_.r - cut)
      throw std::runtime_error("repair: survivor completion inconsistent");
    Poly<Field> fi = low_poly + ghat.shifted(cut);
    std::vector<Element> column;
    for (std::size_t pos = 0; pos < cfg_.L(); ++pos) {
      if (erased.count(pos)) column.push_back(fi.eval(cfg_.class_roots(rack)[pos]));
      else column.push_back(cw.cols[rack][pos]);
    }
    return column;
  }

  // Survivors + known high coefficient rows -> full column.
  std::vector<Element> complete_column_from_high(const ArrayCodeword& cw, std::size_t rack,
                                                 const std::set<std::size_t>& erased,
                                                 const std::vector<std::size_t>& high_idx,
                                                 const std::vector<Element>& high_vals) const {
    const Field& f = *cfg_.field;
    std::vector<Element> coeffs(cfg_.r, f.zero());
    for (std::size_t j = 0; j < high_idx.size(); ++j) coeffs[high_idx[j]] = high_vals[j];
    Poly<Field> high_poly(f, coeffs);
    const std::size_t unknown = cfg_.r - high_idx.size();  // rows [0, unknown) missing
    std::vector<std::pair<Element, Element>> pts;
    for (std::size_t pos = 0; pos < cfg_.L(); ++pos) {
      if (erased.count(pos)) continue;
      const Element& beta = cfg_.class_roots(rack)[pos];
      pts.push_back({beta, f.sub(cw.cols[rack][pos], high_poly.eval(beta))});
    }
    Poly<Field> low = poly_interpolate(f, pts);
    if (!low.is_zero() && *low.degree() >= unknown)
      throw std::runtime_error("repair: survivor completion inconsistent");
    Poly<Field> fi = low + high_poly;
    std::vector<Element> column;
    for (std::size_t pos = 0; pos < cfg_.L(); ++pos) {
      if (erased.count(pos)) column.push_back(fi.eval(cfg_.class_roots(rack)[pos]));
      else column.push_back(cw.cols[rack][pos]);
    }
    return column;
  }

  const ExtField& extension_for(std::size_t ws) const {
    auto it = exts_.find(ws);
    if (it == exts_.end())
      it = exts_.emplace(ws, ExtField::make(*cfg_.field, ws)).first;
    return it->second;
  }

  const std::pair<std::vector<ExtElt>, std::vector<ExtElt>>& ext_dual_for(
      std::size_t rack, std::uint64_t seed) const {
    auto key = std::make_pair(rack, seed);
    auto it = ext_duals_.find(key);
    if (it == ext_duals_.end()) {
      const std::size_t ws = w_star(rack);
      const ExtField& ext = extension_for(ws);
      const SubfieldHandle& sub = *tower_entry(rack).helper_subfield;
      it = ext_duals_
               .emplace(key, find_ext_multipliers(ext, sub, cfg_.class_value(rack), ws,
                                                  seed ^ 0x6a5d))
               .first;
    }
    return it->second;
  }

  const BasisPair& ypow_dual_for(std::size_t rack) const {
    auto it = ypow_duals_.find(rack);
    if (it == ypow_duals_.end()) {
      const Field& f = *cfg_.field;
      const SubfieldHandle& sub = *tower_entry(rack).helper_subfield;
      std::vector<Element> powers(tower_entry(rack).w_i);
      powers[0] = f.one();
      for (std::size_t s = 1; s < powers.size(); ++s)
        powers[s] = f.mul(powers[s - 1], cfg_.class_value(rack));
      it = ypow_duals_.emplace(rack, dual_basis(sub, powers)).first;
    }
    return it->second;
  }

  const BasisPair& common_basis() const {
    if (!common_basis_) {
      const Field& f = *cfg_.field;
      const SubfieldHandle& B = *cfg_.common_subfield;
      std::vector<Element> powers(B.index());
      powers[0] = f.one();
      for (std::size_t v = 1; v < powers.size(); ++v) powers[v] = f.mul(powers[v - 1], f.gen());
      common_basis_ = dual_basis(B, powers);
    }
    return *common_basis_;
  }

  const CodeConfig& cfg_;
  GrsCode grs_full_;
  std::vector<Element> theta_;
  mutable std::map<std::size_t, ExtField> exts_;
  mutable std::map<std::pair<std::size_t, std::uint64_t>,
                   std::pair<std::vector<ExtElt>, std::vector<ExtElt>>>
      ext_duals_;
  mutable std::map<std::size_t, BasisPair> ypow_duals_;
  mutable std::optional<BasisPair> common_basis_;
};

}  // namespace rasl
