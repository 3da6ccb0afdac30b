#pragma once

#include <json.hpp>

#include "rasl/flowgraph.hpp"
#include "rasl/repair.hpp"
#include "rasl/tamo_barg.hpp"

namespace rasl {

using json = nlohmann::json;

// Elements serialize as hex strings for characteristic 2 and digit lists
// ("c0,c1,...") otherwise; both directions go through Field::to_string/parse.

inline json field_to_json(const Field& f) {
  return json{{"p", f.characteristic()}, {"N", f.degree()}, {"defining_poly", f.defining_poly()}};
}

inline const Field& field_from_json(const json& j) {
  auto poly = j.at("defining_poly").get<std::vector<std::uint64_t>>();
  return FieldRegistry::instance().get(j.at("p").get<std::uint64_t>(),
                                       j.at("N").get<std::size_t>(), poly);
}

inline json registry_entry_to_json(const Field& f, const std::vector<std::size_t>& subfields) {
  json j = field_to_json(f);
  j["subfields"] = subfields;
  return j;
}

inline json config_to_json(const CodeConfig& cfg) {
  const Field& f = *cfg.field;
  json classes = json::array();
  for (const auto& cls : cfg.good.classes) {
    json roots = json::array();
    for (const auto& r : cls.roots) roots.push_back(f.to_string(r));
    classes.push_back({{"y", f.to_string(cls.value)}, {"roots", roots}});
  }
  json j{{"field", field_to_json(f)},
         {"h_degree", cfg.w()},
         {"classes", classes},
         {"m1", cfg.m1},
         {"m2", cfg.m2},
         {"r", cfg.r}};
  if (cfg.tower) {
    json tower = json::array();
    for (const auto& e : *cfg.tower)
      tower.push_back({{"w_i", e.w_i}, {"subfield_degree", e.helper_subfield->sub_degree()}});
    j["tower"] = tower;
  } else {
    j["tower"] = nullptr;
  }
  j["common_subfield"] =
      cfg.common_subfield ? json(cfg.common_subfield->sub_degree()) : json(nullptr);
  return j;
}

inline CodeConfig config_from_json(const json& j) {
  const Field& f = field_from_json(j.at("field"));
  CodeConfig cfg;
  cfg.field = &f;
  cfg.good.h = Poly<Field>::monomial(f, j.at("h_degree").get<std::size_t>(), f.one());
  for (const auto& cls : j.at("classes")) {
    GoodPolynomial::Cls c;
    c.value = f.parse(cls.at("y").get<std::string>());
    for (const auto& r : cls.at("roots")) c.roots.push_back(f.parse(r.get<std::string>()));
    cfg.good.classes.push_back(std::move(c));
  }
  cfg.m1 = j.at("m1").get<std::size_t>();
  cfg.m2 = j.at("m2").get<std::size_t>();
  cfg.r = j.at("r").get<std::size_t>();
  if (j.contains("tower") && !j.at("tower").is_null()) {
    std::vector<TowerEntry> tower;
    for (const auto& e : j.at("tower")) {
      TowerEntry te;
      te.w_i = e.at("w_i").get<std::size_t>();
      te.helper_subfield =
          &FieldRegistry::instance().subfield(f, e.at("subfield_degree").get<std::size_t>());
      tower.push_back(te);
    }
    cfg.tower = std::move(tower);
  }
  if (j.contains("common_subfield") && !j.at("common_subfield").is_null())
    cfg.common_subfield =
        &FieldRegistry::instance().subfield(f, j.at("common_subfield").get<std::size_t>());
  cfg.validate();
  return cfg;
}

inline json message_to_json(const Field& f, const std::vector<Element>& a) {
  json out = json::array();
  for (const auto& e : a) out.push_back(f.to_string(e));
  return out;
}

inline std::vector<Element> message_from_json(const Field& f, const json& j) {
  std::vector<Element> out;
  for (const auto& e : j) out.push_back(f.parse(e.get<std::string>()));
  return out;
}

inline json codeword_to_json(const ArrayCodeword& cw) {
  const Field& f = *cw.config->field;
  json cols = json::array();
  for (const auto& col : cw.cols) {
    json c = json::array();
    for (const auto& e : col) c.push_back(f.to_string(e));
    cols.push_back(c);
  }
  return cols;
}

inline ArrayCodeword codeword_from_json(const CodeConfig& cfg, const json& j) {
  ArrayCodeword cw;
  cw.config = &cfg;
  for (const auto& col : j) {
    std::vector<Element> c;
    for (const auto& e : col) c.push_back(cfg.field->parse(e.get<std::string>()));
    cw.cols.push_back(std::move(c));
  }
  return cw;
}

inline json poly_to_json(const Poly<Field>& p) {
  json out = json::array();
  for (const auto& c : p.coeffs()) out.push_back(p.field().to_string(c));
  return out;
}

inline json grs_to_json(const GrsCode& code) {
  const Field& f = *code.field;
  json y = json::array(), alpha = json::array();
  for (const auto& e : code.locators) y.push_back(f.to_string(e));
  for (const auto& e : code.multipliers) alpha.push_back(f.to_string(e));
  return json{{"field", field_to_json(f)}, {"dim", code.dim}, {"locators", y}, {"multipliers", alpha}};
}

inline json transcript_to_json(const RepairTranscript& t, const Field& f) {
  json msgs = json::array();
  for (const auto& m : t.messages) {
    json symbols = json::array();
    const Field& sub = FieldRegistry::instance().get(f.characteristic(), m.subfield_degree);
    for (const auto& s : m.symbols) symbols.push_back(sub.to_string(s));
    msgs.push_back({{"helper", m.helper_rack},
                    {"subfield_degree", m.subfield_degree},
                    {"symbols", symbols}});
  }
  json rec = json::array();
  for (const auto& w : t.recovered)
    rec.push_back({{"stripe", w.stripe},
                   {"rack", w.rack},
                   {"position", w.position},
                   {"value", f.to_string(w.value)}});
  return json{{"scheme", scheme_name(t.scheme)},
              {"stripes", t.stripes},
              {"helpers", t.helpers},
              {"messages", msgs},
              {"recovered", rec}};
}

inline json report_to_json(const BandwidthReport& r) {
  json per = json::array();
  for (const auto& ph : r.per_helper)
    per.push_back({{"rack", ph.rack},
                   {"subfield_degree", ph.subfield_degree},
                   {"symbols", ph.symbols}});
  return json{{"per_helper", per},
              {"stripes", r.stripes},
              {"total_fq", r.total_fq.str()},
              {"per_stripe_fq", r.per_stripe_fq.str()},
              {"bound", r.bound.str()},
              {"optimal", r.optimal},
              {"per_helper_per_stripe_symbols", r.per_helper_per_stripe_symbols.str()},
              {"per_helper_bound_symbols", r.per_helper_bound_symbols.str()}};
}

inline json flowgraph_to_json(const flow::PartialFlowGraph& g) {
  json nodes = json::array();
  for (std::size_t i = 0; i < g.nodes().size(); ++i) nodes.push_back(g.node_label(i));
  json edges = json::array();
  for (const auto& e : g.edges())
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"capacity", e.infinite ? "inf" : e.capacity.str()}});
  return json{{"nodes", nodes}, {"edges", edges}};
}

}  // namespace rasl
