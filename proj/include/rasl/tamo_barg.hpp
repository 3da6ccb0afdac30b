#pragma once

#include <optional>
#include <set>
#include <vector>

#include "rasl/bounds.hpp"
#include "rasl/grs.hpp"
#include "rasl/roots.hpp"
#include "rasl/subfield.hpp"

namespace rasl {

// h together with its evaluation classes: h is constant (= value) on each
// class, every class has exactly deg(h) roots, and classes are disjoint.
struct GoodPolynomial {
  struct Cls {
    Element value;
    std::vector<Element> roots;
  };

  Poly<Field> h;
  std::vector<Cls> classes;

  std::size_t w() const { return *h.degree(); }

  void verify(const Field& f) const {
    if (h.is_zero() || *h.degree() < 1)
      throw std::invalid_argument("GoodPolynomial: h must be nonconstant");
    std::set<std::vector<std::uint64_t>> seen_values, seen_roots;
    for (const auto& cls : classes) {
      if (!seen_values.insert(f.coords(cls.value)).second)
        throw std::invalid_argument("GoodPolynomial: duplicate class value");
      if (cls.roots.size() != w())
        throw std::invalid_argument("GoodPolynomial: class is not full");
      for (const auto& beta : cls.roots) {
        if (!(h.eval(beta) == cls.value))
          throw std::invalid_argument("GoodPolynomial: root does not evaluate to class value");
        if (!seen_roots.insert(f.coords(beta)).second)
          throw std::invalid_argument("GoodPolynomial: classes are not disjoint");
      }
      // full class: exactly w preimages
      if (roots_of_shifted(f, h, cls.value).size() != w())
        throw std::invalid_argument("GoodPolynomial: |roots(y)| != deg h");
    }
  }
};

// h = x^w with the requested class values; every value must be a w-th power
// with a full root set.
inline GoodPolynomial build_monomial_good_poly(const Field& f, std::size_t w,
                                               const std::vector<Element>& values) {
  if (w == 0) throw std::invalid_argument("build_monomial_good_poly: w must be positive");
  GoodPolynomial g{Poly<Field>::monomial(f, w, f.one()), {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Element& y = values[i];
    if (f.is_zero(y))
      throw std::invalid_argument("build_monomial_good_poly: class value 0 not allowed");
    auto roots = nth_roots(f, y, w);
    if (roots.size() != w)
      throw std::invalid_argument("build_monomial_good_poly: value at position " +
                                  std::to_string(i) + " (" + f.to_string(y) +
                                  ") is not a w-th power with a full class");
    g.classes.push_back({y, std::move(roots)});
  }
  g.verify(f);
  return g;
}

// Per-class tower data used by the cross-rack repair schemes: the helper
// subfield contains every *other* class value, and w_i is the index of the
// big field over it.
struct TowerEntry {
  const SubfieldHandle* helper_subfield = nullptr;
  std::size_t w_i = 0;
};

// A rack-aware array code instance: class i is rack (column) i, information
// classes first.  Immutable after construction; validate() is run by every
// factory below.
struct CodeConfig {
  const Field* field = nullptr;
  GoodPolynomial good;
  std::size_t m1 = 0, m2 = 0, r = 0;
  std::optional<std::vector<TowerEntry>> tower;
  const SubfieldHandle* common_subfield = nullptr;

  std::size_t w() const { return good.w(); }
  std::size_t L() const { return w(); }
  std::size_t m() const { return m1 + m2; }
  std::size_t n() const { return m() * w(); }
  std::size_t k() const { return m1 * r; }
  std::size_t K() const { return m1; }
  std::size_t delta() const { return w() - r + 1; }

  const Element& class_value(std::size_t i) const { return good.classes[i].value; }
  const std::vector<Element>& class_roots(std::size_t i) const { return good.classes[i].roots; }

  Poly<Field> class_modulus(std::size_t i) const {
    Poly<Field> res = good.h - Poly<Field>::constant(*field, class_value(i));
    return res;
  }

  std::vector<Element> class_values() const {
    std::vector<Element> ys;
    for (const auto& c : good.classes) ys.push_back(c.value);
    return ys;
  }

  void validate() const {
    if (!field) throw std::invalid_argument("CodeConfig: missing field");
    good.verify(*field);
    if (m1 < 1) throw std::invalid_argument("CodeConfig: need at least one information class");
    if (r < 1 || r >= w()) throw std::invalid_argument("CodeConfig: need 0 < r < w");
    if (good.classes.size() != m())
      throw std::invalid_argument("CodeConfig: class count must equal m1 + m2");
    // the two closed forms of the target distance must agree
    long long closed = (long long)((m2 + 1) * w() - r + 1);
    long long singleton = bounds::singleton_locality_bound((long long)n(), (long long)k(),
                                                           (long long)r, (long long)delta());
    if (closed != singleton)
      throw std::logic_error("CodeConfig: distance identity violated");
    if (tower) {
      if (tower->size() != m())
        throw std::invalid_argument("CodeConfig: tower entry per class required");
      for (std::size_t i = 0; i < m(); ++i) {
        const auto& entry = (*tower)[i];
        if (!entry.helper_subfield)
          throw std::invalid_argument("CodeConfig: missing helper subfield");
        const auto& sub = *entry.helper_subfield;
        if (sub.index() != entry.w_i)
          throw std::invalid_argument("CodeConfig: w_i does not match subfield index");
        if (sub.contains(class_value(i)))
          throw std::invalid_argument("CodeConfig: y_i must lie outside its helper subfield");
        if (field->element_degree(class_value(i)) != entry.w_i)
          throw std::invalid_argument("CodeConfig: class value degree mismatch");
        for (std::size_t j = 0; j < m(); ++j)
          if (j != i && !sub.contains(class_value(j)))
            throw std::invalid_argument(
                "CodeConfig: helper subfield must contain all other class values");
      }
    }
    if (common_subfield && &common_subfield->parent() != field)
      throw std::invalid_argument("CodeConfig: common subfield of wrong field");
  }
};

// L x m matrix of evaluations, one column per rack.
struct ArrayCodeword {
  const CodeConfig* config = nullptr;
  std::vector<std::vector<Element>> cols;  // cols[i][row]

  bool operator==(const ArrayCodeword& o) const { return cols == o.cols; }
};

// The r coefficient rows of the remainder decomposition: row j is a
// polynomial in y of degree <= m1 - 1 with
//   F_a mod (h - y) = sum_j row_j(y) x^j.
struct RemainderTable {
  const CodeConfig* config = nullptr;
  std::vector<Poly<Field>> rows;

  const Poly<Field>& row(std::size_t j) const { return rows[j]; }

  // residue polynomial of class i: sum_j row_j(y_i) x^j
  Poly<Field> class_poly(const Element& y) const {
    const Field& f = *config->field;
    std::vector<Element> c(config->r, f.zero());
    for (std::size_t j = 0; j < config->r; ++j) c[j] = rows[j].eval(y);
    return Poly<Field>(f, c);
  }
};

// Iterated division by h: F = h U1 + R1, U1 = h U2 + R2, ...  Coefficient j of
// R_{i+1} (and of the final quotient) becomes the y^i (resp. y^{m1-1})
// coefficient of row j.  Rows j >= r must vanish; anything else is not a
// codeword of this configuration.
inline RemainderTable remainder_decompose(const CodeConfig& cfg, const Poly<Field>& F) {
  const Field& f = *cfg.field;
  if (!F.is_zero() && *F.degree() >= cfg.m1 * cfg.w())
    throw std::invalid_argument("remainder_decompose: degree must be below m1*w");
  std::vector<Poly<Field>> layers;  // R_1, ..., R_{m1-1}, U_{m1-1}
  Poly<Field> u = F;
  for (std::size_t i = 0; i + 1 < cfg.m1; ++i) {
    auto [q, rem] = poly_divmod(u, cfg.good.h);
    layers.push_back(rem);
    u = q;
  }
  layers.push_back(u);

  RemainderTable table;
  table.config = &cfg;
  for (std::size_t j = 0; j < cfg.w(); ++j) {
    std::vector<Element> ycoeffs(cfg.m1, f.zero());
    for (std::size_t i = 0; i < cfg.m1; ++i) ycoeffs[i] = layers[i].coeff(j);
    Poly<Field> row(f, ycoeffs);
    if (j >= cfg.r) {
      if (!row.is_zero())
        throw std::invalid_argument(
            "remainder_decompose: nonzero coefficient row at index >= r (not a codeword)");
    } else {
      table.rows.push_back(row);
    }
  }
  return table;
}

// Interpolate the information classes, stitch them together with the CRT, and
// evaluate on every class (parity classes included).
inline std::pair<ArrayCodeword, RemainderTable> encode(const CodeConfig& cfg,
                                                       const std::vector<Element>& a) {
  const Field& f = *cfg.field;
  if (a.size() != cfg.k()) throw std::invalid_argument("encode: message length must be k = m1*r");

  std::vector<std::pair<Poly<Field>, Poly<Field>>> congruences;
  for (std::size_t i = 0; i < cfg.m1; ++i) {
    std::vector<std::pair<Element, Element>> pts;
    for (std::size_t j = 0; j < cfg.r; ++j)
      pts.push_back({cfg.class_roots(i)[j], a[i * cfg.r + j]});
    congruences.push_back({cfg.class_modulus(i), poly_interpolate(f, pts)});
  }
  Poly<Field> F = crt_combine(f, congruences);

  RemainderTable table = remainder_decompose(cfg, F);
  ArrayCodeword cw;
  cw.config = &cfg;
  cw.cols.resize(cfg.m());
  for (std::size_t i = 0; i < cfg.m(); ++i) {
    Poly<Field> fi = table.class_poly(cfg.class_value(i));
    cw.cols[i].reserve(cfg.L());
    for (const auto& beta : cfg.class_roots(i)) cw.cols[i].push_back(fi.eval(beta));
  }
  return {std::move(cw), std::move(table)};
}

// Within-rack repair: any r survivors pin the degree-<r column polynomial.
// Survivor count below r is beyond locality and must escalate to a
// cross-rack scheme; surviving values off the interpolant mean corruption.
inline std::vector<Element> local_repair_column(
    const CodeConfig& cfg, std::size_t class_index,
    const std::vector<std::pair<std::size_t, Element>>& survivors,
    const std::set<std::size_t>& erased) {
  const Field& f = *cfg.field;
  if (erased.size() > cfg.delta() - 1)
    throw std::invalid_argument("local_repair_column: beyond locality");
  const auto& roots = cfg.class_roots(class_index);
  std::vector<std::pair<Element, Element>> pts;
  for (const auto& [pos, val] : survivors) {
    if (pos >= cfg.L()) throw std::invalid_argument("local_repair_column: bad position");
    if (erased.count(pos)) throw std::invalid_argument("local_repair_column: erased survivor");
    if (pts.size() < cfg.r) pts.push_back({roots[pos], val});
  }
  if (pts.size() < cfg.r) throw std::invalid_argument("local_repair_column: beyond locality");
  Poly<Field> fi = poly_interpolate(f, pts);
  for (const auto& [pos, val] : survivors)
    if (!(fi.eval(roots[pos]) == val))
      throw std::runtime_error("local_repair_column: survivor inconsistent (corruption)");
  std::vector<Element> column;
  column.reserve(cfg.L());
  for (std::size_t pos = 0; pos < cfg.L(); ++pos) column.push_back(fi.eval(roots[pos]));
  return column;
}

// Any K = m1 full columns determine the codeword: interpolate each column,
// CRT across their moduli, then read the message off the information classes.
inline std::vector<Element> decode_from_columns(
    const CodeConfig& cfg,
    const std::vector<std::pair<std::size_t, std::vector<Element>>>& columns) {
  const Field& f = *cfg.field;
  if (columns.size() != cfg.K())
    throw std::invalid_argument("decode_from_columns: need exactly K = m1 full columns");
  std::set<std::size_t> seen;
  std::vector<std::pair<Poly<Field>, Poly<Field>>> congruences;
  for (const auto& [ci, col] : columns) {
    if (ci >= cfg.m() || !seen.insert(ci).second)
      throw std::invalid_argument("decode_from_columns: bad or repeated column index");
    if (col.size() != cfg.L())
      throw std::invalid_argument("decode_from_columns: column must be full");
    std::vector<std::pair<Element, Element>> pts;
    for (std::size_t row = 0; row < cfg.r; ++row)
      pts.push_back({cfg.class_roots(ci)[row], col[row]});
    Poly<Field> fi = poly_interpolate(f, pts);
    for (std::size_t row = cfg.r; row < cfg.L(); ++row)
      if (!(fi.eval(cfg.class_roots(ci)[row]) == col[row]))
        throw std::runtime_error("decode_from_columns: column inconsistent (corruption)");
    congruences.push_back({cfg.class_modulus(ci), fi});
  }
  Poly<Field> F = crt_combine(f, congruences);
  std::vector<Element> a;
  a.reserve(cfg.k());
  for (std::size_t i = 0; i < cfg.m1; ++i) {
    Poly<Field> fi = poly_mod(F, cfg.class_modulus(i));
    for (std::size_t j = 0; j < cfg.r; ++j) a.push_back(fi.eval(cfg.class_roots(i)[j]));
  }
  return a;
}

// Exhaustive minimum symbol weight over all nonzero messages, via linearity:
// precompute the k basis codewords and walk all q^k - 1 combinations.
inline std::size_t min_distance_bruteforce(const CodeConfig& cfg, std::uint64_t guard = 1000000) {
  const Field& f = *cfg.field;
  BigUint total = BigUint::pow_small(f.characteristic(), f.degree() * cfg.k());
  if (!total.fits_u64() || total.as_u64() > guard)
    throw std::invalid_argument("min_distance_bruteforce: q^k exceeds guard");
  const std::uint64_t q = f.order().as_u64();
  const std::size_t kk = cfg.k(), n = cfg.n();

  std::vector<std::vector<Element>> basis_rows;  // flattened codewords of unit messages
  for (std::size_t t = 0; t < kk; ++t) {
    std::vector<Element> msg(kk, f.zero());
    msg[t] = f.one();
    auto [cw, table] = encode(cfg, msg);
    std::vector<Element> flat;
    for (const auto& col : cw.cols)
      for (const auto& e : col) flat.push_back(e);
    basis_rows.push_back(std::move(flat));
  }

  std::size_t best = n + 1;
  std::vector<std::uint64_t> digits(kk, 0);
  std::vector<Element> acc(n, f.zero());
  // walk messages in odometer order, updating the running combination
  while (true) {
    std::size_t pos = 0;
    while (pos < kk) {
      digits[pos]++;
      // adding one more copy of basis vector scaled by delta of digit => just add basis row
      for (std::size_t c = 0; c < n; ++c) acc[c] = f.add(acc[c], basis_rows[pos][c]);
      if (digits[pos] < q) break;
      digits[pos] = 0;
      ++pos;
    }
    if (pos == kk) break;
    std::size_t weight = 0;
    for (const auto& e : acc)
      if (!f.is_zero(e)) ++weight;
    if (weight > 0 && weight < best) best = weight;
  }
  return best;
}

// --- field tower instantiation -------------------------------------------

struct TowerSkeleton {
  const Field* field = nullptr;
  std::vector<std::size_t> degrees;
  std::vector<Element> ys;
  std::vector<std::vector<Element>> roots;   // w-th roots of each y
  std::vector<TowerEntry> entries;
};

// Realizes the compositum tower: y_i of exact degree d_i inside GF(p^N) with
// N = prod d_i (pairwise coprime), helper subfield GF(p^(N/d_i)).  Every
// hypothesis the repair schemes rely on is verified here rather than assumed.
inline TowerSkeleton instantiate_tower(std::uint64_t p, const std::vector<std::size_t>& degrees,
                                       std::uint64_t w, std::uint64_t rng_seed) {
  if (degrees.empty()) throw std::invalid_argument("instantiate_tower: no degrees");
  std::size_t N = 1;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 2) throw std::invalid_argument("instantiate_tower: degrees must be >= 2");
    for (std::size_t j = i + 1; j < degrees.size(); ++j) {
      std::size_t a = degrees[i], b = degrees[j];
      while (b) { auto t = a % b; a = b; b = t; }
      if (a != 1) throw std::invalid_argument("instantiate_tower: degrees must be pairwise coprime");
    }
    N *= degrees[i];
  }

  auto& reg = FieldRegistry::instance();
  const Field& f = reg.get(p, N);
  if (f.order_minus_one().mod_small(w) != 0)
    throw std::invalid_argument("instantiate_tower: w does not divide p^N - 1");

  TowerSkeleton sk;
  sk.field = &f;
  sk.degrees = degrees;
  Rng rng(rng_seed);

  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const std::size_t d = degrees[i];
    const auto& small = reg.subfield(f, d);
    const Field& fd = reg.get(p, d);
    std::uint64_t qd = fd.order().as_u64();

    // seeded scan order over the small field
    std::vector<std::uint64_t> order(qd);
    for (std::uint64_t v = 0; v < qd; ++v) order[v] = v;
    for (std::uint64_t v = qd; v-- > 1;) std::swap(order[v], order[rng.below(v + 1)]);

    bool found = false;
    for (auto idx : order) {
      if (idx == 0) continue;
      Element y = small.embed(fd.from_index(idx));
      if (f.element_degree(y) != d) continue;
      bool dup = false;
      for (const auto& prev : sk.ys)
        if (prev == y) dup = true;
      if (dup) continue;
      auto roots = nth_roots(f, y, w);
      if (roots.size() != w) continue;
      sk.ys.push_back(y);
      sk.roots.push_back(std::move(roots));
      found = true;
      break;
    }
    if (!found)
      throw std::runtime_error(
          "instantiate_tower: no admissible class value of degree " + std::to_string(d) +
          "; try different degrees");

    const auto& helper = reg.subfield(f, N / d);
    if (helper.index() != d) throw std::logic_error("instantiate_tower: index mismatch");
    sk.entries.push_back({&helper, d});
  }

  // cross-checks: each helper subfield must contain all the other values
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const auto& sub = *sk.entries[i].helper_subfield;
    if (sub.contains(sk.ys[i]))
      throw std::logic_error("instantiate_tower: y_i landed inside its helper subfield");
    for (std::size_t j = 0; j < degrees.size(); ++j)
      if (j != i && !sub.contains(sk.ys[j]))
        throw std::logic_error("instantiate_tower: tower compositum check failed");
  }
  return sk;
}

inline CodeConfig make_tower_config(const TowerSkeleton& sk, std::size_t m1, std::size_t m2,
                                    std::size_t r,
                                    std::optional<std::size_t> common_subfield_degree = {}) {
  if (m1 + m2 != sk.ys.size())
    throw std::invalid_argument("make_tower_config: m1 + m2 must equal the class count");
  CodeConfig cfg;
  cfg.field = sk.field;
  cfg.good.h = Poly<Field>::monomial(*sk.field, sk.roots[0].size(), sk.field->one());
  for (std::size_t i = 0; i < sk.ys.size(); ++i) cfg.good.classes.push_back({sk.ys[i], sk.roots[i]});
  cfg.m1 = m1;
  cfg.m2 = m2;
  cfg.r = r;
  cfg.tower = sk.entries;
  if (common_subfield_degree)
    cfg.common_subfield = &FieldRegistry::instance().subfield(*sk.field, *common_subfield_degree);
  cfg.validate();
  return cfg;
}

}  // namespace rasl
