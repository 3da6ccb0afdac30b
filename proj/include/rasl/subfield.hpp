#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <vector>

#include "rasl/field.hpp"
#include "rasl/poly.hpp"
#include "rasl/roots.hpp"

namespace rasl {

// Embedding of GF(p^d) into GF(p^N), d | N, anchored at a root of the
// subfield's defining polynomial found inside the parent.  Handles are built
// once (by the registry) and then shared read-only.
class SubfieldHandle {
 public:
  SubfieldHandle(const Field& parent, const Field& sub, std::uint64_t seed)
      : parent_(&parent), sub_(&sub) {
    if (parent.characteristic() != sub.characteristic())
      throw std::invalid_argument("SubfieldHandle: characteristic mismatch");
    if (parent.degree() % sub.degree() != 0)
      throw std::invalid_argument("SubfieldHandle: subfield degree does not divide N");
    const std::size_t d = sub.degree(), N = parent.degree();

    if (d == 1) {
      rho_ = parent.zero();
    } else if (d == N && sub.defining_poly() == parent.defining_poly()) {
      rho_ = parent.gen();
    } else {
      // Lift the subfield's defining polynomial and find one root in the parent.
      std::vector<Element> lifted;
      for (auto c : sub.defining_poly()) lifted.push_back(parent.from_int(c));
      rho_ = poly_one_root(parent, Poly<Field>(parent, lifted), seed);
    }

    rho_pows_.resize(d);
    rho_pows_[0] = parent.one();
    for (std::size_t k = 1; k < d; ++k) rho_pows_[k] = parent.mul(rho_pows_[k - 1], rho_);

    // projection solver: parent coords = M * sub coords, M columns = rho^k
    PrimeMatrix M(N, d, parent.characteristic());
    for (std::size_t k = 0; k < d; ++k) {
      auto col = parent.coords(rho_pows_[k]);
      for (std::size_t r = 0; r < N; ++r) M.at(r, k) = col[r];
    }
    proj_ = PrimeSolver(M);
    if (proj_.rank() != d) throw std::logic_error("SubfieldHandle: embedding not injective");

    // decomposition solver over the basis {gen^j * rho^k}
    const std::size_t T = N / d;
    PrimeMatrix D(N, N, parent.characteristic());
    Element gp = parent.one();
    for (std::size_t j = 0; j < T; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        auto col = parent.coords(parent.mul(gp, rho_pows_[k]));
        for (std::size_t r = 0; r < N; ++r) D.at(r, j * d + k) = col[r];
      }
      gp = parent.mul(gp, parent.gen());
    }
    decomp_ = PrimeSolver(D);
    if (decomp_.rank() != N) throw std::logic_error("SubfieldHandle: decomposition basis singular");
  }

  const Field& parent() const { return *parent_; }
  const Field& sub() const { return *sub_; }
  std::size_t sub_degree() const { return sub_->degree(); }
  std::size_t index() const { return parent_->degree() / sub_->degree(); }  // [parent : sub]
  const Element& generator_image() const { return rho_; }

  Element embed(const Element& x) const {
    sub_->check(x);
    auto c = sub_->coords(x);
    Element acc = parent_->zero();
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!c[k]) continue;
      Element term = rho_pows_[k];
      if (c[k] != 1) term = scale_prime(term, c[k]);
      acc = parent_->add(acc, term);
    }
    return acc;
  }

  bool contains(const Element& x) const {
    parent_->check(x);
    return proj_.solve(parent_->coords(x)).has_value();
  }

  Element project(const Element& x) const {
    parent_->check(x);
    auto sol = proj_.solve(parent_->coords(x));
    if (!sol) throw std::domain_error("SubfieldHandle: element not in subfield image");
    return sub_->from_coords(*sol);
  }

  // Relative trace down to this subfield; the value stays in the parent
  // representation (and always lies in the subfield image).
  Element trace(const Element& x) const {
    parent_->check(x);
    Element acc = x, cur = x;
    for (std::size_t j = 1; j < index(); ++j) {
      cur = parent_->frobenius(cur, sub_->degree());
      acc = parent_->add(acc, cur);
    }
    return acc;
  }

  Element trace_project(const Element& x) const { return project(trace(x)); }

  // Coordinates of x over the subfield w.r.t. the basis {gen^j : j < index()}.
  // Entries are returned in the parent representation, inside the sub image.
  std::vector<Element> decompose(const Element& x) const {
    parent_->check(x);
    auto sol = decomp_.solve(parent_->coords(x));
    if (!sol) throw std::logic_error("SubfieldHandle: decomposition failed");
    const std::size_t d = sub_->degree(), T = index();
    std::vector<Element> out(T, parent_->zero());
    for (std::size_t j = 0; j < T; ++j)
      for (std::size_t k = 0; k < d; ++k) {
        std::uint64_t digit = (*sol)[j * d + k];
        if (!digit) continue;
        out[j] = parent_->add(out[j], scale_prime(rho_pows_[k], digit));
      }
    return out;
  }

 private:
  Element scale_prime(const Element& x, std::uint64_t c) const {
    // multiply by a prime-field scalar
    Element acc = parent_->zero();
    Element cur = x;
    c %= parent_->characteristic();
    while (c) {
      if (c & 1) acc = parent_->add(acc, cur);
      cur = parent_->add(cur, cur);
      c >>= 1;
    }
    return acc;
  }

  const Field* parent_;
  const Field* sub_;
  Element rho_;
  std::vector<Element> rho_pows_;
  PrimeSolver proj_;
  PrimeSolver decomp_;
};

// A basis of the parent over a subfield together with its trace-dual basis:
// trace(basis[i] * dual[j]) = [i == j].
struct BasisPair {
  const SubfieldHandle* tower = nullptr;
  std::vector<Element> basis;
  std::vector<Element> dual;
};

// Rank of a set of parent elements over the subfield (entries decomposed over
// the canonical basis, then field Gaussian elimination).
inline std::size_t rank_over_subfield(const SubfieldHandle& h, const std::vector<Element>& v) {
  const Field& f = h.parent();
  std::vector<std::vector<Element>> rows;
  for (const auto& e : v) rows.push_back(h.decompose(e));
  std::size_t rank = 0;
  std::size_t cols = h.index();
  std::vector<std::size_t> order(rows.size());
  for (std::size_t c = 0, r = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && f.is_zero(rows[piv][c])) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    Element inv = f.inv(rows[r][c]);
    for (std::size_t cc = 0; cc < cols; ++cc) rows[r][cc] = f.mul(rows[r][cc], inv);
    for (std::size_t rr = 0; rr < rows.size(); ++rr) {
      if (rr == r || f.is_zero(rows[rr][c])) continue;
      Element factor = rows[rr][c];
      for (std::size_t cc = 0; cc < cols; ++cc)
        rows[rr][cc] = f.sub(rows[rr][cc], f.mul(factor, rows[r][cc]));
    }
    ++r;
    ++rank;
  }
  (void)order;
  return rank;
}

// The unique dual basis, from the inverse of the trace Gram matrix.  Dependent
// input is reported with an explicit vanishing combination.
inline BasisPair dual_basis(const SubfieldHandle& h, const std::vector<Element>& basis) {
  const Field& f = h.parent();
  const std::size_t T = h.index();
  if (basis.size() != T)
    throw std::invalid_argument("dual_basis: need exactly [parent:sub] elements");

  std::vector<std::vector<Element>> rows;
  for (const auto& e : basis) rows.push_back(h.decompose(e));
  if (auto kernel = left_kernel_vector(f, rows)) {
    std::ostringstream os;
    os << "dual_basis: input is dependent; vanishing combination:";
    for (std::size_t i = 0; i < kernel->size(); ++i)
      if (!f.is_zero((*kernel)[i])) os << " " << f.to_string((*kernel)[i]) << "*b" << i;
    throw std::invalid_argument(os.str());
  }

  std::vector<std::vector<Element>> gram(T, std::vector<Element>(T, f.zero()));
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = i; j < T; ++j)
      gram[i][j] = gram[j][i] = h.trace(f.mul(basis[i], basis[j]));
  auto inv = invert_matrix(f, gram);
  if (!inv) throw std::logic_error("dual_basis: Gram matrix singular for independent input");

  BasisPair out;
  out.tower = &h;
  out.basis = basis;
  out.dual.assign(T, f.zero());
  for (std::size_t j = 0; j < T; ++j)
    for (std::size_t k = 0; k < T; ++k)
      out.dual[j] = f.add(out.dual[j], f.mul((*inv)[k][j], basis[k]));

  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = 0; j < T; ++j) {
      Element t = h.trace(f.mul(out.basis[i], out.dual[j]));
      if (!(t == (i == j ? f.one() : f.zero())))
        throw std::logic_error("dual_basis: verification failed");
    }
  return out;
}

// Multipliers gamma_0..gamma_{T/w_star-1} making {y^u * gamma_t} a basis of
// the parent over the subfield.  Existence is generic; a short seeded search
// suffices in practice.
inline std::vector<Element> find_independent_multipliers(const SubfieldHandle& h,
                                                         const Element& y, std::size_t w_star,
                                                         std::uint64_t rng_seed,
                                                         std::size_t budget = 64) {
  const Field& f = h.parent();
  const std::size_t T = h.index();
  if (w_star == 0 || T % w_star != 0)
    throw std::invalid_argument("find_independent_multipliers: w_star must divide [parent:sub]");
  const std::size_t w = T / w_star;

  std::vector<Element> ypow(w_star);
  ypow[0] = f.one();
  for (std::size_t u = 1; u < w_star; ++u) ypow[u] = f.mul(ypow[u - 1], y);
  if (rank_over_subfield(h, ypow) != w_star)
    throw std::invalid_argument("find_independent_multipliers: powers of y are dependent");

  Rng rng(rng_seed);
  auto try_set = [&](const std::vector<Element>& gamma) -> bool {
    std::vector<Element> all;
    all.reserve(T);
    for (const auto& g : gamma)
      for (std::size_t u = 0; u < w_star; ++u) all.push_back(f.mul(ypow[u], g));
    return rank_over_subfield(h, all) == T;
  };

  if (w == 1) {
    std::vector<Element> ones{f.one()};
    if (try_set(ones)) return ones;
  }
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    std::vector<Element> gamma(w);
    for (auto& g : gamma) g = f.random(rng);
    if (try_set(gamma)) return gamma;
  }
  throw std::runtime_error("find_independent_multipliers: retry budget exhausted");
}

// Process-wide home of canonical fields and subfield embeddings.  Field
// pointers handed out stay valid for the process lifetime.
class FieldRegistry {
 public:
  static FieldRegistry& instance() {
    static FieldRegistry reg;
    return reg;
  }

  // Canonical field: deterministically chosen defining polynomial.
  const Field& get(std::uint64_t p, std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(p, n);
    auto it = canonical_.find(key);
    if (it != canonical_.end()) return *it->second;
    auto poly = Field::find_irreducible(p, n);
    auto* f = store(p, n, poly);
    canonical_[key] = f;
    return *f;
  }

  // Field with an explicit defining polynomial (validated).
  const Field& get(std::uint64_t p, std::size_t n, const std::vector<std::uint64_t>& poly) {
    std::lock_guard<std::mutex> lock(mu_);
    if (n > 1 && !Field::is_irreducible(p, poly))
      throw std::invalid_argument("FieldRegistry: polynomial is not irreducible");
    return *store(p, n, poly);
  }

  const SubfieldHandle& subfield(const Field& parent, std::size_t d) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(&parent, d);
    auto it = subs_.find(key);
    if (it != subs_.end()) return *it->second;
    const Field& sub = get_unlocked(parent.characteristic(), d);
    // fixed derivation keeps embeddings reproducible across runs
    std::uint64_t seed = 0x5eedULL ^ (parent.characteristic() << 32) ^
                         (std::uint64_t(parent.degree()) << 16) ^ d;
    auto handle = std::make_unique<SubfieldHandle>(parent, sub, seed);
    auto* ptr = handle.get();
    subs_[key] = std::move(handle);
    return *ptr;
  }

 private:
  FieldRegistry() = default;

  const Field& get_unlocked(std::uint64_t p, std::size_t n) {
    auto key = std::make_pair(p, n);
    auto it = canonical_.find(key);
    if (it != canonical_.end()) return *it->second;
    auto poly = Field::find_irreducible(p, n);
    auto* f = store(p, n, poly);
    canonical_[key] = f;
    return *f;
  }

  Field* store(std::uint64_t p, std::size_t n, const std::vector<std::uint64_t>& poly) {
    auto key = std::make_tuple(p, n, poly);
    auto it = fields_.find(key);
    if (it != fields_.end()) return it->second.get();
    auto f = std::make_unique<Field>(p, n, poly);
    auto* ptr = f.get();
    fields_[key] = std::move(f);
    return ptr;
  }

  std::mutex mu_;
  std::map<std::tuple<std::uint64_t, std::size_t, std::vector<std::uint64_t>>,
           std::unique_ptr<Field>>
      fields_;
  std::map<std::pair<std::uint64_t, std::size_t>, Field*> canonical_;
  std::map<std::pair<const Field*, std::size_t>, std::unique_ptr<SubfieldHandle>> subs_;
};

}  // namespace rasl
