#include "zk/galh1.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

#include "zk/error.hpp"
#include "zk/poly.hpp"

namespace zk {

namespace {

std::vector<std::size_t> greedy_generators(std::size_t order, std::size_t identity, const TwistedGroup::MulFn& mul) {
  std::vector<char> in(order, 0);
  std::vector<std::size_t> reached{identity}, gens;
  in[identity] = 1;
  for (std::size_t cand = 0; cand < order && reached.size() < order; ++cand) {
    if (in[cand]) continue;
    gens.push_back(cand);
    for (std::size_t head = 0; head < reached.size(); ++head)
      for (std::size_t s : gens) {
        std::size_t y = mul(reached[head], s);
        if (!in[y]) {
          in[y] = 1;
          reached.push_back(y);
        }
      }
  }
  return gens;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1 % m, x = b % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

TwistedGroup::TwistedGroup(std::string name, std::size_t order, std::size_t identity, MulFn mul, std::vector<std::size_t> inv,
                           std::vector<std::size_t> frob, std::vector<std::size_t> gens, LabelFn label)
    : name_(std::move(name)), identity_(identity), mul_(std::move(mul)), inv_(std::move(inv)), frob_(std::move(frob)),
      gens_(std::move(gens)), label_(std::move(label)) {
  if (order == 0 || inv_.size() != order || frob_.size() != order || identity_ >= order)
    throw std::logic_error("twisted group: inconsistent sizes");
  std::vector<char> hit(order, 0);
  for (std::size_t x : frob_) {
    if (x >= order || hit[x]) throw DomainError("F is not a bijection on " + name_);
    hit[x] = 1;
  }
  if (gens_.empty() && order > 1) gens_ = greedy_generators(order, identity_, mul_);
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t s : gens_)
      if (frob_[mul_(a, s)] != mul_(frob_[a], frob_[s]))
        throw DomainError("F is not a homomorphism on " + name_ + " (fails at " + this->label(a) + " * " + this->label(s) + ")");
  std::vector<char> seen(order, 0);
  for (std::size_t a = 0; a < order; ++a) {
    if (seen[a]) continue;
    std::uint64_t len = 0;
    for (std::size_t x = a; !seen[x]; x = frob_[x]) {
      seen[x] = 1;
      ++len;
    }
    r_ = std::lcm(r_, len);
  }
}

std::size_t TwistedGroup::twisted_norm(std::size_t a) const {
  std::size_t acc = identity_, x = a;
  for (std::uint64_t i = 0; i < r_; ++i) {
    acc = mul(acc, x);
    x = frob(x);
  }
  return acc;
}

std::optional<std::size_t> TwistedGroup::index_of_parent(Id x) const {
  auto it = std::lower_bound(parent_ids_.begin(), parent_ids_.end(), x);
  if (it == parent_ids_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - parent_ids_.begin());
}

TwistedGroup twisted_subgroup(const Subgroup& a, const std::function<Id(Id)>& f, std::string name) {
  const GroupTable* g = &a.parent();
  auto members = std::make_shared<const std::vector<Id>>(a.members());
  auto pos = [members](Id x) -> std::optional<std::size_t> {
    auto it = std::lower_bound(members->begin(), members->end(), x);
    if (it == members->end() || *it != x) return std::nullopt;
    return static_cast<std::size_t>(it - members->begin());
  };
  const std::size_t n = members->size();
  std::vector<std::size_t> inv(n), frob(n), gens;
  for (std::size_t i = 0; i < n; ++i) {
    inv[i] = *pos(g->inv((*members)[i]));
    auto fi = pos(f((*members)[i]));
    if (!fi) throw DomainError("F does not preserve the subgroup (moves " + g->element((*members)[i]).to_string() + ")");
    frob[i] = *fi;
  }
  for (Id s : a.generators()) gens.push_back(*pos(s));
  auto mul = [g, members, pos](std::size_t x, std::size_t y) { return *pos(g->mul((*members)[x], (*members)[y])); };
  auto label = [g, members](std::size_t x) { return g->element((*members)[x]).to_string(); };
  if (name.empty()) name = "subgroup of " + g->name() + " of order " + std::to_string(n);
  TwistedGroup t(std::move(name), n, *pos(g->identity()), mul, std::move(inv), std::move(frob), std::move(gens), label);
  t.set_parent_ids(*members);
  return t;
}

TwistedGroup twisted_frobenius(const Subgroup& a, const Field& base) {
  const GroupTable& g = a.parent();
  if (g.field().p() != base.p() || g.field().m() % base.m() != 0)
    throw DomainError("F_" + base.name() + " is not a subfield of F_" + g.field().name());
  auto f = [&g, m = base.m()](Id x) { return g.id_of(frobenius(g.element(x), m)); };
  return twisted_subgroup(a, f, "frobenius(q=" + std::to_string(base.q()) + ") on subgroup of " + g.name() + " of order " +
                                    std::to_string(a.order()));
}

TwistedGroup twisted_identity(const Subgroup& a) {
  return twisted_subgroup(a, [](Id x) { return x; });
}

TwistedGroup twisted_quotient(const QuotientGroup& q, const std::function<Id(Id)>& f, std::string name) {
  const std::size_t n = q.order();
  std::vector<std::size_t> inv(n), frob(n);
  for (std::size_t k = 0; k < n; ++k) {
    inv[k] = q.inv(k);
    frob[k] = q.coset_of(f(q.coset_reps()[k]));
  }
  for (const auto& [x, k] : q.coset_map())
    if (q.coset_of(f(x)) != frob[k]) throw DomainError("F does not descend to the quotient");
  auto mul = [&q](std::size_t a, std::size_t b) { return q.mul(a, b); };
  if (name.empty()) name = "quotient of order " + std::to_string(n);
  return TwistedGroup(std::move(name), n, 0, mul, std::move(inv), std::move(frob), {}, {});
}

TwistedGroup twisted_cyclic(std::uint64_t n, std::uint64_t mult) {
  if (n == 0) throw UsageError("cyclic group order must be positive");
  if (std::gcd(mult % n, n) != 1 && n > 1) throw DomainError("multiplication by " + std::to_string(mult) + " is not an automorphism of Z/" + std::to_string(n));
  std::vector<std::size_t> inv(n), frob(n), gens;
  for (std::uint64_t k = 0; k < n; ++k) {
    inv[k] = (n - k) % n;
    frob[k] = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * mult) % n);
  }
  if (n > 1) gens.push_back(1);
  auto mul = [n](std::size_t a, std::size_t b) { return static_cast<std::size_t>((a + b) % n); };
  return TwistedGroup("Z/" + std::to_string(n) + " with k -> " + std::to_string(mult) + "k", n, 0, mul, std::move(inv),
                      std::move(frob), std::move(gens), {});
}

TwistedGroup twisted_mu_n(const Field& big, std::uint64_t n, const Field& base) {
  if (n == 0) throw UsageError("mu_n needs n >= 1");
  if (big.p() != base.p() || big.m() % base.m() != 0)
    throw DomainError("F_" + base.name() + " is not a subfield of F_" + big.name());
  const std::uint64_t d = std::gcd<std::uint64_t>(n, big.q() - 1);
  const std::uint64_t step = (big.q() - 1) / d;
  auto elems = std::make_shared<std::vector<Elem>>();
  for (std::uint64_t k = 0; k < d; ++k) elems->push_back(big.exp(k * step));
  std::sort(elems->begin(), elems->end());
  auto pos = [elems](Elem x) {
    return static_cast<std::size_t>(std::lower_bound(elems->begin(), elems->end(), x) - elems->begin());
  };
  std::vector<std::size_t> inv(d), frob(d);
  for (std::size_t i = 0; i < d; ++i) {
    inv[i] = pos(big.inv((*elems)[i]));
    frob[i] = pos(big.pow((*elems)[i], base.q()));
  }
  const Field* bf = &big;
  auto mul = [bf, elems, pos](std::size_t a, std::size_t b) { return pos(bf->mul((*elems)[a], (*elems)[b])); };
  auto label = [elems](std::size_t a) { return std::to_string((*elems)[a]); };
  std::vector<std::size_t> gens;
  if (d > 1) gens.push_back(pos(big.exp(step)));
  return TwistedGroup("mu_" + std::to_string(n) + " in F_" + big.name() + " with x -> x^" + std::to_string(base.q()), d,
                      pos(1), mul, std::move(inv), std::move(frob), std::move(gens), label);
}

TwistedClassSet twisted_classes(const TwistedGroup& t) {
  const std::size_t n = t.order();
  TwistedClassSet out;
  out.class_of.assign(n, ~std::size_t{0});
  for (std::size_t a = 0; a < n; ++a) {
    if (out.class_of[a] != ~std::size_t{0}) continue;
    const std::size_t cls = out.reps.size();
    out.reps.push_back(a);
    std::size_t size = 0;
    std::deque<std::size_t> queue{a};
    out.class_of[a] = cls;
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      ++size;
      for (std::size_t s : t.generators()) {
        const std::size_t y = t.act(s, x);
        if (out.class_of[y] == ~std::size_t{0}) {
          out.class_of[y] = cls;
          queue.push_back(y);
        }
      }
    }
    out.sizes.push_back(size);
    out.cocycle.push_back(t.twisted_norm(a) == t.identity());
  }
  return out;
}

std::vector<std::size_t> twisted_trivial_class(const TwistedGroup& t) {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < t.order(); ++b) out.push_back(t.act(b, t.identity()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool cocycle_check(const Cocycle& c) { return c.ambient->twisted_norm(c.value) == c.ambient->identity(); }

std::optional<Mat> eigenbasis(const Mat& x, const Field& big) {
  const Mat xb = &x.field() == &big ? x : embed(x, big);
  const Poly cp = charpoly(xb);
  const int n = xb.n();
  std::vector<std::vector<Elem>> cols;
  for (Elem lambda = 0; lambda < big.q() && static_cast<int>(cols.size()) < n; ++lambda) {
    if (poly::eval(big, cp, lambda) != 0) continue;
    Mat m = xb - Mat::scalar(big, n, lambda);
    auto ns = linalg::nullspace(big, std::vector<Elem>(m.entries().begin(), m.entries().end()), n, n);
    for (auto& v : ns) cols.push_back(std::move(v));
  }
  if (static_cast<int>(cols.size()) != n) return std::nullopt;
  Mat a(big, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cols[j][i];
  return a;
}

FormCocycle cocycle_of_form(const FamilySpec& fam, const Field& base, std::uint32_t r, const Subgroup& zg, const Mat& a) {
  if (r == 0) throw UsageError("extension degree must be positive");
  const Field& big = make_field(base.p(), base.m() * r);
  if (&a.field() != &big) throw DomainError("conjugator must be a matrix over F_" + big.name());
  if (det(a) == 0) throw DomainError("conjugator is singular");
  if (!family_contains(fam, a)) throw DomainError("conjugator is not in " + fam.to_string() + " over F_" + big.name());

  FormCocycle out;
  out.a = a;
  std::shared_ptr<const GroupTable> ext = instantiate(fam, big);
  out.ext = ext;
  const GroupTable& g = *ext;
  std::vector<Id> zids;
  for (Id z : zg.members()) zids.push_back(g.id_of(embed(zg.parent().element(z), big)));
  const Subgroup rational(g, std::move(zids));
  out.zg_ext = std::make_shared<const Subgroup>(centralizer_of(g, centralizer_of(g, rational)));

  const Mat ainv = inverse(a);
  std::set<Mat> form, form_frob;
  for (Id z : out.zg_ext->members()) {
    Mat h = a * g.element(z) * ainv;
    form_frob.insert(frobenius(h, base.m()));
    form.insert(std::move(h));
  }
  if (form != form_frob) throw DomainError("the form a Zg a^-1 is not defined over F_" + base.name());

  out.value = ainv * frobenius(a, base.m());
  out.normalizer = std::make_shared<const Subgroup>(normalizer(g, *out.zg_ext));
  const Id cid = g.id_of(out.value);
  out.in_normalizer = out.normalizer->contains(cid);
  if (!out.in_normalizer) throw std::logic_error("a^-1 Frob(a) left the normalizer of Zg");
  out.in_zg = out.zg_ext->contains(cid);
  auto tw = std::make_shared<const TwistedGroup>(twisted_frobenius(*out.normalizer, base));
  out.cocycle.ambient = tw;
  out.cocycle.value = *tw->index_of_parent(cid);
  const TwistedClassSet cls = twisted_classes(*tw);
  out.twisted_class = cls.class_of[out.cocycle.value];
  out.trivial_class = out.twisted_class == cls.class_of[tw->identity()];
  if (out.in_zg) {
    const TwistedGroup tz = twisted_frobenius(*out.zg_ext, base);
    const TwistedClassSet zc = twisted_classes(tz);
    out.trivial_in_zg = zc.class_of[*tz.index_of_parent(cid)] == zc.class_of[tz.identity()];
  }
  return out;
}

H1MuN h1_mu_n(std::uint64_t q, std::uint64_t n, std::uint32_t r) {
  if (n == 0) throw UsageError("h1_mu_n needs n >= 1");
  const Field& base = field_of_order(q);
  H1MuN out;
  out.q = q;
  out.n = n;
  out.n_prime = n;
  while (out.n_prime % base.p() == 0) out.n_prime /= base.p();
  std::uint32_t r0 = 1;
  while (powmod(q, r0, out.n_prime) != 1 % out.n_prime) ++r0;
  if (r == 0) r = r0;
  else if (powmod(q, r, out.n_prime) != 1 % out.n_prime)
    throw DomainError("mu_" + std::to_string(n) + " is not realized over F_" + std::to_string(q) + "^" + std::to_string(r));
  out.r = r;
  out.gcd_count = std::gcd<std::uint64_t>(n, q - 1);
  out.power_class_count = power_class_count(base, static_cast<std::uint32_t>(n)).size;

  auto realize = [&](std::uint32_t deg, bool& in_field) {
    const std::uint64_t m = std::uint64_t{base.m()} * deg;
    if (m <= 64 && checked_pow(base.p(), static_cast<std::uint32_t>(m), limits().max_field)) {
      in_field = true;
      return twisted_mu_n(make_field(base.p(), static_cast<std::uint32_t>(m)), n, base);
    }
    in_field = false;
    return twisted_cyclic(out.n_prime, q);
  };
  const TwistedGroup t = realize(r, out.realized_in_field);
  const TwistedClassSet cls = twisted_classes(t);
  out.twisted_count = cls.size();
  for (std::size_t rep : cls.reps) out.reps.push_back(rep);
  bool unused = false;
  out.inflated_count = twisted_classes(realize(2 * r, unused)).size();
  return out;
}

std::vector<std::size_t> kernel_under_map(const TwistedGroup& t, const TwistedGroup& ambient,
                                          const std::function<std::size_t(std::size_t)>& inclusion) {
  for (std::size_t x = 0; x < t.order(); ++x)
    if (inclusion(t.frob(x)) != ambient.frob(inclusion(x))) throw DomainError("map is not F-equivariant at " + t.label(x));
  std::vector<char> trivial(ambient.order(), 0);
  for (std::size_t y : twisted_trivial_class(ambient)) trivial[y] = 1;
  const TwistedClassSet cls = twisted_classes(t);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < cls.size(); ++k)
    if (trivial[inclusion(cls.reps[k])]) out.push_back(k);
  return out;
}

}  // namespace zk
