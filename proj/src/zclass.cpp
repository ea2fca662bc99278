#include "zk/zclass.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "zk/error.hpp"
#include "zk/poly.hpp"

namespace zk {

namespace {

constexpr std::size_t kFingerprintCap = 100000;
constexpr std::size_t kCheckCap = 10000;

struct UnionFind {
  std::vector<std::size_t> up;
  explicit UnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (up[x] != x) x = up[x] = up[up[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) up[std::max(a, b)] = std::min(a, b);
  }
};

Fingerprint block_fingerprint(const Subgroup& z) {
  if (z.order() <= kFingerprintCap) return fingerprint(z);
  Fingerprint fp;
  fp.order = z.order();
  fp.abelian = z.is_abelian();
  fp.center_order = fp.abelian ? z.order() : center_of(z).order();
  return fp;
}

// Classes c meeting the center of Z(x) with |Z(c)| == |Z(x)|; these are
// exactly the classes z-equivalent to x. `admit` prunes candidates.
template <class Admit>
std::vector<std::pair<std::size_t, Id>> z_partner_classes(const GroupTable& g, const Subgroup& zx, Admit admit) {
  std::vector<std::pair<std::size_t, Id>> out;
  std::set<std::size_t> seen;
  const Subgroup cz = center_of(zx);
  for (Id c : cz.members()) {
    auto k = g.known_class(c);
    if (k && seen.count(*k)) continue;
    if (!admit(c)) continue;
    std::size_t cls = g.class_of(c);
    if (!seen.insert(cls).second) continue;
    if (g.centralizer_order(c) == zx.order()) out.emplace_back(cls, c);
  }
  return out;
}

Mat embed_into(const Mat& x, const Field& big) { return &x.field() == &big ? x : embed(x, big); }

bool fits_bound(const FamilySpec& fam, const Field& f) {
  auto ord = family_order(fam, f);
  return ord && *ord <= limits().max_group;
}

}  // namespace

std::optional<std::size_t> ZPartition::block_of_class(std::size_t cls) const {
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (std::find(blocks[b].classes.begin(), blocks[b].classes.end(), cls) != blocks[b].classes.end()) return b;
  return std::nullopt;
}

ZPartition z_partition(const GroupTable& g, const ElementFilter& filter) {
  ZPartition out;
  out.group = &g;
  out.filtered = static_cast<bool>(filter);
  if (!filter) g.class_count_all();

  std::vector<std::size_t> selected;  // class indices, by ascending representative
  for (Id i = 0; i < g.order(); ++i) {
    auto k = g.known_class(i);
    if (k && g.class_info(*k).rep != i) continue;
    if (filter && !filter(g, i)) continue;
    selected.push_back(g.class_of(i));
  }
  out.classes_considered = selected.size();

  std::map<std::size_t, std::size_t> slot;
  for (std::size_t s = 0; s < selected.size(); ++s) slot[selected[s]] = s;
  UnionFind uf(selected.size());
  std::vector<std::shared_ptr<const Subgroup>> zs(selected.size());
  for (std::size_t s = 0; s < selected.size(); ++s) {
    const Id rep = g.class_info(selected[s]).rep;
    zs[s] = std::make_shared<const Subgroup>(centralizer(g, rep));
    auto admit = [&](Id c) { return !filter || g.known_class(c) || filter(g, c); };
    for (auto [cls, c] : z_partner_classes(g, *zs[s], admit)) {
      auto it = slot.find(cls);
      if (it != slot.end()) uf.unite(s, it->second);
    }
  }

  std::map<std::size_t, std::size_t> block_index;
  for (std::size_t s = 0; s < selected.size(); ++s) {
    const std::size_t root = uf.find(s);
    auto [it, fresh] = block_index.emplace(root, out.blocks.size());
    if (fresh) {
      ZBlock b;
      b.rep = g.class_info(selected[root]).rep;
      b.centralizer = zs[root];
      b.fingerprint = block_fingerprint(*zs[root]);
      out.blocks.push_back(std::move(b));
    }
    ZBlock& b = out.blocks[it->second];
    b.classes.push_back(selected[s]);
    b.class_reps.push_back(g.class_info(selected[s]).rep);
  }
  return out;
}

std::optional<Id> z_equivalent(const GroupTable& g, Id a, Id b) {
  if (a == b) return g.identity();
  if (g.centralizer_order(a) != g.centralizer_order(b)) return std::nullopt;
  const Subgroup za = centralizer(g, a);
  const Subgroup zb = centralizer(g, b);
  if (za == zb) return g.identity();
  const std::size_t ca = g.class_of(a);
  const Subgroup cz = center_of(zb);
  for (Id c : cz.members()) {
    if (g.class_of(c) != ca || g.centralizer_order(c) != zb.order()) continue;
    const Id x = g.mul(g.conjugator_from_rep(c), g.inv(g.conjugator_from_rep(a)));
    if (!(conjugate(za, x) == zb)) throw std::logic_error("z-equivalence witness failed the set-equality check");
    return x;
  }
  return std::nullopt;
}

std::vector<std::string> check_zpartition(const ZPartition& p) {
  std::vector<std::string> bad;
  const GroupTable& g = *p.group;
  std::set<std::size_t> all;
  std::size_t total = 0;
  for (const auto& b : p.blocks) {
    total += b.classes.size();
    all.insert(b.classes.begin(), b.classes.end());
    if (b.centralizer->order() != g.centralizer_order(b.rep)) bad.push_back("block " + std::to_string(b.rep) + ": centralizer order mismatch");
  }
  if (all.size() != total) bad.push_back("a conjugacy class lies in two blocks");
  if (p.blocks.size() > p.classes_considered) bad.push_back("more blocks than classes");

  const bool small = g.order() <= kCheckCap;
  for (const auto& b : p.blocks) {
    for (std::size_t i = 0; i < b.classes.size(); ++i) {
      const ClassInfo& info = g.class_info(b.classes[i]);
      if (small) {
        for (Id x : info.members)
          if (g.centralizer_order(x) != b.centralizer->order()) bad.push_back("class " + std::to_string(info.rep) + ": centralizer order varies");
      }
      if (!z_equivalent(g, b.rep, info.rep)) bad.push_back("class " + std::to_string(info.rep) + " not z-equivalent to block rep " + std::to_string(b.rep));
    }
  }
  if (small)
    for (std::size_t i = 0; i < p.blocks.size(); ++i)
      for (std::size_t j = i + 1; j < p.blocks.size(); ++j)
        if (z_equivalent(g, p.blocks[i].rep, p.blocks[j].rep))
          bad.push_back("blocks " + std::to_string(p.blocks[i].rep) + " and " + std::to_string(p.blocks[j].rep) + " are z-equivalent");

  const std::size_t id_cls = g.class_of(g.identity());
  if (auto bi = p.block_of_class(id_cls)) {
    std::vector<Id> members;
    for (std::size_t cls : p.blocks[*bi].classes)
      for (Id x : g.class_info(cls).members) members.push_back(x);
    std::sort(members.begin(), members.end());
    const Subgroup zg = center(g);
    if (members != zg.members()) bad.push_back("the identity's z-class differs from the center");
  }
  if (!p.filtered && (p.blocks.size() == 1) != g.is_abelian()) bad.push_back("single block does not match commutativity");
  return bad;
}

std::optional<Mat> family_conjugate(const FamilySpec& fam, const Mat& a, const Mat& b) {
  if (fam.kind == FamilyKind::GL) return gl_conjugate_test(a, b);
  if (fam.kind == FamilyKind::SL) return sl_conjugate_test(a, b);
  auto t = instantiate(fam, a.field());
  const GroupTable& g = *t;
  const Id ia = g.id_of(a), ib = g.id_of(b);
  if (g.class_of(ia) != g.class_of(ib)) return std::nullopt;
  return g.element(g.mul(g.conjugator_from_rep(ia), g.inv(g.conjugator_from_rep(ib))));
}

ProbeReport base_change_probe(const FamilySpec& fam, const Field& f, std::uint32_t r,
                              const std::vector<std::pair<Mat, Mat>>& pairs) {
  if (r == 0) throw UsageError("extension degree must be positive");
  const Field& big = make_field(f.p(), f.m() * r);
  auto small_t = instantiate(fam, f);
  auto big_t = instantiate(fam, big);
  ProbeReport rep;
  rep.group = small_t->name();
  rep.ext_group = big_t->name();
  rep.r = r;
  for (const auto& [a, b] : pairs) {
    ProbeResult pr;
    pr.g = a;
    pr.h = b;
    pr.equivalent_base = z_equivalent(*small_t, small_t->id_of(a), small_t->id_of(b)).has_value();
    pr.equivalent_ext = z_equivalent(*big_t, big_t->id_of(embed_into(a, big)), big_t->id_of(embed_into(b, big))).has_value();
    rep.pairs.push_back(std::move(pr));
  }
  return rep;
}

FormSet fusion_count(const FamilySpec& fam, const Field& f, std::uint32_t r, const Mat& g) {
  if (r == 0) throw UsageError("extension degree must be positive");
  const Field& big = make_field(f.p(), f.m() * r);
  auto base = instantiate(fam, f);
  const GroupTable& bg = *base;
  bg.id_of(g);
  const Mat gx = embed_into(g, big);

  std::unique_ptr<GroupTable> big_t;
  if (fits_bound(fam, big)) big_t = instantiate(fam, big);
  else if (!fam.is_reductive())
    throw BoundExceeded("extension group " + fam.to_string() + "@" + big.name() + " exceeds the group bound");

  FormSet out;
  out.element = g;
  out.r = r;
  const Poly cp = charpoly(g);
  std::optional<Id> gid_big;
  if (big_t) gid_big = big_t->id_of(gx);
  for (const ClassInfo& info : conjugacy_classes(bg)) {
    const Mat c = bg.element(info.rep);
    if (charpoly(c) != cp) continue;
    const Mat cx = embed_into(c, big);
    bool fused;
    if (fam.is_reductive()) fused = family_conjugate(fam, cx, gx).has_value();
    else fused = big_t->class_of(big_t->id_of(cx)) == big_t->class_of(*gid_big);
    if (fused) out.fused_class_reps.push_back(info.rep);
  }

  if (big_t && bg.order() <= 100000) {
    out.zlevel_available = true;
    for (const ZBlock& b : z_partition(bg).blocks) {
      const Id bx = big_t->id_of(embed_into(bg.element(b.rep), big));
      if (z_equivalent(*big_t, bx, *gid_big)) out.fused_zclass_reps.push_back(b.rep);
    }
  }
  return out;
}

namespace {

// |Z_{G(F)}(x)| by enumerating the centralizer algebra; nullopt past the cap.
std::optional<std::uint64_t> centralizer_count(const FamilySpec& fam, const Mat& x, std::uint64_t cap) {
  const Field& f = x.field();
  auto basis = transporter_space(x, x).basis;
  const std::size_t d = basis.size();
  if (!checked_pow(f.q(), static_cast<std::uint32_t>(d), cap)) return std::nullopt;
  std::vector<Elem> c(d, 0);
  Mat m(f, x.n());
  std::uint64_t count = 0;
  for (;;) {
    std::fill(m.entries().begin(), m.entries().end(), 0);
    for (std::size_t b = 0; b < d; ++b) {
      if (!c[b]) continue;
      auto be = basis[b].entries();
      for (std::size_t i = 0; i < be.size(); ++i) m.entries()[i] = f.add(m.entries()[i], f.mul(c[b], be[i]));
    }
    if (family_contains(fam, m)) ++count;
    std::size_t i = 0;
    while (i < d && ++c[i] == f.q()) c[i++] = 0;
    if (i == d) break;
  }
  return count;
}

}  // namespace

GrowthDegree growth_degree(const FamilySpec& fam, const Field& f, const Mat& g, const std::vector<std::uint32_t>& degrees) {
  if (fam.kind == FamilyKind::Dihedral || fam.kind == FamilyKind::Generated)
    throw DomainError("growth_degree needs a family defined over every extension");
  if (!family_contains(fam, g)) throw DomainError("element is not in " + fam.to_string() + " over F_" + f.name());
  GrowthDegree out;
  out.element = g;
  std::vector<std::uint32_t> ds(degrees);
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  for (std::uint32_t r : ds) {
    if (r == 0) throw UsageError("extension degree must be positive");
    if (std::uint64_t{f.m()} * r > 64) {
      out.skipped.push_back(r);
      continue;
    }
    std::optional<std::uint64_t> cnt;
    if (auto q = checked_pow(f.p(), f.m() * r, limits().max_field)) cnt = centralizer_count(fam, embed(g, make_field(f.p(), f.m() * r)), limits().max_group);
    if (!cnt) {
      out.skipped.push_back(r);
      continue;
    }
    out.degrees.push_back(r);
    out.orders.push_back(*cnt);
    out.slopes.push_back(std::log(static_cast<double>(*cnt)) / (r * std::log(static_cast<double>(f.q()))));
  }
  for (std::size_t i = 0; i < out.degrees.size(); ++i)
    for (std::size_t j = i + 1; j < out.degrees.size(); ++j)
      if (out.degrees[j] % out.degrees[i] == 0 && out.orders[j] < out.orders[i]) out.monotone = false;
  const std::size_t k = out.slopes.size();
  if (k >= 2) {
    const long a = std::lround(out.slopes[k - 2]), b = std::lround(out.slopes[k - 1]);
    if (a == b && b >= 0) out.degree = static_cast<int>(b);
  }
  return out;
}

Stabilization geometric_stabilize(const FamilySpec& fam, const Field& f, const std::vector<Mat>& seeds, std::uint32_t max_r) {
  Stabilization out;
  if (seeds.empty()) throw UsageError("geometric_stabilize needs at least one seed");
  for (std::uint32_t r = 1; r <= max_r; ++r) {
    if (std::uint64_t{f.m()} * r > 64 || !checked_pow(f.p(), f.m() * r, limits().max_field)) break;
    const Field& k = make_field(f.p(), f.m() * r);
    if (!fits_bound(fam, k)) continue;
    auto t = instantiate(fam, k);
    const GroupTable& g = *t;
    std::vector<Id> ids;
    for (const Mat& s : seeds) ids.push_back(g.id_of(embed_into(s, k)));

    UnionFind uf(seeds.size());
    std::map<std::size_t, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < ids.size(); ++i) by_class[g.class_of(ids[i])].push_back(i);
    std::map<std::size_t, std::size_t> first_seed;
    for (auto& [cls, v] : by_class) {
      first_seed[cls] = v.front();
      for (std::size_t i : v) uf.unite(v.front(), i);
    }
    for (auto& [cls, v] : by_class) {
      const Subgroup z = centralizer(g, ids[v.front()]);
      auto admit = [&](Id c) {
        auto kc = g.known_class(c);
        return !kc || first_seed.count(*kc);
      };
      for (auto [pc, c] : z_partner_classes(g, z, admit)) {
        auto it = first_seed.find(pc);
        if (it != first_seed.end()) uf.unite(v.front(), it->second);
      }
    }
    std::map<std::size_t, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < seeds.size(); ++i) blocks[uf.find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> part;
    for (auto& [root, v] : blocks) part.push_back(v);
    out.degrees.push_back(r);
    out.partitions.push_back(std::move(part));
  }

  for (std::size_t i = 0; i < out.degrees.size() && !out.r_star; ++i) {
    const std::uint32_t r = out.degrees[i];
    bool agrees = true;
    std::optional<std::uint32_t> witness;
    for (std::size_t j = i + 1; j < out.degrees.size(); ++j) {
      if (out.degrees[j] % r != 0) continue;
      if (out.partitions[j] != out.partitions[i]) agrees = false;
      else if (!witness) witness = out.degrees[j];
    }
    if (!agrees) continue;
    if (witness) {
      out.r_star = r;
      out.certificate = "partition at r=" + std::to_string(r) + " equals the partition at r=" + std::to_string(*witness);
    } else if (fam.is_reductive()) {
      const Field& k = make_field(f.p(), f.m() * r);
      bool split = std::all_of(seeds.begin(), seeds.end(), [&](const Mat& s) { return poly::splits(k, charpoly(embed_into(s, k))); });
      if (split) {
        out.r_star = r;
        out.certificate = "all seed characteristic polynomials split over F_" + k.name();
      }
    }
    if (out.r_star) out.stable = out.partitions[i];
  }
  return out;
}

ElementFilter filter_regular_semisimple() {
  return [](const GroupTable& g, Id x) { return is_regular_semisimple(g.element(x)); };
}

ElementFilter filter_regular_unipotent() {
  return [](const GroupTable& g, Id x) {
    Mat m = g.element(x);
    return is_unipotent(m) && is_regular(m);
  };
}

ElementFilter filter_by_name(const std::string& name) {
  if (name == "all") return {};
  if (name == "rss" || name == "regular-semisimple") return filter_regular_semisimple();
  if (name == "regular-unipotent") return filter_regular_unipotent();
  if (name == "unipotent") return [](const GroupTable& g, Id x) { return is_unipotent(g.element(x)); };
  if (name == "semisimple") return [](const GroupTable& g, Id x) { return is_semisimple(g.element(x)); };
  throw UsageError("unknown filter '" + name + "' (expected all, rss, regular-unipotent, unipotent, semisimple)");
}

}  // namespace zk
