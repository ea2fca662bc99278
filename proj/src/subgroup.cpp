#include <algorithm>
#include <map>
#include <stdexcept>

#include "zk/error.hpp"
#include "zk/grp.hpp"

namespace zk {

Subgroup::Subgroup(const GroupTable& g, std::vector<Id> members) : parent_(&g), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty() || g.order() % members_.size() != 0)
    throw std::logic_error("subgroup order " + std::to_string(members_.size()) + " does not divide " +
                           std::to_string(g.order()));
}

Subgroup::Subgroup(const GroupTable& g, std::vector<Id> members, std::vector<Id> gens) : Subgroup(g, std::move(members)) {
  gens_ = std::move(gens);
  gens_ready_ = true;
}

bool Subgroup::contains(Id x) const { return std::binary_search(members_.begin(), members_.end(), x); }

const std::vector<Id>& Subgroup::generators() const {
  if (gens_ready_) return gens_;
  const GroupTable& g = *parent_;
  std::vector<char> in(members_.size(), 0);
  auto pos = [&](Id x) {
    return static_cast<std::size_t>(std::lower_bound(members_.begin(), members_.end(), x) - members_.begin());
  };
  std::vector<Id> current{g.identity()};
  in[pos(g.identity())] = 1;
  std::size_t covered = 1;
  for (Id cand : members_) {
    if (covered == members_.size()) break;
    if (in[pos(cand)]) continue;
    gens_.push_back(cand);
    // extend the closure: multiply everything so far by all generators until stable
    for (std::size_t head = 0; head < current.size(); ++head)
      for (Id s : gens_) {
        Id y = g.mul(current[head], s);
        std::size_t p = pos(y);
        if (p >= members_.size() || members_[p] != y) throw std::logic_error("subgroup not closed under multiplication");
        if (!in[p]) {
          in[p] = 1;
          current.push_back(y);
          ++covered;
        }
      }
  }
  gens_ready_ = true;
  return gens_;
}

bool Subgroup::is_abelian() const {
  const auto& gs = generators();
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j)
      if (!parent_->commute(gs[i], gs[j])) return false;
  return true;
}

Subgroup center_of(const Subgroup& h) {
  const auto& gs = h.generators();
  std::vector<Id> out;
  for (Id z : h.members())
    if (std::all_of(gs.begin(), gs.end(), [&](Id s) { return h.parent().commute(z, s); })) out.push_back(z);
  return Subgroup(h.parent(), std::move(out));
}

Fingerprint fingerprint(const Subgroup& h) {
  Fingerprint fp;
  fp.order = h.order();
  fp.abelian = h.is_abelian();
  fp.center_order = fp.abelian ? h.order() : center_of(h).order();
  std::map<std::uint64_t, std::size_t> counts;
  for (Id x : h.members()) ++counts[h.parent().element_order(x)];
  fp.order_counts.assign(counts.begin(), counts.end());
  return fp;
}

std::vector<ClassInfo> conjugacy_classes(const GroupTable& g) {
  g.class_count_all();
  std::vector<ClassInfo> out;
  std::vector<char> seen(g.order(), 0);
  for (Id i = 0; i < g.order(); ++i) {
    std::size_t c = g.class_of(i);
    const ClassInfo& info = g.class_info(c);
    if (info.rep != i) continue;
    out.push_back(info);
  }
  return out;
}

Subgroup centralizer_scan(const GroupTable& g, Id x) {
  std::vector<Id> out;
  for (Id y = 0; y < g.order(); ++y)
    if (g.commute(x, y)) out.push_back(y);
  return Subgroup(g, std::move(out));
}

Subgroup centralizer_algebra(const GroupTable& g, Id x) {
  if (g.family().kind == FamilyKind::Generated) throw DomainError("centralizer_algebra needs a family predicate");
  const Field& f = g.field();
  Mat a = g.element(x);
  auto basis = transporter_space(a, a).basis;
  const std::size_t d = basis.size();
  std::vector<Id> out;
  std::vector<Elem> c(d, 0);
  Mat m(f, g.n());
  for (;;) {
    std::fill(m.entries().begin(), m.entries().end(), 0);
    for (std::size_t b = 0; b < d; ++b) {
      if (!c[b]) continue;
      auto be = basis[b].entries();
      for (std::size_t i = 0; i < be.size(); ++i) m.entries()[i] = f.add(m.entries()[i], f.mul(c[b], be[i]));
    }
    if (family_contains(g.family(), m)) {
      auto id = g.find(m);
      if (!id) throw std::logic_error("family member missing from the group table");
      out.push_back(*id);
    }
    std::size_t i = 0;
    while (i < d && ++c[i] == f.q()) c[i++] = 0;
    if (i == d) break;
  }
  return Subgroup(g, std::move(out));
}

Subgroup centralizer(const GroupTable& g, Id x) {
  if (x == g.identity()) return whole(g);
  if (g.family().kind != FamilyKind::Generated) {
    const Mat a = g.element(x);
    const int d = transporter_space(a, a).dim;
    auto combos = checked_pow(g.field().q(), static_cast<std::uint32_t>(d), g.order() / 4);
    if (combos) return centralizer_algebra(g, x);
  }
  return centralizer_scan(g, x);
}

Subgroup centralizer_of(const GroupTable& g, const Subgroup& h) {
  const auto& gs = h.generators();
  std::vector<Id> out;
  for (Id y = 0; y < g.order(); ++y)
    if (std::all_of(gs.begin(), gs.end(), [&](Id s) { return g.commute(y, s); })) out.push_back(y);
  return Subgroup(g, std::move(out));
}

Subgroup whole(const GroupTable& g) {
  std::vector<Id> all(g.order());
  for (Id i = 0; i < g.order(); ++i) all[i] = i;
  return Subgroup(g, std::move(all), g.generators());
}

Subgroup center(const GroupTable& g) { return centralizer_of(g, whole(g)); }

Subgroup normalizer(const GroupTable& g, const Subgroup& h) {
  const auto& gs = h.generators();
  std::vector<Id> out;
  for (Id x = 0; x < g.order(); ++x)
    if (std::all_of(gs.begin(), gs.end(), [&](Id s) { return h.contains(g.conj(x, s)); })) out.push_back(x);
  return Subgroup(g, std::move(out));
}

Subgroup conjugate(const Subgroup& h, Id x) {
  const GroupTable& g = h.parent();
  std::vector<Id> out;
  out.reserve(h.order());
  for (Id y : h.members()) out.push_back(g.conj(x, y));
  std::vector<Id> gens;
  for (Id s : h.generators()) gens.push_back(g.conj(x, s));
  return Subgroup(g, std::move(out), std::move(gens));
}

namespace {

bool maps_onto(const GroupTable& g, Id x, const Subgroup& h1, const Subgroup& h2) {
  const auto& gs = h1.generators();
  return std::all_of(gs.begin(), gs.end(), [&](Id s) { return h2.contains(g.conj(x, s)); });
}

}  // namespace

std::optional<Id> subgroups_conjugate(const GroupTable& g, const Subgroup& h1, const Subgroup& h2) {
  if (h1.order() != h2.order()) return std::nullopt;
  if (h1 == h2) return g.identity();
  const bool ab = h1.is_abelian();
  if (ab != h2.is_abelian()) return std::nullopt;
  if (!ab && center_of(h1).order() != center_of(h2).order()) return std::nullopt;
  if (fingerprint(h1).order_counts != fingerprint(h2).order_counts) return std::nullopt;
  // Candidates range over right cosets x N(H1); every element of a coset
  // gives the same conjugate.
  Subgroup nh = normalizer(g, h1);
  std::vector<char> done(g.order(), 0);
  for (Id x = 0; x < g.order(); ++x) {
    if (done[x]) continue;
    if (maps_onto(g, x, h1, h2)) return x;
    for (Id y : nh.members()) done[g.mul(x, y)] = 1;
  }
  return std::nullopt;
}

std::optional<Id> subgroups_conjugate_bruteforce(const GroupTable& g, const Subgroup& h1, const Subgroup& h2) {
  if (h1.order() != h2.order()) return std::nullopt;
  for (Id x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (Id y : h1.members())
      if (!h2.contains(g.conj(x, y))) {
        ok = false;
        break;
      }
    if (ok) return x;
  }
  return std::nullopt;
}

QuotientGroup::QuotientGroup(const Subgroup& num, const Subgroup& den) : parent_(&num.parent()) {
  const GroupTable& g = *parent_;
  for (Id d : den.members())
    if (!num.contains(d)) throw DomainError("quotient: denominator is not contained in the numerator");
  for (Id s : num.generators())
    for (Id d : den.generators())
      if (!den.contains(g.conj(s, d))) throw DomainError("quotient: denominator is not normal in the numerator");
  auto assign = [&](Id x) {
    const std::size_t idx = reps_.size();
    reps_.push_back(x);
    for (Id d : den.members()) coset_[g.mul(x, d)] = idx;
  };
  assign(den.members().front());
  for (Id x : num.members())
    if (!coset_.count(x)) assign(x);
  const std::size_t k = reps_.size();
  table_.resize(k * k);
  inv_.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) table_[a * k + b] = coset_.at(g.mul(reps_[a], reps_[b]));
    inv_[a] = coset_.at(g.inv(reps_[a]));
  }
}

std::size_t QuotientGroup::coset_of(Id x) const {
  auto it = coset_.find(x);
  if (it == coset_.end()) throw DomainError("element outside the quotient's numerator");
  return it->second;
}

std::size_t QuotientGroup::conjugacy_class_count() const {
  const std::size_t k = order();
  std::vector<char> seen(k, 0);
  std::size_t count = 0;
  for (std::size_t a = 0; a < k; ++a) {
    if (seen[a]) continue;
    ++count;
    for (std::size_t x = 0; x < k; ++x) seen[mul(mul(x, a), inv(x))] = 1;
  }
  return count;
}

}  // namespace zk
