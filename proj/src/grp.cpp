#include "zk/grp.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "zk/error.hpp"

namespace zk {

namespace {

using u128 = unsigned __int128;

int parse_int(const std::string& s, const std::string& whole) {
  if (s.empty() || s.size() > 6 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw UsageError("bad number '" + s + "' in " + whole);
  return std::stoi(s);
}

}  // namespace

std::string FamilySpec::to_string() const {
  switch (kind) {
    case FamilyKind::GL: return "gl:" + std::to_string(n);
    case FamilyKind::SL: return "sl:" + std::to_string(n);
    case FamilyKind::BorelGL: return "borel-gl:" + std::to_string(n);
    case FamilyKind::BorelSL: return "borel-sl:" + std::to_string(n);
    case FamilyKind::UnipotentFull: return "unipotent:" + std::to_string(n);
    case FamilyKind::Heisenberg: return "u3";
    case FamilyKind::Dihedral: return "dihedral:" + std::to_string(n);
    case FamilyKind::Generated: return "generated:" + std::to_string(n);
  }
  return "?";
}

int FamilySpec::dim() const {
  if (kind == FamilyKind::Dihedral) return 2;
  if (kind == FamilyKind::Heisenberg) return 3;
  return n;
}

FamilySpec parse_family(const std::string& s) {
  if (s == "u3" || s == "heisenberg") return {FamilyKind::Heisenberg, 3};
  auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("unknown group family '" + s + "'");
  std::string name = s.substr(0, colon);
  int n = parse_int(s.substr(colon + 1), s);
  FamilySpec f;
  f.n = n;
  if (name == "gl") f.kind = FamilyKind::GL;
  else if (name == "sl") f.kind = FamilyKind::SL;
  else if (name == "borel-gl") f.kind = FamilyKind::BorelGL;
  else if (name == "borel-sl") f.kind = FamilyKind::BorelSL;
  else if (name == "unipotent") f.kind = FamilyKind::UnipotentFull;
  else if (name == "dihedral") f.kind = FamilyKind::Dihedral;
  else throw UsageError("unknown group family '" + name + "'");
  if (f.kind == FamilyKind::Dihedral ? n < 1 : n < 1 || n > 16)
    throw UsageError("family parameter out of range in '" + s + "'");
  return f;
}

std::string GroupSpec::to_string() const {
  if (family.kind == FamilyKind::Dihedral) return family.to_string();
  return family.to_string() + "@" + field->name();
}

GroupSpec parse_group(const std::string& s) {
  auto at = s.find('@');
  GroupSpec g;
  g.family = parse_family(s.substr(0, at));
  if (at == std::string::npos) {
    if (g.family.kind != FamilyKind::Dihedral) throw UsageError("group '" + s + "' needs a field, e.g. gl:2@3^1");
    g.field = &dihedral_field(g.family.n);
    return g;
  }
  try {
    g.field = &parse_field(s.substr(at + 1));
  } catch (const BoundExceeded&) {
    throw;
  } catch (const Error& e) {
    throw UsageError("bad field in '" + s + "': " + e.what());
  }
  if (g.family.kind == FamilyKind::Dihedral && (g.field->q() - 1) % g.family.n != 0)
    throw UsageError("dihedral:" + std::to_string(g.family.n) + " is not realizable over F_" + g.field->name());
  return g;
}

const Field& dihedral_field(int m) {
  for (std::uint64_t q = 2; q <= limits().max_field; ++q) {
    if ((q - 1) % static_cast<std::uint64_t>(m) != 0) continue;
    auto ps = prime_factors(q);
    if (ps.size() != 1) continue;
    return field_of_order(q);
  }
  throw BoundExceeded("no field F_q with " + std::to_string(m) + " | q-1 within the field bound");
}

std::optional<std::uint64_t> family_order(const FamilySpec& fam, const Field& f) {
  const u128 q = f.q();
  const int n = fam.n;
  u128 r = 1;
  auto mul = [&](u128 x) {
    r *= x;
    return r <= ~std::uint64_t{0};
  };
  auto qpow = [&](int e) {
    u128 v = 1;
    for (int i = 0; i < e; ++i) {
      v *= q;
      if (v > ~std::uint64_t{0}) return u128{0};
    }
    return v;
  };
  switch (fam.kind) {
    case FamilyKind::GL:
    case FamilyKind::SL: {
      u128 qn = qpow(n);
      if (!qn) return std::nullopt;
      for (int i = 0; i < n; ++i)
        if (!mul(qn - qpow(i))) return std::nullopt;
      if (fam.kind == FamilyKind::SL) r /= (q - 1);
      break;
    }
    case FamilyKind::BorelGL:
    case FamilyKind::BorelSL: {
      for (int i = 0; i < (fam.kind == FamilyKind::BorelGL ? n : n - 1); ++i)
        if (!mul(q - 1)) return std::nullopt;
      u128 u = qpow(n * (n - 1) / 2);
      if (!u || !mul(u)) return std::nullopt;
      break;
    }
    case FamilyKind::UnipotentFull:
    case FamilyKind::Heisenberg: {
      int d = fam.dim();
      u128 u = qpow(d * (d - 1) / 2);
      if (!u) return std::nullopt;
      r = u;
      break;
    }
    case FamilyKind::Dihedral: r = 2 * static_cast<u128>(n); break;
    case FamilyKind::Generated: return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

bool family_contains(const FamilySpec& fam, const Mat& x) {
  const Field& f = x.field();
  const int n = x.n();
  if (n != fam.dim()) return false;
  auto lower_zero = [&] {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j)
        if (x(i, j) != 0) return false;
    return true;
  };
  switch (fam.kind) {
    case FamilyKind::GL: return det(x) != 0;
    case FamilyKind::SL: return det(x) == 1;
    case FamilyKind::BorelGL:
    case FamilyKind::BorelSL: {
      if (!lower_zero()) return false;
      Elem d = 1;
      for (int i = 0; i < n; ++i) d = f.mul(d, x(i, i));
      return fam.kind == FamilyKind::BorelGL ? d != 0 : d == 1;
    }
    case FamilyKind::UnipotentFull:
    case FamilyKind::Heisenberg: {
      if (!lower_zero()) return false;
      for (int i = 0; i < n; ++i)
        if (x(i, i) != 1) return false;
      return true;
    }
    case FamilyKind::Dihedral: {
      const std::uint64_t m = static_cast<std::uint64_t>(fam.n);
      if (x(0, 1) == 0 && x(1, 0) == 0) {
        Elem a = x(0, 0);
        return a != 0 && f.mul(a, x(1, 1)) == 1 && f.pow(a, m) == 1;
      }
      if (x(0, 0) == 0 && x(1, 1) == 0) {
        Elem a = x(0, 1);
        return a != 0 && f.mul(a, x(1, 0)) == 1 && f.pow(a, m) == 1;
      }
      return false;
    }
    case FamilyKind::Generated: return false;
  }
  return false;
}

void check_guard(const FamilySpec& fam, const Field& f) {
  if (fam.kind != FamilyKind::SL && fam.kind != FamilyKind::BorelSL) return;
  if (fam.n % static_cast<int>(f.p()) != 0) return;
  if (fam.allow_bad_char || limits().allow_bad_char) return;
  throw GuardViolation(fam.to_string() + " over F_" + f.name() + ": characteristic " + std::to_string(f.p()) +
                       " divides " + std::to_string(fam.n) + " (pass --allow-bad-char to proceed)");
}

std::vector<Mat> family_generators(const FamilySpec& fam, const Field& f) {
  const int n = fam.dim();
  std::vector<Mat> gens;
  // additive F_p-basis of F_q: the elements with a single unit digit
  std::vector<Elem> basis;
  for (std::uint32_t k = 0, v = 1; k < f.m(); ++k, v *= f.p()) basis.push_back(v);
  auto transvection = [&](int i, int j, Elem a) {
    Mat x = Mat::identity(f, n);
    x(i, j) = a;
    return x;
  };
  const Elem g = f.generator();
  switch (fam.kind) {
    case FamilyKind::GL:
    case FamilyKind::SL:
      for (int i = 0; i + 1 < n; ++i)
        for (Elem a : basis) {
          gens.push_back(transvection(i, i + 1, a));
          gens.push_back(transvection(i + 1, i, a));
        }
      if (fam.kind == FamilyKind::GL && f.q() > 2) {
        Mat d = Mat::identity(f, n);
        d(0, 0) = g;
        gens.push_back(d);
      }
      if (n == 1 && fam.kind == FamilyKind::GL) gens.push_back(Mat::scalar(f, 1, g));
      break;
    case FamilyKind::BorelGL:
    case FamilyKind::BorelSL:
    case FamilyKind::UnipotentFull:
    case FamilyKind::Heisenberg:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (Elem a : basis) gens.push_back(transvection(i, j, a));
      if (f.q() > 2 && fam.kind == FamilyKind::BorelGL)
        for (int i = 0; i < n; ++i) {
          Mat d = Mat::identity(f, n);
          d(i, i) = g;
          gens.push_back(d);
        }
      if (f.q() > 2 && fam.kind == FamilyKind::BorelSL)
        for (int i = 0; i + 1 < n; ++i) {
          Mat d = Mat::identity(f, n);
          d(i, i) = g;
          d(i + 1, i + 1) = f.inv(g);
          gens.push_back(d);
        }
      break;
    case FamilyKind::Dihedral: {
      const std::uint64_t m = static_cast<std::uint64_t>(fam.n);
      if ((f.q() - 1) % m != 0) throw DomainError("dihedral rotation of order " + std::to_string(m) + " not in F_" + f.name());
      Elem zeta = f.exp((f.q() - 1) / m);
      gens.push_back(Mat::diagonal(f, {zeta, f.inv(zeta)}));
      gens.push_back(Mat(f, 2, {0, 1, 1, 0}));
      break;
    }
    case FamilyKind::Generated: break;
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::erase_if(gens, [](const Mat& x) { return x.is_identity(); });
  return gens;
}

// ---------------- GroupTable ----------------

namespace {

void inverse_into(const Field& f, int n, const Elem* a, Elem* out) {
  if (n == 1) {
    out[0] = f.inv(a[0]);
    return;
  }
  if (n == 2) {
    Elem d = f.sub(f.mul(a[0], a[3]), f.mul(a[1], a[2]));
    Elem id = f.inv(d);
    out[0] = f.mul(a[3], id);
    out[1] = f.neg(f.mul(a[1], id));
    out[2] = f.neg(f.mul(a[2], id));
    out[3] = f.mul(a[0], id);
    return;
  }
  if (n == 3) {
    auto m2 = [&](int r0, int c0, int r1, int c1) {
      return f.sub(f.mul(a[r0 * 3 + c0], a[r1 * 3 + c1]), f.mul(a[r0 * 3 + c1], a[r1 * 3 + c0]));
    };
    // adjugate
    Elem c[9] = {m2(1, 1, 2, 2), f.neg(m2(0, 1, 2, 2)), m2(0, 1, 1, 2),
                 f.neg(m2(1, 0, 2, 2)), m2(0, 0, 2, 2), f.neg(m2(0, 0, 1, 2)),
                 m2(1, 0, 2, 1), f.neg(m2(0, 0, 2, 1)), m2(0, 0, 1, 1)};
    Elem d = f.add(f.add(f.mul(a[0], c[0]), f.mul(a[1], c[3])), f.mul(a[2], c[6]));
    Elem id = f.inv(d);
    for (int i = 0; i < 9; ++i) out[i] = f.mul(c[i], id);
    return;
  }
  Mat m(f, n, std::vector<Elem>(a, a + n * n));
  Mat r = inverse(m);
  std::copy(r.entries().begin(), r.entries().end(), out);
}

}  // namespace

GroupTable::GroupTable(FamilySpec fam, const Field& f, int n, std::vector<Elem> flat, std::vector<Mat> gens)
    : family_(fam), field_(&f), n_(n), nn_(n * n), order_(flat.size() / (n * n)), flat_(std::move(flat)) {
  build_index();
  Mat id = Mat::identity(f, n);
  auto e = find(id);
  if (!e) throw std::logic_error("group table without identity");
  identity_ = *e;
  inv_.resize(order_);
  std::vector<Elem> tmp(nn_);
  for (Id i = 0; i < order_; ++i) {
    inverse_into(f, n, data(i), tmp.data());
    auto j = find(tmp.data());
    if (!j) throw std::logic_error("group table not closed under inverses");
    inv_[i] = *j;
  }
  for (const auto& g : gens) {
    auto j = find(g);
    if (!j) throw std::logic_error("generator outside the group table");
    gens_.push_back(*j);
  }
  std::sort(gens_.begin(), gens_.end());
  gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
  std::erase(gens_, identity_);
  if (gens_.size() > 255) throw std::logic_error("too many generators");
  class_id_.assign(order_, ~std::uint32_t{0});
  parent_.assign(order_, kNoId);
  parent_gen_.assign(order_, 0);
}

std::string GroupTable::name() const {
  if (family_.kind == FamilyKind::Dihedral) return family_.to_string();
  return family_.to_string() + "@" + field_->name();
}

std::size_t GroupTable::hash(const Elem* e) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (int i = 0; i < nn_; ++i) {
    h ^= e[i] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  h ^= h >> 33;
  return static_cast<std::size_t>(h);
}

void GroupTable::build_index() {
  std::size_t cap = 16;
  while (cap < 2 * order_) cap <<= 1;
  slots_.assign(cap, kNoId);
  mask_ = cap - 1;
  for (Id i = 0; i < order_; ++i) {
    std::size_t s = hash(data(i)) & mask_;
    while (slots_[s] != kNoId) s = (s + 1) & mask_;
    slots_[s] = i;
  }
}

std::optional<Id> GroupTable::find(const Elem* e) const {
  std::size_t s = hash(e) & mask_;
  while (slots_[s] != kNoId) {
    if (std::equal(e, e + nn_, data(slots_[s]))) return slots_[s];
    s = (s + 1) & mask_;
  }
  return std::nullopt;
}

std::optional<Id> GroupTable::find(const Mat& x) const {
  if (&x.field() != field_ || x.n() != n_) return std::nullopt;
  return find(x.entries().data());
}

Id GroupTable::id_of(const Mat& x) const {
  auto i = find(x);
  if (!i) throw DomainError("matrix " + x.to_string() + " is not an element of " + name());
  return *i;
}

Mat GroupTable::element(Id id) const { return Mat(*field_, n_, std::vector<Elem>(data(id), data(id) + nn_)); }

Id GroupTable::mul(Id a, Id b) const {
  thread_local std::vector<Elem> tmp;
  tmp.resize(nn_);
  mat_mul_into(*field_, n_, data(a), data(b), tmp.data());
  auto r = find(tmp.data());
  if (!r) throw std::logic_error("group table not closed under multiplication");
  return *r;
}

bool GroupTable::commute(Id a, Id b) const {
  thread_local std::vector<Elem> tmp;
  tmp.resize(2 * nn_);
  return mat_commute(*field_, n_, data(a), data(b), tmp.data());
}

std::size_t GroupTable::class_of(Id g) const {
  std::lock_guard lock(mu_);
  if (class_id_[g] != ~std::uint32_t{0}) return class_id_[g];
  const auto cls = static_cast<std::uint32_t>(classes_.size());
  ClassInfo info;
  std::deque<Id> queue{g};
  class_id_[g] = cls;
  parent_[g] = kNoId;
  while (!queue.empty()) {
    Id x = queue.front();
    queue.pop_front();
    info.members.push_back(x);
    for (std::size_t k = 0; k < gens_.size(); ++k) {
      Id y = conj(gens_[k], x);
      if (class_id_[y] == cls) continue;
      class_id_[y] = cls;
      parent_[y] = x;
      parent_gen_[y] = static_cast<std::uint8_t>(k);
      queue.push_back(y);
    }
  }
  std::sort(info.members.begin(), info.members.end());
  info.rep = info.members.front();
  classes_.push_back(std::move(info));
  class_root_.push_back(g);
  return cls;
}

std::optional<std::size_t> GroupTable::known_class(Id g) const {
  std::lock_guard lock(mu_);
  if (class_id_[g] == ~std::uint32_t{0}) return std::nullopt;
  return class_id_[g];
}

const ClassInfo& GroupTable::class_info(std::size_t cls) const {
  std::lock_guard lock(mu_);
  return classes_.at(cls);
}

std::size_t GroupTable::class_count_all() const {
  std::lock_guard lock(mu_);
  for (Id i = 0; i < order_; ++i) class_of(i);
  return classes_.size();
}

Id GroupTable::conjugator_from_rep(Id g) const {
  std::lock_guard lock(mu_);
  const std::size_t cls = class_of(g);
  const Id root = class_root_[cls];
  // a_y with a_y root a_y^{-1} == y
  auto path = [&](Id y) {
    Id a = identity_;
    while (y != root) {
      a = mul(a, gens_[parent_gen_[y]]);
      y = parent_[y];
    }
    return a;
  };
  return mul(path(g), inv_[path(classes_[cls].rep)]);
}

std::uint64_t GroupTable::element_order(Id g) const {
  std::uint64_t k = 1;
  for (Id x = g; x != identity_; x = mul(x, g)) ++k;
  return k;
}

bool GroupTable::is_abelian() const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    for (std::size_t j = i + 1; j < gens_.size(); ++j)
      if (!commute(gens_[i], gens_[j])) return false;
  return true;
}

// ---------------- construction ----------------

namespace {

enum class Shape { All, Upper, StrictUpper };

std::vector<Elem> enumerate_shape(const FamilySpec& fam, const Field& f, Shape shape) {
  const int n = fam.dim();
  const int nn = n * n;
  std::vector<Elem> lo(nn, 0), hi(nn, 1), cur(nn, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k = i * n + j;
      bool free = shape == Shape::All || (shape == Shape::Upper && j >= i) || (shape == Shape::StrictUpper && j > i);
      if (free) {
        lo[k] = (shape == Shape::Upper && i == j) ? 1 : 0;
        hi[k] = f.q();
      } else {
        lo[k] = (shape == Shape::StrictUpper && i == j) ? 1 : 0;
        hi[k] = lo[k] + 1;
      }
      cur[k] = lo[k];
    }
  std::vector<Elem> out;
  Mat m(f, n);
  for (;;) {
    std::copy(cur.begin(), cur.end(), m.entries().begin());
    if (family_contains(fam, m)) out.insert(out.end(), cur.begin(), cur.end());
    int k = nn - 1;
    while (k >= 0 && ++cur[k] == hi[k]) {
      cur[k] = lo[k];
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

std::vector<Elem> closure_flat(const Field& f, int n, const std::vector<Mat>& gens, std::uint64_t bound) {
  const int nn = n * n;
  struct VecHash {
    std::size_t operator()(const std::vector<Elem>& v) const {
      std::uint64_t h = 1469598103934665603ULL;
      for (Elem x : v) h = (h ^ x) * 1099511628211ULL;
      return static_cast<std::size_t>(h);
    }
  };
  std::vector<std::vector<Elem>> elems;
  std::unordered_map<std::vector<Elem>, std::size_t, VecHash> seen;
  std::vector<Elem> id(nn, 0);
  for (int i = 0; i < n; ++i) id[i * n + i] = 1;
  elems.push_back(id);
  seen.emplace(id, 0);
  std::vector<Elem> tmp(nn);
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& g : gens) {
      mat_mul_into(f, n, elems[head].data(), g.entries().data(), tmp.data());
      if (seen.count(tmp)) continue;
      if (elems.size() >= bound)
        throw BoundExceeded("group closure exceeds the group bound " + std::to_string(bound));
      seen.emplace(tmp, elems.size());
      elems.push_back(tmp);
    }
  }
  std::sort(elems.begin(), elems.end());
  std::vector<Elem> flat;
  flat.reserve(elems.size() * nn);
  for (auto& e : elems) flat.insert(flat.end(), e.begin(), e.end());
  return flat;
}

}  // namespace

std::unique_ptr<GroupTable> instantiate(const FamilySpec& fam, const Field& f) {
  if (fam.kind == FamilyKind::Generated) throw UsageError("generated groups cannot be re-instantiated");
  check_guard(fam, f);
  if (fam.kind == FamilyKind::Dihedral && (f.q() - 1) % static_cast<std::uint64_t>(fam.n) != 0)
    throw DomainError("dihedral:" + std::to_string(fam.n) + " is not realizable over F_" + f.name());
  auto predicted = family_order(fam, f);
  if (!predicted || *predicted > limits().max_group)
    throw BoundExceeded(fam.to_string() + " over F_" + f.name() + " has order " +
                        (predicted ? std::to_string(*predicted) : std::string("> 2^64")) + ", above the group bound " +
                        std::to_string(limits().max_group));
  const int n = fam.dim();
  auto gens = family_generators(fam, f);
  std::vector<Elem> flat;
  Shape shape = Shape::All;
  if (fam.kind == FamilyKind::BorelGL || fam.kind == FamilyKind::BorelSL) shape = Shape::Upper;
  if (fam.kind == FamilyKind::UnipotentFull || fam.kind == FamilyKind::Heisenberg) shape = Shape::StrictUpper;
  int free = shape == Shape::All ? n * n : shape == Shape::Upper ? n * (n + 1) / 2 : n * (n - 1) / 2;
  auto candidates = checked_pow(f.q(), static_cast<std::uint32_t>(free), std::uint64_t{1} << 62);
  if (fam.kind == FamilyKind::Dihedral) {
    Elem zeta = f.exp((f.q() - 1) / static_cast<std::uint64_t>(fam.n));
    std::vector<Mat> elems;
    for (int k = 0; k < fam.n; ++k) {
      Elem a = f.pow(zeta, static_cast<std::uint64_t>(k));
      elems.push_back(Mat::diagonal(f, {a, f.inv(a)}));
      elems.push_back(Mat(f, 2, {0, a, f.inv(a), 0}));
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    for (auto& e : elems) flat.insert(flat.end(), e.entries().begin(), e.entries().end());
  } else if (candidates && (*candidates <= std::max<std::uint64_t>(16 * *predicted, 4'000'000))) {
    flat = enumerate_shape(fam, f, shape);
  } else {
    flat = closure_flat(f, n, gens, limits().max_group);
  }
  auto g = std::make_unique<GroupTable>(fam, f, n, std::move(flat), gens);
  if (g->order() != *predicted)
    throw std::logic_error(fam.to_string() + " over F_" + f.name() + ": built " + std::to_string(g->order()) +
                           " elements, formula says " + std::to_string(*predicted));
  return g;
}

std::unique_ptr<GroupTable> instantiate(const GroupSpec& spec) { return instantiate(spec.family, *spec.field); }

std::unique_ptr<GroupTable> closure_generate(const Field& f, const std::vector<Mat>& gens) {
  int n = gens.empty() ? 1 : gens.front().n();
  for (const auto& g : gens)
    if (g.n() != n || &g.field() != &f || det(g) == 0) throw DomainError("closure_generate needs invertible generators");
  auto sorted = gens;
  std::sort(sorted.begin(), sorted.end());
  auto flat = closure_flat(f, n, sorted, limits().max_group);
  FamilySpec fam{FamilyKind::Generated, n};
  return std::make_unique<GroupTable>(fam, f, n, std::move(flat), sorted);
}

}  // namespace zk
