#pragma once

// Explicit finite matrix groups: the standard families over any F_q,
// element tables with a hashed index, lazy conjugacy classes, centralizers,
// normalizers, subgroup conjugacy and quotients.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zk/ff.hpp"
#include "zk/mat.hpp"

namespace zk {

using Id = std::uint32_t;
inline constexpr Id kNoId = ~Id{0};

enum class FamilyKind { GL, SL, BorelGL, BorelSL, UnipotentFull, Heisenberg, Dihedral, Generated };

struct FamilySpec {
  FamilyKind kind = FamilyKind::GL;
  int n = 2;  // matrix size, or m for Dihedral
  bool allow_bad_char = false;

  /// "gl:2", "sl:3", "borel-gl:2", "borel-sl:2", "unipotent:4", "u3", "dihedral:7".
  std::string to_string() const;
  /// Size of the matrices realizing the family.
  int dim() const;
  bool is_reductive() const { return kind == FamilyKind::GL || kind == FamilyKind::SL; }
  friend bool operator==(const FamilySpec& a, const FamilySpec& b) { return a.kind == b.kind && a.n == b.n; }
};

FamilySpec parse_family(const std::string& s);

struct GroupSpec {
  FamilySpec family;
  const Field* field = nullptr;
  std::string to_string() const;  // "gl:2@3^1"
};

/// "gl:2@3^1", "u3@5^1", "dihedral:7" (field chosen automatically).
GroupSpec parse_group(const std::string& s);

/// Smallest prime power q <= max_field with m | q - 1.
const Field& dihedral_field(int m);

/// Closed-form order; nullopt when it does not fit 64 bits.
std::optional<std::uint64_t> family_order(const FamilySpec& fam, const Field& f);
/// Membership predicate of the family over f.
bool family_contains(const FamilySpec& fam, const Mat& x);
/// Deterministic generating set.
std::vector<Mat> family_generators(const FamilySpec& fam, const Field& f);
/// Throws GuardViolation for SL-type families with p | n unless overridden.
void check_guard(const FamilySpec& fam, const Field& f);

struct ClassInfo {
  Id rep = kNoId;          // least id in the class
  std::vector<Id> members;  // sorted
};

class GroupTable {
 public:
  GroupTable(FamilySpec fam, const Field& f, int n, std::vector<Elem> flat, std::vector<Mat> gens);
  GroupTable(const GroupTable&) = delete;
  GroupTable& operator=(const GroupTable&) = delete;

  const FamilySpec& family() const { return family_; }
  const Field& field() const { return *field_; }
  int n() const { return n_; }
  std::size_t order() const { return order_; }
  std::string name() const;

  const Elem* data(Id id) const { return &flat_[static_cast<std::size_t>(id) * nn_]; }
  Mat element(Id id) const;
  std::optional<Id> find(const Elem* entries) const;
  std::optional<Id> find(const Mat& x) const;
  /// Throws DomainError when x is not in the group.
  Id id_of(const Mat& x) const;

  Id identity() const { return identity_; }
  Id mul(Id a, Id b) const;
  Id inv(Id a) const { return inv_[a]; }
  /// x g x^{-1}
  Id conj(Id x, Id g) const { return mul(mul(x, g), inv_[x]); }
  bool commute(Id a, Id b) const;
  const std::vector<Id>& generators() const { return gens_; }

  /// Conjugacy class of g (computed on first use, orbit under the generators).
  std::size_t class_of(Id g) const;
  const ClassInfo& class_info(std::size_t cls) const;
  std::size_t class_count_all() const;  // forces every class
  /// Class of g if it has been computed already.
  std::optional<std::size_t> known_class(Id g) const;
  /// Some x with x rep x^{-1} == g, rep the class representative.
  Id conjugator_from_rep(Id g) const;
  /// |Z(g)| from the orbit size.
  std::size_t centralizer_order(Id g) const { return order_ / class_info(class_of(g)).members.size(); }

  std::uint64_t element_order(Id g) const;
  bool is_abelian() const;

 private:
  std::size_t hash(const Elem* e) const;
  void build_index();

  FamilySpec family_;
  const Field* field_;
  int n_, nn_;
  std::size_t order_;
  std::vector<Elem> flat_;
  std::vector<Id> slots_;
  std::size_t mask_ = 0;
  Id identity_ = kNoId;
  std::vector<Id> inv_;
  std::vector<Id> gens_;

  mutable std::recursive_mutex mu_;
  mutable std::vector<std::uint32_t> class_id_;  // ~0 when not yet computed
  mutable std::vector<Id> parent_;               // BFS tree inside the class
  mutable std::vector<std::uint8_t> parent_gen_;
  mutable std::vector<ClassInfo> classes_;
  mutable std::vector<Id> class_root_;
};

/// Full element table of the family over f. Throws BoundExceeded /
/// GuardViolation; asserts the order formula.
std::unique_ptr<GroupTable> instantiate(const FamilySpec& fam, const Field& f);
std::unique_ptr<GroupTable> instantiate(const GroupSpec& spec);
/// Breadth-first closure, re-sorted into canonical order.
std::unique_ptr<GroupTable> closure_generate(const Field& f, const std::vector<Mat>& gens);

class Subgroup {
 public:
  Subgroup(const GroupTable& g, std::vector<Id> members);  // members need not be sorted
  /// With a known generating set.
  Subgroup(const GroupTable& g, std::vector<Id> members, std::vector<Id> gens);
  const GroupTable& parent() const { return *parent_; }
  const std::vector<Id>& members() const { return members_; }
  std::size_t order() const { return members_.size(); }
  bool contains(Id x) const;
  /// Small generating set, greedy in canonical order (cached).
  const std::vector<Id>& generators() const;
  bool is_abelian() const;
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members_ == b.members_; }

 private:
  const GroupTable* parent_;
  std::vector<Id> members_;
  mutable std::vector<Id> gens_;
  mutable bool gens_ready_ = false;
};

struct Fingerprint {
  std::size_t order = 0;
  bool abelian = false;
  std::size_t center_order = 0;
  std::vector<std::pair<std::uint64_t, std::size_t>> order_counts;  // element order -> count
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

Fingerprint fingerprint(const Subgroup& h);

std::vector<ClassInfo> conjugacy_classes(const GroupTable& g);
/// Uses the centralizer algebra when it is smaller than the group and the
/// family has a membership predicate; scans otherwise.
Subgroup centralizer(const GroupTable& g, Id x);
Subgroup centralizer_scan(const GroupTable& g, Id x);
Subgroup centralizer_algebra(const GroupTable& g, Id x);
/// Centralizer in G of a subgroup.
Subgroup centralizer_of(const GroupTable& g, const Subgroup& h);
Subgroup center(const GroupTable& g);
Subgroup center_of(const Subgroup& h);
Subgroup whole(const GroupTable& g);
Subgroup normalizer(const GroupTable& g, const Subgroup& h);
/// x H x^{-1}
Subgroup conjugate(const Subgroup& h, Id x);
/// Witness x with x H1 x^{-1} == H2.
std::optional<Id> subgroups_conjugate(const GroupTable& g, const Subgroup& h1, const Subgroup& h2);
/// Same relation with no prefilters, scanning all of G.
std::optional<Id> subgroups_conjugate_bruteforce(const GroupTable& g, const Subgroup& h1, const Subgroup& h2);

/// N/D as an abstract group on coset indices (coset 0 is D itself).
class QuotientGroup {
 public:
  QuotientGroup(const Subgroup& num, const Subgroup& den);
  std::size_t order() const { return reps_.size(); }
  const std::vector<Id>& coset_reps() const { return reps_; }
  std::size_t coset_of(Id x) const;
  /// Every numerator element with its coset index.
  const std::map<Id, std::size_t>& coset_map() const { return coset_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * reps_.size() + b]; }
  std::size_t inv(std::size_t a) const { return inv_[a]; }
  std::size_t conjugacy_class_count() const;

 private:
  const GroupTable* parent_;
  std::vector<Id> reps_;
  std::map<Id, std::size_t> coset_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inv_;
};

}  // namespace zk
