#pragma once

// First Galois cohomology of finite groups under a cyclic action generated
// by one automorphism F (Frobenius), computed as F-twisted conjugacy
//   a ~ b^{-1} a F(b).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zk/grp.hpp"

namespace zk {

/// A finite group on indices 0..order-1 with an automorphism F.
class TwistedGroup {
 public:
  using MulFn = std::function<std::size_t(std::size_t, std::size_t)>;
  using LabelFn = std::function<std::string(std::size_t)>;

  /// Validates that F is a bijective homomorphism (checked on generators);
  /// throws DomainError otherwise.
  TwistedGroup(std::string name, std::size_t order, std::size_t identity, MulFn mul, std::vector<std::size_t> inv,
               std::vector<std::size_t> frob, std::vector<std::size_t> gens, LabelFn label);

  const std::string& name() const { return name_; }
  std::size_t order() const { return inv_.size(); }
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return mul_(a, b); }
  std::size_t inv(std::size_t a) const { return inv_[a]; }
  std::size_t frob(std::size_t a) const { return frob_[a]; }
  /// Order of F.
  std::uint64_t r() const { return r_; }
  const std::vector<std::size_t>& generators() const { return gens_; }
  std::string label(std::size_t a) const { return label_ ? label_(a) : std::to_string(a); }
  /// a F(a) F^2(a) ... F^{r-1}(a)
  std::size_t twisted_norm(std::size_t a) const;
  /// b^{-1} a F(b)
  std::size_t act(std::size_t b, std::size_t a) const { return mul(mul(inv(b), a), frob(b)); }

  /// Parent-table ids when built from a subgroup (sorted, index order).
  const std::vector<Id>& parent_ids() const { return parent_ids_; }
  void set_parent_ids(std::vector<Id> ids) { parent_ids_ = std::move(ids); }
  std::optional<std::size_t> index_of_parent(Id x) const;

 private:
  std::string name_;
  std::size_t identity_;
  MulFn mul_;
  std::vector<std::size_t> inv_, frob_, gens_;
  LabelFn label_;
  std::uint64_t r_ = 1;
  std::vector<Id> parent_ids_;
};

/// Subgroup with an element-wise automorphism f (which must preserve it).
TwistedGroup twisted_subgroup(const Subgroup& a, const std::function<Id(Id)>& f, std::string name = {});
/// Subgroup of a table over F_{q^r} with entry-wise x -> x^q, q = |base|.
TwistedGroup twisted_frobenius(const Subgroup& a, const Field& base);
/// Same action with F the identity (ordinary conjugacy).
TwistedGroup twisted_identity(const Subgroup& a);
/// N/D with the automorphism induced by f on the parent; q must outlive the result.
TwistedGroup twisted_quotient(const QuotientGroup& q, const std::function<Id(Id)>& f, std::string name = {});
/// Z/n with F(k) = mult * k.
TwistedGroup twisted_cyclic(std::uint64_t n, std::uint64_t mult);
/// {x in big : x^n = 1} with F(x) = x^{|base|}.
TwistedGroup twisted_mu_n(const Field& big, std::uint64_t n, const Field& base);

struct TwistedClassSet {
  std::vector<std::size_t> reps;      // least index of each class, ascending
  std::vector<std::size_t> class_of;  // per element
  std::vector<std::size_t> sizes;
  std::vector<bool> cocycle;          // twisted norm of the class is trivial (class invariant)
  std::size_t size() const { return reps.size(); }
};

TwistedClassSet twisted_classes(const TwistedGroup& t);

/// The class of the identity under b -> b^{-1} F(b) (the distinguished class).
std::vector<std::size_t> twisted_trivial_class(const TwistedGroup& t);

struct Cocycle {
  std::shared_ptr<const TwistedGroup> ambient;
  std::size_t value = 0;  // value on the Frobenius generator
};

/// Twisted norm of c.value is the identity.
bool cocycle_check(const Cocycle& c);

struct FormCocycle {
  Mat a;      // conjugator over F_{q^r}
  Mat value;  // a^{-1} Frob(a)
  std::shared_ptr<const GroupTable> ext;   // the family over F_{q^r}
  std::shared_ptr<const Subgroup> zg_ext;  // Zg over F_{q^r}: double centralizer of the embedded Zg
  std::shared_ptr<const Subgroup> normalizer;
  Cocycle cocycle;  // inside Frobenius acting on the normalizer
  bool in_normalizer = false;
  bool in_zg = false;
  std::size_t twisted_class = 0;  // index into twisted_classes(*cocycle.ambient).reps
  bool trivial_class = false;
  /// When the value lies in Zg: whether it is twisted-trivial there.
  std::optional<bool> trivial_in_zg;
};

/// c = a^{-1} Frob(a) for a form a Zg a^{-1} defined over F_q. Throws
/// DomainError when the form is not Frobenius-stable.
FormCocycle cocycle_of_form(const FamilySpec& fam, const Field& base, std::uint32_t r, const Subgroup& zg, const Mat& a);

/// Invertible a over `big` with a^{-1} x a diagonal; x must be diagonalizable there.
std::optional<Mat> eigenbasis(const Mat& x, const Field& big);

struct H1MuN {
  std::uint64_t q = 0, n = 0;
  std::uint64_t n_prime = 0;  // n with the characteristic removed: |mu_n(closure)|
  std::uint32_t r = 1;        // realizing degree
  bool realized_in_field = false;
  std::size_t twisted_count = 0;
  std::uint64_t gcd_count = 0;
  std::size_t power_class_count = 0;
  std::size_t inflated_count = 0;  // recomputed at degree 2r
  bool agree() const {
    return twisted_count == gcd_count && gcd_count == power_class_count && inflated_count == twisted_count;
  }
  std::vector<std::size_t> reps;
};

/// r == 0 picks the least realizing degree. Throws DomainError when the
/// given r does not realize mu_n.
H1MuN h1_mu_n(std::uint64_t q, std::uint64_t n, std::uint32_t r = 0);

/// Classes of t (by index into twisted_classes(t).reps) whose image under
/// the F-equivariant map is in the distinguished class of the ambient group.
/// Throws DomainError when the map is not equivariant.
std::vector<std::size_t> kernel_under_map(const TwistedGroup& t, const TwistedGroup& ambient,
                                          const std::function<std::size_t(std::size_t)>& inclusion);

}  // namespace zk
