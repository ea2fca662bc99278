#pragma once

// z-equivalence: g ~ h when Z(g) and Z(h) are conjugate. Partitions, base
// change along F_q -> F_{q^r}, fusion counts, centralizer growth and
// geometric stabilization along a finite tower.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zk/grp.hpp"

namespace zk {

/// Conjugation-invariant element predicate.
using ElementFilter = std::function<bool(const GroupTable&, Id)>;

struct ZBlock {
  Id rep = kNoId;                   // least element id over the block's classes
  std::vector<std::size_t> classes;  // class indices in the group, ordered by representative
  std::vector<Id> class_reps;
  std::shared_ptr<const Subgroup> centralizer;
  Fingerprint fingerprint;  // element-order multiset left empty when |Z| > 10^5
};

struct ZPartition {
  const GroupTable* group = nullptr;
  bool filtered = false;
  std::size_t classes_considered = 0;
  std::vector<ZBlock> blocks;  // ordered by rep
  std::size_t zclass_count() const { return blocks.size(); }
  /// Index of the block containing class cls, or nullopt.
  std::optional<std::size_t> block_of_class(std::size_t cls) const;
};

ZPartition z_partition(const GroupTable& g, const ElementFilter& filter = {});

/// Witness x with x Z(a) x^{-1} == Z(b) (set equality re-checked).
std::optional<Id> z_equivalent(const GroupTable& g, Id a, Id b);

/// Invariant violations of a partition (empty when sound). Full checks of
/// the union-of-classes property run for |G| <= 10^4.
std::vector<std::string> check_zpartition(const ZPartition& p);

// ---- base change ----

struct ProbeResult {
  Mat g, h;
  bool equivalent_base = false;
  bool equivalent_ext = false;
  bool changed() const { return equivalent_base != equivalent_ext; }
};

struct ProbeReport {
  std::string group;     // base group name
  std::string ext_group;
  std::uint32_t r = 1;
  std::vector<ProbeResult> pairs;
};

ProbeReport base_change_probe(const FamilySpec& fam, const Field& f, std::uint32_t r,
                              const std::vector<std::pair<Mat, Mat>>& pairs);

struct FormSet {
  Mat element;
  std::uint32_t r = 1;
  std::vector<Id> fused_class_reps;   // base class reps conjugate to g over F_{q^r}
  bool zlevel_available = false;      // needs the extension group within bound
  std::vector<Id> fused_zclass_reps;  // base z-class reps z-equivalent to g over F_{q^r}
  std::size_t class_count() const { return fused_class_reps.size(); }
  std::size_t zclass_count() const { return fused_zclass_reps.size(); }
};

/// Base classes (and z-classes) of G(F_q) that land in the G(F_{q^r})-class
/// (z-class) of g.
FormSet fusion_count(const FamilySpec& fam, const Field& f, std::uint32_t r, const Mat& g);

/// Conjugacy of two matrices inside the family over their field, without a
/// group table when the family is GL or SL.
std::optional<Mat> family_conjugate(const FamilySpec& fam, const Mat& a, const Mat& b);

struct GrowthDegree {
  Mat element;
  std::vector<std::uint32_t> degrees;
  std::vector<std::uint64_t> orders;   // |Z_{G(F_{q^r})}(g)|
  std::vector<double> slopes;          // log_q(|Z|) / r per sample
  std::optional<int> degree;           // set when the last two rounded slopes agree
  bool monotone = true;                // orders non-decreasing along divisibility
  std::vector<std::uint32_t> skipped;  // degrees beyond the enumeration bound
};

GrowthDegree growth_degree(const FamilySpec& fam, const Field& f, const Mat& g, const std::vector<std::uint32_t>& degrees);

struct Stabilization {
  std::vector<std::uint32_t> degrees;                           // degrees actually computed
  std::vector<std::vector<std::vector<std::size_t>>> partitions;  // per degree: blocks of seed indices
  std::optional<std::uint32_t> r_star;
  std::vector<std::vector<std::size_t>> stable;  // partition at r_star
  std::string certificate;                       // how r_star was certified
};

/// z-partition of the embedded seeds over F_{q^r}, r = 1..max_r (bounded
/// instantiations only). r* is the least r whose partition agrees with every
/// computed multiple of r, certified either by such a multiple or, for GL/SL,
/// by all seed characteristic polynomials splitting over F_{q^r}.
Stabilization geometric_stabilize(const FamilySpec& fam, const Field& f, const std::vector<Mat>& seeds,
                                  std::uint32_t max_r);

/// Common filters.
ElementFilter filter_regular_semisimple();
ElementFilter filter_regular_unipotent();
ElementFilter filter_by_name(const std::string& name);  // "rss", "regular-unipotent", "unipotent", "semisimple", "all"

}  // namespace zk
