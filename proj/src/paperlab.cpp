#include "zk/paperlab.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "zk/error.hpp"
#include "zk/galh1.hpp"
#include "zk/zclass.hpp"

namespace zk {

namespace {

using Env = std::map<std::string, std::int64_t>;

// ---- prediction expressions ----

struct Value {
  bool report = false;
  std::int64_t v = 0;
};

class ExprParser {
 public:
  ExprParser(const std::string& s, const Env& env) : s_(s), env_(env) {}

  Value parse() {
    Value v = ternary();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::logic_error("prediction \"" + s_ + "\": " + what + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(const std::string& tok) {
    skip();
    if (s_.compare(i_, tok.size(), tok) != 0) return false;
    i_ += tok.size();
    return true;
  }
  void expect(const std::string& tok) {
    if (!eat(tok)) fail("expected '" + tok + "'");
  }

  Value ternary() {
    Value c = comparison();
    if (!eat("?")) return c;
    Value a = ternary();
    expect(":");
    Value b = ternary();
    if (c.report) fail("condition is report-only");
    return c.v ? a : b;
  }

  Value comparison() {
    Value a = additive();
    for (const char* op : {"==", "!=", "<=", ">=", "<", ">"}) {
      if (!eat(op)) continue;
      Value b = additive();
      if (a.report || b.report) return {true, 0};
      const std::string o = op;
      bool r = o == "==" ? a.v == b.v : o == "!=" ? a.v != b.v : o == "<=" ? a.v <= b.v : o == ">=" ? a.v >= b.v
               : o == "<"                                                    ? a.v < b.v
                                                                             : a.v > b.v;
      return {false, r};
    }
    return a;
  }

  static Value combine(Value a, Value b, const std::function<std::int64_t(std::int64_t, std::int64_t)>& f) {
    if (a.report || b.report) return {true, 0};
    return {false, f(a.v, b.v)};
  }

  Value additive() {
    Value a = term();
    for (;;) {
      if (eat("+")) a = combine(a, term(), std::plus<>());
      else if (eat("-")) a = combine(a, term(), std::minus<>());
      else return a;
    }
  }

  Value term() {
    Value a = power();
    for (;;) {
      if (eat("*")) a = combine(a, power(), std::multiplies<>());
      else if (eat("/") || eat("%")) {
        const bool div = s_[i_ - 1] == '/';
        Value b = power();
        if (!b.report && b.v == 0) fail("division by zero");
        a = combine(a, b, [div](std::int64_t x, std::int64_t y) { return div ? x / y : x % y; });
      } else return a;
    }
  }

  Value power() {
    Value a = unary();
    if (!eat("^")) return a;
    Value b = power();
    return combine(a, b, [this](std::int64_t x, std::int64_t e) {
      if (e < 0) fail("negative exponent");
      std::int64_t r = 1;
      while (e-- > 0) r *= x;
      return r;
    });
  }

  Value unary() {
    if (eat("-")) {
      Value v = unary();
      return {v.report, -v.v};
    }
    return primary();
  }

  Value primary() {
    skip();
    if (eat("(")) {
      Value v = ternary();
      expect(")");
      return v;
    }
    if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      std::int64_t v = 0;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) v = v * 10 + (s_[i_++] - '0');
      return {false, v};
    }
    std::string name;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) name += s_[i_++];
    if (name.empty()) fail("expected a value");
    if (name == "report") return {true, 0};
    if (name == "gcd") {
      expect("(");
      Value a = ternary();
      expect(",");
      Value b = ternary();
      expect(")");
      return combine(a, b, [](std::int64_t x, std::int64_t y) { return std::gcd(x, y); });
    }
    auto it = env_.find(name);
    if (it == env_.end()) fail("unknown variable '" + name + "'");
    return {false, it->second};
  }

  const std::string& s_;
  const Env& env_;
  std::size_t i_ = 0;
};

// ---- catalog ----

std::vector<CatalogEntry> build_catalog() {
  const std::string P = "PAPER", D = "DERIVED";
  std::vector<CatalogEntry> c;
  c.push_back({"E1",
               "gl2-zclasses",
               "z-classes of GL_2(F_q), base and stabilized along F_q -> F_{q^r}",
               {{"q", 3}, {"r", 2}},
               {{"geometric", "3", P, "GL_2 over an algebraically closed field has three z-classes"},
                {"base", "report", D, "brute-force z-partition of GL_2(F_q)"}}});
  c.push_back({"E2",
               "sl2-unipotent",
               "regular unipotents of SL_2(F_q), q odd",
               {{"q", 5}},
               {{"rational_classes", "2", P, "forms of u_beta correspond to k*/(k*)^2"},
                {"zclasses", "1", P, "the regular unipotents of SL_2 are a single z-class"}}});
  c.push_back({"E3",
               "sl3-unipotent",
               "regular unipotents of SL_3(F_q)",
               {{"q", 4}},
               {{"rational_classes", "gcd(3,q-1)", P, "forms of u_beta correspond to k*/(k*)^3"},
                {"zclasses", "gcd(3,q-1)", P, "z-classes of u_beta correspond to k*/(k*)^3"}}});
  c.push_back({"E4",
               "sln-unipotent-forms",
               "rational classes among the u_beta in SL_n(F_q)",
               {{"n", 4}, {"q", 5}},
               {{"rational_classes", "gcd(n,q-1)", P, "forms of u_beta correspond to k*/(k*)^n"}}});
  c.push_back({"E5",
               "tori-gln",
               "z-classes of regular semisimple elements of GL_n(F_q)",
               {{"n", 2}, {"q", 3}},
               {{"rss_zclasses", "q > n ? weyl_classes : report", D,
                 "conjugacy classes of N(T)/T for the diagonal torus T (every torus type has regular elements when q > n)"},
                {"weyl_classes", "q > n ? partitions : report", D, "partition count of n, enumerated directly"}}});
  c.push_back({"E6",
               "borel-counterexample",
               "Borel subgroups where z-equivalence changes under base change",
               {{"which", "gl2/F2"}},
               {{"base_equivalent", "1", P, "the regular unipotent is z-equivalent to the identity over the base"},
                {"ext_equivalent", "0", P, "it is not z-equivalent to the identity over the quadratic extension"},
                {"growth_degree", "gl ? 2 : report", P, "the unipotent centralizer of the GL_2 Borel has dimension two"}}});
  c.push_back({"E7",
               "heisenberg",
               "the elements h(t) of U_3(F_q)",
               {{"q", 5}},
               {{"distinct_zclasses", "q-1", P, "the centralizers of the h(t) are pairwise non-conjugate"}}});
  c.push_back({"E8",
               "curious",
               "the split diagonal torus of SL_n(F_q) against all centralizers",
               {{"n", 3}, {"q", 2}},
               {{"torus_order", "q == 2 ? 1 : report", P, "the split torus has no nontrivial F_2-points"},
                {"equal_centralizers", "q == 2 ? 0 : report", P, "so it is the centralizer of no element"}}});
  c.push_back({"E9",
               "dihedral",
               "z-classes of the dihedral group of order 2m",
               {{"m", 5}},
               {{"zclasses", "m % 2 == 1 ? 3 : report", P, "odd dihedral groups have three z-classes"}}});
  c.push_back({"E10",
               "normalizer-structure",
               "N(Z(u_beta)) in SL_3(F_q)",
               {{"q", 4}, {"beta", 1}},
               {{"normalizer_order", "q^3 * dformula", P,
                 "N(Z(u_beta)) is upper triangular with diagonal in D and free strictly upper entries"},
                {"diagonal_part", "dformula", P, "D = {diag(d^2 a, d a, a) : d^3 a^3 = 1}, enumerated over F_q"}}});
  c.push_back({"E11",
               "fiber-bound",
               "base z-classes over one geometric z-class against normalizer cohomology",
               {{"family", "gl:2"}, {"q", 3}, {"r", 2}, {"seed", "auto"}},
               {{"fiber_within_forms", "1", P,
                 "base z-classes over a geometric class inject into the kernel of H^1(N) -> H^1(G)"},
                {"fiber", "report", D, "fusion_count at z-level over F_{q^r}"},
                {"normalizer_forms", "report", D, "cocycle classes of N(Zg)(F_{q^r}) trivial in G(F_{q^r})"},
                {"quotient_classes", "report", D, "Frobenius-twisted classes of N(Zg)/Zg over F_{q^r}"}}});
  c.push_back({"E12",
               "h1-triple",
               "H^1 of mu_n three ways, plus the regular unipotent forms",
               {{"n_max", 12}, {"qs", json::array({2, 3, 4, 5, 7, 8, 9})}},
               {{"twisted_classes", "gcd(n,q-1)", P, "H^1 of mu_n is k*/(k*)^n"},
                {"power_classes", "gcd(n,q-1)", P, "k*/(k*)^n for a finite field"},
                {"inflated", "gcd(n,q-1)", D, "twisted classes recomputed at twice the realizing degree"},
                {"unipotent_classes", "gcd(n,q-1)", P, "forms of u_beta in SL_n, n <= 3 and p not dividing n"}}});
  return c;
}

// ---- parameters ----

std::int64_t int_param(const json& params, const std::string& key) {
  const json& v = params.at(key);
  if (!v.is_number_integer()) throw UsageError("parameter '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string str_param(const json& params, const std::string& key) {
  const json& v = params.at(key);
  if (!v.is_string()) throw UsageError("parameter '" + key + "' must be a string");
  return v.get<std::string>();
}

const Field& field_param(const json& params) {
  const std::int64_t q = int_param(params, "q");
  if (q < 2) throw UsageError("parameter 'q' must be a prime power");
  return field_of_order(static_cast<std::uint64_t>(q));
}

int positive_param(const json& params, const std::string& key, int lo) {
  const std::int64_t v = int_param(params, key);
  if (v < lo || v > 64) throw UsageError("parameter '" + key + "' out of range");
  return static_cast<int>(v);
}

Env base_env(const json& params) {
  Env env;
  for (const auto& [k, v] : params.items())
    if (v.is_number_integer()) env[k] = v.get<std::int64_t>();
  if (env.count("q")) env["p"] = field_of_order(static_cast<std::uint64_t>(env["q"])).p();
  return env;
}

Check make_check(const CatalogEntry& e, const std::string& name, json computed, const Env& env) {
  const PredictionRule& rule = e.rule(name);
  Check c;
  c.name = name;
  c.provenance = rule.provenance;
  c.basis = rule.basis;
  c.computed = std::move(computed);
  if (auto p = evaluate_prediction(rule.expr, env)) {
    c.predicted = *p;
    c.verdict = c.computed.is_number_integer() && c.computed.get<std::int64_t>() == *p ? Verdict::Pass : Verdict::Fail;
  } else {
    c.predicted = nullptr;
  }
  return c;
}

void finish(Experiment& e) {
  bool any_pass = false, any_fail = false;
  for (const auto& c : e.checks) {
    any_pass |= c.verdict == Verdict::Pass;
    any_fail |= c.verdict == Verdict::Fail;
  }
  e.verdict = any_fail ? Verdict::Fail : any_pass ? Verdict::Pass : Verdict::ReportOnly;
}

json mats(const std::vector<Mat>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(m.to_string());
  return out;
}

json subgroup_witness(const Subgroup& h) {
  std::vector<Mat> gens;
  for (Id g : h.generators()) gens.push_back(h.parent().element(g));
  return {{"order", h.order()}, {"generators", mats(gens)}};
}

Subgroup diagonal_subgroup(const GroupTable& g) {
  const Field& f = g.field();
  const int n = g.n();
  std::vector<Id> ids;
  std::vector<Elem> d(n, 1);
  // odometer over (F_q^*)^n
  for (;;) {
    if (auto id = g.find(Mat::diagonal(f, d))) ids.push_back(*id);
    int i = 0;
    while (i < n && d[i] == f.q() - 1) d[i++] = 1;
    if (i == n) break;
    ++d[i];
  }
  return Subgroup(g, std::move(ids));
}

// ---- experiments ----

using Runner = std::function<void(const CatalogEntry&, const json&, Experiment&)>;

void run_e1(const CatalogEntry& ce, const json& params, Experiment& e) {
  const Field& f = field_param(params);
  const int r = positive_param(params, "r", 1);
  const FamilySpec fam = parse_family("gl:2");
  auto g = instantiate(fam, f);
  const ZPartition base = z_partition(*g);
  std::vector<Mat> seeds;
  for (const auto& c : conjugacy_classes(*g)) seeds.push_back(g->element(c.rep));
  const Stabilization st = geometric_stabilize(fam, f, seeds, static_cast<std::uint32_t>(r));

  Env env = base_env(params);
  e.checks.push_back(make_check(ce, "geometric", st.r_star ? json(st.stable.size()) : json(nullptr), env));
  e.checks.push_back(make_check(ce, "base", base.zclass_count(), env));
  std::vector<Mat> reps;
  for (const auto& b : base.blocks) reps.push_back(g->element(b.rep));
  e.witnesses["base_block_reps"] = mats(reps);
  json blocks = json::array();
  for (const auto& blk : st.stable) {
    std::vector<Mat> ms;
    for (std::size_t s : blk) ms.push_back(seeds[s]);
    blocks.push_back(mats(ms));
  }
  e.witnesses["stable_blocks"] = blocks;
  e.witnesses["r_star"] = st.r_star ? json(*st.r_star) : json(nullptr);
  e.witnesses["certificate"] = st.certificate;
}

void run_e2(const CatalogEntry& ce, const json& params, Experiment& e) {
  const Field& f = field_param(params);
  if (f.p() == 2) throw DomainError("sl2-unipotent needs odd q");
  auto g = instantiate(parse_family("sl:2"), f);
  const ZPartition p = z_partition(*g, filter_regular_unipotent());
  Env env = base_env(params);
  e.checks.push_back(make_check(ce, "rational_classes", p.classes_considered, env));
  e.checks.push_back(make_check(ce, "zclasses", p.zclass_count(), env));
  json blocks = json::array();
  for (const auto& b : p.blocks) {
    std::vector<Mat> reps;
    for (Id x : b.class_reps) reps.push_back(g->element(x));
    blocks.push_back({{"class_reps", mats(reps)}, {"centralizer", subgroup_witness(*b.centralizer)}});
  }
  e.witnesses["blocks"] = blocks;
}

void run_e3(const CatalogEntry& ce, const json& params, Experiment& e) {
  const Field& f = field_param(params);
  const FamilySpec fam = parse_family("sl:3");
  check_guard(fam, f);
  const auto reps = regular_unipotent_class_reps(f, 3);
  FamilySpec famx = fam;
  famx.allow_bad_char = true;  // guard already checked above
  auto g = instantiate(famx, f);
  const ZPartition p = z_partition(*g, filter_regular_unipotent());
  Env env = base_env(params);
  e.checks.push_back(make_check(ce, "rational_classes", reps.size(), env));
  e.checks.push_back(make_check(ce, "zclasses", p.zclass_count(), env));
  e.witnesses["class_reps"] = mats(reps);
  e.witnesses["table_classes"] = p.classes_considered;
  std::vector<Mat> zreps;
  for (const auto& b : p.blocks) zreps.push_back(g->element(b.rep));
  e.witnesses["zclass_reps"] = mats(zreps);
}

void run_e4(const CatalogEntry& ce, const json& params, Experiment& e) {
  const Field& f = field_param(params);
  const int n = positive_param(params, "n", 2);
  check_guard(FamilySpec{FamilyKind::SL, n}, f);
  const auto reps = regular_unipotent_class_reps(f, n);
  e.checks.push_back(make_check(ce, "rational_classes", reps.size(), base_env(params)));
  e.witnesses["class_reps"] = mats(reps);
}

void run_e5(const CatalogEntry& ce, const json& params, Experiment& e) {
  const Field& f = field_param(params);
  const int n = positive_param(params, "n", 1);
  auto g = instantiate(FamilySpec{FamilyKind::GL, n}, f);
  const ZPartition p = z_partition(*g, filter_regular_semisimple());
  const Subgroup t = diagonal_subgroup(*g);
  const Subgroup nt = normalizer(*g, t);
  const QuotientGroup w(nt, t);
  Env env = base_env(params);
  env["weyl_classes"] = static_cast<std::int64_t>(w.conjugacy_class_count());
  env["partitions"] = static_cast<std::int64_t>(partition_count(n));
  e.checks.push_back(make_check(ce, "rss_zclasses", p.zclass_count(), env));
  e.checks.push_back(make_check(ce, "weyl_classes", w.conjugacy_class_count(), env));
  json blocks = json::array();
  for (const auto& b : p.blocks)
    blocks.push_back({{"rep", g->element(b.rep).to_string()}, {"centralizer_order", b.centralizer->order()}});
  e.witnesses["blocks"] = blocks;
  e.witnesses["torus"] = subgroup_witness(t);
  e.witnesses["normalizer"] = subgroup_witness(nt);
}

void run_e6(const CatalogEntry& ce, const json& params, Experiment& e) {
  const std::string which = str_param(params, "which");
  std::string family;
  std::uint64_t q = 0;
  if (which == "gl2/F2") family = "borel-gl:2", q = 2;
  else if (which == "sl2/F3") family = "borel-sl:2", q = 3;
  else throw UsageError("parameter 'which' must be gl2/F2 or sl2/F3, got '" + which + "'");
  const FamilySpec fam = parse_family(family);
  const Field& f = field_of_order(q);
  const Mat u = regular_unipotent(f, 2, 1);
  const ProbeReport rep = base_change_probe(fam, f, 2, {{Mat::identity(f, 2), u}});
  const GrowthDegree gd = growth_degree(fam, f, u, {1, 2, 3, 4});
  Env env = base_env(params);
  env["gl"] = which == "gl2/F2";
  const ProbeResult& pr = rep.pairs.at(0);
  e.checks.push_back(make_check(ce, "base_equivalent", pr.equivalent_base ? 1 : 0, env));
  e.checks.push_back(make_check(ce, "ext_equivalent", pr.equivalent_ext ? 1 : 0, env));
  e.checks.push_back(make_check(ce, "growth_degree", gd.degree ? json(*gd.degree) : json(nullptr), env));
  e.witnesses["pair"] = mats({pr.g, pr.h});
  e.witnesses["groups"] = {rep.group, rep.ext_group};
  e.witnesses["growth"] = {{"degrees", gd.degrees}, {"orders", gd.orders}, {"slopes", gd.slopes}};
}

void run_e7(const CatalogEntry& ce, const json& params, Experiment& e) {
  const Field& f = field_param(params);
  auto g = instantiate(parse_family("u3"), f);
  const ZPartition p = z_partition(*g);
  std::set<std::size_t> blocks;
  std::vector<Mat> hs;
  json rows = json::array();
  for (Elem t = 1; t < f.q(); ++t) {
    const Mat h = heisenberg_element(f, t);
    const Id id = g->id_of(h);
    const auto b = p.block_of_class(g->class_of(id));
    if (b) blocks.insert(*b);
    hs.push_back(h);
    rows.push_back({{"t", t}, {"h", h.to_string()}, {"block", b ? json(*b) : json(nullptr)},
                    {"centralizer", subgroup_witness(centralizer(*g, id))}});
  }
  e.checks.push_back(make_check(ce, "distinct_zclasses", blocks.size(), base_env(params)));
  e.witnesses["elements"] = rows;
}

void run_e8(const CatalogEntry& ce, const json& params, Experiment& e) {
  const Field& f = field_param(params);
  const int n = positive_param(params, "n", 2);
  auto g = instantiate(FamilySpec{FamilyKind::SL, n}, f);
  const Subgroup t = diagonal_subgroup(*g);
  std::size_t equal = 0;
  json hits = json::array();
  for (Id h = 0; h < g->order(); ++h) {
    if (g->centralizer_order(h) != t.order()) continue;
    if (centralizer(*g, h) == t) {
      ++equal;
      if (hits.size() < 8) hits.push_back(g->element(h).to_string());
    }
  }
  Env env = base_env(params);
  e.checks.push_back(make_check(ce, "torus_order", t.order(), env));
  e.checks.push_back(make_check(ce, "equal_centralizers", equal, env));
  e.witnesses["torus"] = subgroup_witness(t);
  e.witnesses["group_order"] = g->order();
  e.witnesses["matching_elements"] = hits;
}

void run_e9(const CatalogEntry& ce, const json& params, Experiment& e) {
  const int m = positive_param(params, "m", 3);
  auto g = instantiate(parse_group("dihedral:" + std::to_string(m)));
  const ZPartition p = z_partition(*g);
  e.checks.push_back(make_check(ce, "zclasses", p.zclass_count(), base_env(params)));
  json blocks = json::array();
  for (const auto& b : p.blocks)
    blocks.push_back({{"rep", g->element(b.rep).to_string()}, {"classes", b.classes.size()},
                      {"centralizer_order", b.centralizer->order()}});
  e.witnesses["field"] = g->field().name();
  e.witnesses["blocks"] = blocks;
}

void run_e10(const CatalogEntry& ce, const json& params, Experiment& e) {
  const Field& f = field_param(params);
  const std::int64_t beta = int_param(params, "beta");
  if (beta < 1 || beta >= f.q()) throw UsageError("parameter 'beta' must be a nonzero element of F_" + f.name());
  const FamilySpec fam = parse_family("sl:3");
  auto g = instantiate(fam, f);
  const Id u = g->id_of(regular_unipotent(f, 3, static_cast<Elem>(beta)));
  const Subgroup z = centralizer(*g, u);
  const Subgroup nz = normalizer(*g, z);
  std::vector<Mat> diag;
  for (Id x : nz.members()) {
    const Mat m = g->element(x);
    if (m(0, 1) == 0 && m(0, 2) == 0 && m(1, 0) == 0 && m(1, 2) == 0 && m(2, 0) == 0 && m(2, 1) == 0) diag.push_back(m);
  }
  // pairs (d, a) with d^3 a^3 = 1
  std::int64_t dformula = 0;
  for (Elem d = 1; d < f.q(); ++d)
    for (Elem a = 1; a < f.q(); ++a)
      if (f.mul(f.pow(d, 3), f.pow(a, 3)) == 1) ++dformula;
  Env env = base_env(params);
  env["dformula"] = dformula;
  e.checks.push_back(make_check(ce, "normalizer_order", nz.order(), env));
  e.checks.push_back(make_check(ce, "diagonal_part", diag.size(), env));
  e.witnesses["u"] = g->element(u).to_string();
  e.witnesses["centralizer"] = subgroup_witness(z);
  e.witnesses["normalizer"] = subgroup_witness(nz);
  e.witnesses["diagonal"] = mats(diag);
}

void run_e11(const CatalogEntry& ce, const json& params, Experiment& e) {
  const Field& f = field_param(params);
  const int r = positive_param(params, "r", 1);
  const FamilySpec fam = parse_family(str_param(params, "family"));
  const std::string seed_s = str_param(params, "seed");
  auto base = instantiate(fam, f);
  Mat seed;
  if (seed_s == "auto") {
    for (const auto& c : conjugacy_classes(*base))
      if (is_regular_semisimple(base->element(c.rep))) {
        seed = base->element(c.rep);
        break;
      }
    if (seed.empty()) throw DomainError("no regular semisimple element in " + base->name());
  } else {
    seed = parse_mat(f, seed_s);
  }
  const Id sid = base->id_of(seed);
  const FormSet fs = fusion_count(fam, f, static_cast<std::uint32_t>(r), seed);

  const Field& big = make_field(f.p(), f.m() * static_cast<std::uint32_t>(r));
  auto ext = instantiate(fam, big);
  const Subgroup zg = centralizer(*base, sid);
  std::vector<Id> zids;
  for (Id z : zg.members()) zids.push_back(ext->id_of(embed(base->element(z), big)));
  const Subgroup zg_ext = centralizer_of(*ext, centralizer_of(*ext, Subgroup(*ext, std::move(zids))));
  const Subgroup nz = normalizer(*ext, zg_ext);
  const TwistedGroup tn = twisted_frobenius(nz, f);
  const TwistedGroup amb = twisted_frobenius(whole(*ext), f);
  const auto ker = kernel_under_map(tn, amb, [&](std::size_t x) { return *amb.index_of_parent(tn.parent_ids()[x]); });
  const QuotientGroup w(nz, zg_ext);
  const TwistedGroup tw =
      twisted_quotient(w, [&](Id x) { return ext->id_of(frobenius(ext->element(x), f.m())); });
  const std::size_t wclasses = twisted_classes(tw).size();

  Env env = base_env(params);
  json fiber = fs.zlevel_available ? json(fs.zclass_count()) : json(nullptr);
  json within = fs.zlevel_available ? json(fs.zclass_count() <= ker.size() ? 1 : 0) : json(nullptr);
  e.checks.push_back(make_check(ce, "fiber_within_forms", within, env));
  e.checks.push_back(make_check(ce, "fiber", fiber, env));
  e.checks.push_back(make_check(ce, "normalizer_forms", ker.size(), env));
  e.checks.push_back(make_check(ce, "quotient_classes", wclasses, env));
  std::vector<Mat> fused;
  for (Id x : fs.fused_zclass_reps) fused.push_back(base->element(x));
  e.witnesses["seed"] = seed.to_string();
  e.witnesses["fused_zclass_reps"] = mats(fused);
  e.witnesses["zg"] = subgroup_witness(zg);
  e.witnesses["zg_ext"] = subgroup_witness(zg_ext);
  e.witnesses["normalizer_ext"] = subgroup_witness(nz);
}

void run_e12(const CatalogEntry& ce, const json& params, Experiment& e) {
  const int n_max = positive_param(params, "n_max", 1);
  const json& qs = params.at("qs");
  if (!qs.is_array() || qs.empty()) throw UsageError("parameter 'qs' must be a non-empty array of prime powers");
  const PredictionRule& rule = ce.rule("twisted_classes");
  json pred = json::array(), twisted = json::array(), power = json::array(), inflated = json::array();
  json upred = json::array(), ucomp = json::array(), points = json::array(), upoints = json::array();
  for (const json& qv : qs) {
    if (!qv.is_number_integer()) throw UsageError("parameter 'qs' must hold integers");
    const std::uint64_t q = qv.get<std::uint64_t>();
    const Field& f = field_of_order(q);
    for (int n = 1; n <= n_max; ++n) {
      Env env{{"n", n}, {"q", static_cast<std::int64_t>(q)}, {"p", f.p()}};
      const auto expect = evaluate_prediction(rule.expr, env);
      const H1MuN h = h1_mu_n(q, static_cast<std::uint64_t>(n));
      points.push_back({{"n", n}, {"q", q}, {"r", h.r}, {"realized_in_field", h.realized_in_field}});
      pred.push_back(expect ? json(*expect) : json(nullptr));
      twisted.push_back(h.twisted_count);
      power.push_back(h.power_class_count);
      inflated.push_back(h.inflated_count);
      if (n >= 2 && n <= 3 && n % static_cast<int>(f.p()) != 0) {
        upoints.push_back({{"n", n}, {"q", q}});
        upred.push_back(pred.back());
        ucomp.push_back(regular_unipotent_class_reps(f, n).size());
      }
    }
  }
  auto array_check = [&](const std::string& name, const json& predicted, const json& computed) {
    const PredictionRule& rl = ce.rule(name);
    Check c;
    c.name = name;
    c.provenance = rl.provenance;
    c.basis = rl.basis;
    c.predicted = predicted;
    c.computed = computed;
    c.verdict = predicted == computed ? Verdict::Pass : Verdict::Fail;
    return c;
  };
  e.checks.push_back(array_check("twisted_classes", pred, twisted));
  e.checks.push_back(array_check("power_classes", pred, power));
  e.checks.push_back(array_check("inflated", pred, inflated));
  e.checks.push_back(array_check("unipotent_classes", upred, ucomp));
  e.witnesses["points"] = points;
  e.witnesses["unipotent_points"] = upoints;
}

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> m = {
      {"E1", run_e1}, {"E2", run_e2}, {"E3", run_e3},   {"E4", run_e4},   {"E5", run_e5},   {"E6", run_e6},
      {"E7", run_e7}, {"E8", run_e8}, {"E9", run_e9}, {"E10", run_e10}, {"E11", run_e11}, {"E12", run_e12}};
  return m;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string cell(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::ReportOnly: return "report-only";
  }
  return "?";
}

const PredictionRule& CatalogEntry::rule(const std::string& check) const {
  for (const auto& r : rules)
    if (r.check == check) return r;
  throw std::logic_error(id + " has no prediction rule for '" + check + "'");
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = build_catalog();
  return c;
}

const CatalogEntry& catalog_entry(const std::string& id_or_slug) {
  const std::string key = lower(id_or_slug);
  for (const auto& e : catalog())
    if (lower(e.id) == key || e.slug == key) return e;
  throw UsageError("unknown experiment '" + id_or_slug + "'");
}

std::optional<std::int64_t> evaluate_prediction(const std::string& expr, const Env& env) {
  const Value v = ExprParser(expr, env).parse();
  if (v.report) return std::nullopt;
  return v.v;
}

const Check* Experiment::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

Experiment run_experiment(const std::string& id, const json& params) {
  const CatalogEntry& ce = catalog_entry(id);
  if (!params.is_object()) throw UsageError("experiment parameters must be an object");
  json merged = ce.defaults;
  bool allow_bad_char = limits().allow_bad_char;
  for (const auto& [k, v] : params.items()) {
    if (k == "allow_bad_char") {
      if (!v.is_boolean()) throw UsageError("parameter 'allow_bad_char' must be true or false");
      allow_bad_char = allow_bad_char || v.get<bool>();
      continue;
    }
    if (!merged.contains(k)) throw UsageError(ce.id + " has no parameter '" + k + "'");
    merged[k] = v;
  }
  Experiment e;
  e.id = ce.id;
  e.slug = ce.slug;
  e.params = merged;
  if (allow_bad_char) e.params["allow_bad_char"] = true;

  Limits lim = limits();
  lim.allow_bad_char = allow_bad_char;
  ScopedLimits scope(lim);
  const auto t0 = std::chrono::steady_clock::now();
  runners().at(ce.id)(ce, merged, e);
  e.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  finish(e);
  return e;
}

std::size_t SuiteSummary::failures() const {
  return static_cast<std::size_t>(
      std::count_if(runs.begin(), runs.end(), [](const Experiment& e) { return e.verdict == Verdict::Fail; }));
}

double SuiteSummary::runtime_s() const {
  double s = 0;
  for (const auto& e : runs) s += e.runtime_s;
  return s;
}

std::vector<std::pair<std::string, json>> suite_plan(const std::string& name) {
  using P = std::vector<std::pair<std::string, json>>;
  const json none = json::object();
  if (name == "smoke")
    return P{{"E1", {{"q", 2}}}, {"E2", {{"q", 3}}}, {"E6", {{"which", "gl2/F2"}}}, {"E6", {{"which", "sl2/F3"}}},
             {"E8", {{"n", 3}}}};
  if (name == "paper") {
    P out;
    for (const auto& e : catalog()) {
      out.emplace_back(e.id, none);
      if (e.id == "E6") out.emplace_back(e.id, json{{"which", "sl2/F3"}});
    }
    return out;
  }
  if (name == "full") {
    P out;
    for (int q : {2, 3, 4, 5}) out.emplace_back("E1", json{{"q", q}});
    for (int q : {3, 5, 7, 9}) out.emplace_back("E2", json{{"q", q}});
    out.emplace_back("E3", json{{"q", 2}});
    out.emplace_back("E3", json{{"q", 3}, {"allow_bad_char", true}});
    for (int q : {4, 5}) out.emplace_back("E3", json{{"q", q}});
    for (auto [n, q] : std::vector<std::pair<int, int>>{{2, 7}, {3, 7}, {4, 5}, {4, 9}, {5, 11}, {6, 7}})
      out.emplace_back("E4", json{{"n", n}, {"q", q}});
    for (auto [n, q] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {2, 5}, {2, 7}, {3, 4}, {3, 5}})
      out.emplace_back("E5", json{{"n", n}, {"q", q}});
    out.emplace_back("E6", json{{"which", "gl2/F2"}});
    out.emplace_back("E6", json{{"which", "sl2/F3"}});
    for (int q : {3, 4, 5, 7}) out.emplace_back("E7", json{{"q", q}});
    out.emplace_back("E8", json{{"n", 2}, {"allow_bad_char", true}});
    out.emplace_back("E8", json{{"n", 3}});
    for (int m : {3, 4, 5, 6, 7, 9}) out.emplace_back("E9", json{{"m", m}});
    for (int q : {2, 4, 5}) out.emplace_back("E10", json{{"q", q}});
    out.emplace_back("E10", json{{"q", 4}, {"beta", 2}});
    for (int q : {3, 5}) out.emplace_back("E11", json{{"q", q}});
    out.emplace_back("E11", json{{"family", "sl:2"}, {"q", 5}});
    out.emplace_back("E12", none);
    return out;
  }
  throw UsageError("unknown suite '" + name + "' (expected smoke, paper or full)");
}

SuiteSummary verify_suite(const std::string& name) {
  SuiteSummary s;
  s.name = name;
  for (const auto& [id, params] : suite_plan(name)) {
    try {
      s.runs.push_back(run_experiment(id, params));
    } catch (const Error& err) {
      const CatalogEntry& ce = catalog_entry(id);
      Experiment e;
      e.id = ce.id;
      e.slug = ce.slug;
      e.params = params;
      e.verdict = Verdict::Fail;
      e.error = err.what();
      s.runs.push_back(std::move(e));
    }
  }
  return s;
}

json to_json(const Experiment& e, bool with_runtime) {
  json out;
  out["schema"] = "zclass-kit/1";
  out["id"] = e.id;
  out["slug"] = e.slug;
  out["params"] = e.params;
  out["verdict"] = to_string(e.verdict);
  json checks = json::array();
  for (const auto& c : e.checks)
    checks.push_back({{"name", c.name},
                      {"predicted", c.predicted},
                      {"computed", c.computed},
                      {"provenance", c.provenance},
                      {"basis", c.basis},
                      {"verdict", to_string(c.verdict)}});
  out["checks"] = checks;
  if (e.error) out["error"] = *e.error;
  out["witnesses"] = e.witnesses;
  if (with_runtime) out["runtime_s"] = e.runtime_s;
  return out;
}

json to_json(const SuiteSummary& s, bool with_runtime) {
  json out;
  out["schema"] = "zclass-kit/1";
  out["suite"] = s.name;
  out["passed"] = s.passed();
  out["failures"] = s.failures();
  json runs = json::array();
  for (const auto& e : s.runs) runs.push_back(to_json(e, with_runtime));
  out["experiments"] = runs;
  return out;
}

std::string params_string(const json& params) {
  std::string out;
  for (const auto& [k, v] : params.items()) {
    if (!out.empty()) out += ", ";
    out += k + "=" + cell(v);
  }
  return out;
}

std::string to_markdown(const std::vector<Experiment>& runs) {
  std::ostringstream os;
  os << "| id | params | check | predicted | computed | verdict |\n";
  os << "|---|---|---|---|---|---|\n";
  for (const auto& e : runs) {
    const std::string head = "| " + e.id + " " + e.slug + " | " + params_string(e.params) + " | ";
    if (e.error) os << head << "error | - | " << *e.error << " | " << to_string(e.verdict) << " |\n";
    for (const auto& c : e.checks)
      os << head << c.name << " | " << cell(c.predicted) << " | " << cell(c.computed) << " | " << to_string(c.verdict)
         << " |\n";
  }
  return os.str();
}

std::string runtime_footer(const std::vector<Experiment>& runs) {
  double total = 0;
  std::string parts;
  for (const auto& e : runs) {
    total += e.runtime_s;
    if (!parts.empty()) parts += ", ";
    parts += e.id + " " + seconds(e.runtime_s);
  }
  return "runtime: total " + seconds(total) + " (" + parts + ")";
}

std::vector<Mat> regular_unipotent_class_reps(const Field& f, int n) {
  std::vector<Mat> reps;
  for (Elem beta = 1; beta < f.q(); ++beta) {
    const Mat u = regular_unipotent(f, n, beta);
    bool seen = false;
    for (const auto& r : reps)
      if (sl_conjugate_test(u, r)) {
        seen = true;
        break;
      }
    if (!seen) reps.push_back(u);
  }
  return reps;
}

std::uint64_t partition_count(int n) {
  if (n < 0) return 0;
  // p[k] over parts of size <= j, one part size at a time
  std::vector<std::uint64_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int j = 1; j <= n; ++j)
    for (int k = j; k <= n; ++k) p[k] += p[k - j];
  return p[n];
}

}  // namespace zk
