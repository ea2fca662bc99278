// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any
// failure. Time budgets are part of each criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zk/error.hpp"
#include "zk/galh1.hpp"
#include "zk/paperlab.hpp"
#include "zk/zclass.hpp"

using namespace zk;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream notes;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [" << what << "]";
    }
  }
};

std::int64_t computed(const Experiment& e, const std::string& check) {
  const Check* c = e.find(check);
  if (!c || !c->computed.is_number_integer()) return -1;
  return c->computed.get<std::int64_t>();
}

std::vector<Mat> elements(const GroupTable& g) {
  std::vector<Mat> out;
  for (Id i = 0; i < g.order(); ++i) out.push_back(g.element(i));
  return out;
}

std::unique_ptr<GroupTable> make(const std::string& s) { return instantiate(parse_group(s)); }

Elem non_square(const Field& f) {
  for (Elem c = 1; c < f.q(); ++c) {
    bool sq = false;
    for (Elem y = 1; y < f.q(); ++y) sq |= f.mul(y, y) == c;
    if (!sq) return c;
  }
  return 0;
}

void c1(Outcome& o) {
  const std::vector<std::pair<std::string, std::size_t>> census = {{"gl:2@2^1", 3}, {"gl:2@3^1", 4}, {"gl:2@5^1", 4}};
  for (const auto& [s, want] : census) {
    auto g = make(s);
    const std::size_t got = z_partition(*g).zclass_count();
    o.notes << " " << s << "=" << got;
    o.expect(got == want, s + " expected " + std::to_string(want));
    if (g->order() <= 48) o.expect(oracle::z_class_count(elements(*g)) == want, s + " brute force disagrees");
  }
  auto g3 = make("gl:2@3^1");
  std::vector<Mat> seeds;
  for (const auto& c : conjugacy_classes(*g3)) seeds.push_back(g3->element(c.rep));
  const Stabilization st = geometric_stabilize(parse_family("gl:2"), g3->field(), seeds, 2);
  o.notes << "; stabilized blocks=" << st.stable.size();
  o.expect(st.r_star.has_value() && st.stable.size() == 3, "geometric stabilization over F_9 should give 3 blocks");
}

void c2(Outcome& o) {
  for (int q : {3, 5, 7}) {
    const Experiment e = run_experiment("E2", {{"q", q}});
    const auto rc = computed(e, "rational_classes"), zc = computed(e, "zclasses");
    o.notes << " q=" << q << ":(" << rc << "," << zc << ")";
    o.expect(rc == 2 && zc == 1, "q=" + std::to_string(q));
    o.expect(regular_unipotent_class_reps(field_of_order(q), 2).size() == 2, "structured count q=" + std::to_string(q));
  }
}

void c3(Outcome& o) {
  const std::vector<std::pair<int, std::int64_t>> want = {{2, 1}, {3, 1}, {4, 3}};
  for (const auto& [q, w] : want) {
    json params = {{"q", q}};
    if (q == 3) params["allow_bad_char"] = true;
    const Experiment e = run_experiment("E3", params);
    const auto rc = computed(e, "rational_classes"), zc = computed(e, "zclasses");
    o.notes << " q=" << q << ":(" << rc << "," << zc << ")";
    o.expect(rc == w && zc == w, "q=" + std::to_string(q) + " expected " + std::to_string(w));
  }
}

void c4(Outcome& o) {
  const std::vector<std::tuple<int, int, std::int64_t>> cases = {{2, 3, 2}, {2, 4, 2}, {2, 5, 2}, {3, 5, 3}};
  for (const auto& [n, q, w] : cases) {
    const Experiment e = run_experiment("E5", {{"n", n}, {"q", q}});
    const auto z = computed(e, "rss_zclasses"), weyl = computed(e, "weyl_classes");
    o.notes << " GL" << n << "(F" << q << "):" << z << "/" << weyl;
    o.expect(z == w && weyl == w && static_cast<std::uint64_t>(w) == partition_count(n),
             "GL_" + std::to_string(n) + "(F_" + std::to_string(q) + ")");
  }
}

void c5(Outcome& o) {
  for (std::string which : {"gl2/F2", "sl2/F3"}) {
    const Experiment e = run_experiment("E6", {{"which", which}});
    const bool base = computed(e, "base_equivalent") == 1, ext = computed(e, "ext_equivalent") == 1;
    o.notes << " " << which << ": base=" << base << " ext=" << ext;
    o.expect(base && !ext, which + " should be equivalent only over the base");
    if (which == "gl2/F2") {
      const auto d = computed(e, "growth_degree");
      o.notes << " growth=" << d;
      o.expect(d == 2, "growth degree of the Borel unipotent centralizer");
    }
  }
}

void c6(Outcome& o) {
  for (int q : {5, 7}) {
    const Experiment e = run_experiment("E7", {{"q", q}});
    const auto d = computed(e, "distinct_zclasses");
    o.notes << " U3(F" << q << "):" << d;
    o.expect(d == q - 1, "q=" + std::to_string(q));
    auto g = make("u3@" + std::to_string(q) + "^1");
    const Field& f = g->field();
    for (Elem s = 1; s < f.q(); ++s)
      for (Elem t = s + 1; t < f.q(); ++t)
        o.expect(!z_equivalent(*g, g->id_of(heisenberg_element(f, s)), g->id_of(heisenberg_element(f, t))),
                 "h(" + std::to_string(s) + ") ~ h(" + std::to_string(t) + ")");
  }
}

void c7(Outcome& o) {
  const Experiment e = run_experiment("E12");
  for (const auto& c : e.checks) {
    o.notes << " " << c.name << "=" << to_string(c.verdict);
    o.expect(c.verdict == Verdict::Pass, c.name);
  }
}

void c8(Outcome& o) {
  const FamilySpec fam = parse_family("gl:2");
  for (std::uint32_t q : {3u, 5u}) {
    auto g = instantiate(fam, field_of_order(q));
    const Field& f = g->field();
    const Field& k = make_field(f.p(), 2);
    std::vector<Id> diag;
    for (Elem a = 1; a < q; ++a)
      for (Elem b = 1; b < q; ++b) diag.push_back(g->id_of(Mat::diagonal(f, {a, b})));
    const Subgroup t(*g, diag);
    const Mat x = companion(f, {f.neg(non_square(f)), 0, 1});
    const auto a = eigenbasis(x, k);
    o.expect(a.has_value(), "eigenbasis over F_{q^2}");
    if (!a) continue;
    const FormCocycle fc = cocycle_of_form(fam, f, 2, t, *a);
    o.expect(cocycle_check(fc.cocycle), "cocycle check q=" + std::to_string(q));
    o.expect(fc.in_normalizer && !fc.in_zg && !fc.trivial_class, "Weyl image q=" + std::to_string(q));
    const Experiment e = run_experiment("E11", {{"q", static_cast<int>(q)}, {"seed", x.to_string()}});
    const auto fiber = computed(e, "fiber"), bound = computed(e, "quotient_classes");
    o.notes << " q=" << q << ": c=" << fc.value.to_string() << " fiber=" << fiber << " bound=" << bound;
    o.expect(fiber == 2 && bound == 2, "fiber and N(T)/T bound q=" + std::to_string(q));
    o.expect(e.verdict == Verdict::Pass, "E11 q=" + std::to_string(q));
  }
}

void c9(Outcome& o) {
  std::size_t violations = 0, groups = 0;
  auto note = [&](bool ok, const std::string& what) {
    if (!ok) {
      ++violations;
      if (violations <= 5) o.notes << " [" << what << "]";
    }
  };
  const std::vector<std::string> specs = {"gl:2@2^1",       "gl:2@3^1",       "gl:2@2^2",       "gl:2@5^1",
                                          "sl:2@3^1",       "sl:2@5^1",       "sl:2@7^1",       "gl:3@2^1",
                                          "sl:3@2^1",       "borel-gl:2@2^2", "borel-gl:2@3^1", "borel-sl:2@3^1",
                                          "u3@3^1",         "u3@5^1",         "unipotent:3@2^1", "unipotent:4@2^1",
                                          "dihedral:5",     "dihedral:6",     "dihedral:7",     "gl:2@7^1",
                                          "gl:2@3^2",       "sl:2@11^1",      "gl:3@3^1",       "borel-gl:3@2^1"};
  for (const auto& s : specs) {
    auto g = make(s);
    if (g->order() > 100000) continue;
    ++groups;
    const ZPartition p = z_partition(*g);
    for (const auto& v : check_zpartition(p)) note(false, s + ": " + v);
    // identity's z-class is the center
    const Subgroup z = center(*g);
    const auto b = p.block_of_class(g->class_of(g->identity()));
    std::set<Id> block_elems;
    if (b)
      for (std::size_t c : p.blocks[*b].classes)
        for (Id x : g->class_info(c).members) block_elems.insert(x);
    note(block_elems == std::set<Id>(z.members().begin(), z.members().end()), s + ": identity z-class != center");
    note(g->is_abelian() == (p.zclass_count() == 1), s + ": abelian iff one z-class");
    for (Id x = 0; x < g->order(); ++x) {
      const Subgroup zx = centralizer(*g, x);
      note(zx.order() * g->class_info(g->class_of(x)).members.size() == g->order(), s + ": orbit-stabilizer");
      const JordanPair jd = jordan_decomposition(g->element(x));
      const auto s_id = g->find(jd.semisimple), u_id = g->find(jd.unipotent);
      note(s_id && u_id, s + ": Jordan parts outside the group");
      if (!s_id || !u_id) continue;
      const Subgroup zs = centralizer(*g, *s_id), zu = centralizer(*g, *u_id);
      std::vector<Id> meet;
      std::set_intersection(zs.members().begin(), zs.members().end(), zu.members().begin(), zu.members().end(),
                            std::back_inserter(meet));
      note(meet == zx.members(), s + ": Z(g) != Z(g_s) n Z(g_u) at " + g->element(x).to_string());
    }
  }
  for (std::string s : {"gl:2@2^1", "gl:2@3^1", "sl:2@3^1", "dihedral:5"}) {
    auto g = make(s);
    std::vector<Subgroup> subs;
    for (const auto& c : conjugacy_classes(*g)) {
      subs.push_back(centralizer(*g, c.rep));
      std::vector<Id> cyc = {g->identity()};
      for (Id y = c.rep; y != g->identity(); y = g->mul(y, c.rep)) cyc.push_back(y);
      subs.emplace_back(*g, cyc);
    }
    for (const auto& a : subs)
      for (const auto& b : subs) {
        const auto fast = subgroups_conjugate(*g, a, b);
        const auto slow = subgroups_conjugate_bruteforce(*g, a, b);
        note(fast.has_value() == slow.has_value(), s + ": subgroups_conjugate disagrees with brute force");
        if (fast) note(conjugate(a, *fast) == b, s + ": bad conjugacy witness");
      }
  }
  o.notes << " groups=" << groups << " violations=" << violations;
  o.ok = violations == 0;
}

void c10(Outcome& o) {
  const std::vector<std::pair<int, json>> cases = {{2, {{"n", 2}, {"allow_bad_char", true}}}, {3, {{"n", 3}}}};
  for (const auto& [n, params] : cases) {
    const Experiment e = run_experiment("E8", params);
    const auto t = computed(e, "torus_order"), hits = computed(e, "equal_centralizers");
    o.notes << " SL" << n << "(F2): |T|=" << t << " Z(h)=T for " << hits << " h";
    o.expect(t == 1 && hits == 0, "SL_" + std::to_string(n));
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "GL_2 census and geometric count", 30, c1},
      {2, "SL_2 regular unipotents", 30, c2},
      {3, "SL_3 regular unipotents", 60, c3},
      {4, "torus classification", 60, c4},
      {5, "Borel base-change failures", 5, c5},
      {6, "Heisenberg elements", 5, c6},
      {7, "H^1 triple agreement", 5, c7},
      {8, "cocycle soundness and fiber bound", 30, c8},
      {9, "property suites", 600, c9},
      {10, "split torus of SL_n(F_2)", 5, c10},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.notes << " [exception: " << e.what() << "]";
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > c.budget_s) {
      o.ok = false;
      o.notes << " [over budget " << c.budget_s << " s]";
    }
    failures += !o.ok;
    char t[32];
    std::snprintf(t, sizeof t, "%.2f s", dt);
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " -" << o.notes.str() << " ("
              << t << ")" << std::endl;
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << 10 - failures << "/10" << std::endl;
  return failures ? 1 : 0;
}
