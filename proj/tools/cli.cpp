#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "zk/error.hpp"
#include "zk/galh1.hpp"
#include "zk/paperlab.hpp"
#include "zk/zclass.hpp"

namespace zk::cli {

namespace {

struct Report {
  json data;
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
  std::string footer;    // empty: plain elapsed time
  int exit_code = kOk;
};

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) out += c == '|' ? std::string("\\|") : std::string(1, c);
  return out;
}

void render(const Report& r, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << r.data.dump(2) << "\n";
  } else if (format == "csv") {
    for (std::size_t i = 0; i < r.headers.size(); ++i) out << (i ? "," : "") << csv_cell(r.headers[i]);
    out << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << "\n";
    }
  } else if (format == "md") {
    out << "|";
    for (const auto& h : r.headers) out << " " << md_cell(h) << " |";
    out << "\n|";
    for (std::size_t i = 0; i < r.headers.size(); ++i) out << "---|";
    out << "\n";
    for (const auto& row : r.rows) {
      out << "|";
      for (const auto& c : row) out << " " << md_cell(c) << " |";
      out << "\n";
    }
  } else {
    std::vector<std::size_t> w(r.headers.size(), 0);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = r.headers[i].size();
    for (const auto& row : r.rows)
      for (std::size_t i = 0; i < row.size() && i < w.size(); ++i) w[i] = std::max(w[i], row[i].size());
    auto line = [&](const std::vector<std::string>& cells) {
      std::string s;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += "  ";
        s += cells[i];
        if (i + 1 < cells.size()) s += std::string(w[i] - cells[i].size(), ' ');
      }
      out << s << "\n";
    };
    line(r.headers);
    std::vector<std::string> rule;
    for (std::size_t x : w) rule.push_back(std::string(x, '-'));
    line(rule);
    for (const auto& row : r.rows) line(row);
  }
}

json base(const std::string& command) { return json{{"schema", "zclass-kit/1"}, {"command", command}}; }

std::string yesno(bool b) { return b ? "yes" : "no"; }

std::string cell(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

/// Long arrays are cut to their first entries; json output keeps them whole.
std::string short_cell(const json& v) {
  if (!v.is_array() || v.size() <= 8) return cell(v);
  std::string s = "[";
  for (std::size_t i = 0; i < 6; ++i) s += (i ? "," : "") + v[i].dump();
  return s + ",... " + std::to_string(v.size()) + " values]";
}

std::string join(const std::vector<Mat>& ms) {
  std::string s;
  for (const auto& m : ms) s += (s.empty() ? "" : " ") + m.to_string();
  return s;
}

std::vector<Mat> generator_mats(const Subgroup& h) {
  std::vector<Mat> out;
  for (Id g : h.generators()) out.push_back(h.parent().element(g));
  return out;
}

/// Matrix literal or named constructor: "[1,1;0,1]", "id", "u_beta:b", "h:t", "diag:a,b,...".
Mat parse_element(const std::string& s, const Field& f, int n) {
  auto starts = [&](const std::string& p) { return s.rfind(p, 0) == 0; };
  Mat m;
  if (starts("[")) {
    m = parse_mat(f, s);
  } else if (s == "id") {
    m = Mat::identity(f, n);
  } else if (starts("u_beta:")) {
    m = regular_unipotent(f, n, f.parse(s.substr(7)));
  } else if (starts("h:")) {
    if (n != 3) throw UsageError("element '" + s + "': h(t) needs 3x3 matrices");
    m = heisenberg_element(f, f.parse(s.substr(2)));
  } else if (starts("diag:")) {
    std::vector<Elem> d;
    std::stringstream ss(s.substr(5));
    for (std::string tok; std::getline(ss, tok, ',');) d.push_back(f.parse(tok));
    m = Mat::diagonal(f, d);
  } else {
    throw UsageError("cannot parse element '" + s + "' (expected [..;..], id, u_beta:b, h:t or diag:a,b)");
  }
  if (m.n() != n)
    throw UsageError("element '" + s + "' is " + std::to_string(m.n()) + "x" + std::to_string(m.n()) + ", expected " +
                     std::to_string(n) + "x" + std::to_string(n));
  return m;
}

json parse_param_value(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  if (!v.empty() && (v[0] == '[' || v[0] == '{')) {
    try {
      return json::parse(v);
    } catch (const json::exception&) {
      throw UsageError("cannot parse parameter value '" + v + "'");
    }
  }
  const bool digits = !v.empty() && std::all_of(v.begin() + (v[0] == '-'), v.end(), ::isdigit) && v != "-";
  if (digits) return std::stoll(v);
  return v;
}

// ---- subcommands ----

Report cmd_zclasses(const std::string& group, const std::string& filter) {
  auto g = instantiate(parse_group(group));
  const ZPartition p = z_partition(*g, filter_by_name(filter));
  Report r;
  r.data = base("zclasses");
  r.data["group"] = g->name();
  r.data["order"] = g->order();
  r.data["filter"] = filter;
  r.data["classes_considered"] = p.classes_considered;
  r.data["zclass_count"] = p.zclass_count();
  r.headers = {"block", "rep", "classes", "elements", "centralizer_order", "abelian"};
  json blocks = json::array();
  for (std::size_t i = 0; i < p.blocks.size(); ++i) {
    const ZBlock& b = p.blocks[i];
    std::size_t elems = 0;
    std::vector<Mat> reps;
    for (std::size_t c : b.classes) elems += g->class_info(c).members.size();
    for (Id x : b.class_reps) reps.push_back(g->element(x));
    const bool ab = b.centralizer->is_abelian();
    blocks.push_back({{"block", i},
                      {"rep", g->element(b.rep).to_string()},
                      {"class_reps", json(std::vector<std::string>())},
                      {"elements", elems},
                      {"centralizer_order", b.centralizer->order()},
                      {"centralizer_generators", json::array()},
                      {"abelian", ab}});
    for (const auto& m : reps) blocks.back()["class_reps"].push_back(m.to_string());
    for (const auto& m : generator_mats(*b.centralizer)) blocks.back()["centralizer_generators"].push_back(m.to_string());
    r.rows.push_back({std::to_string(i), g->element(b.rep).to_string(), std::to_string(b.classes.size()),
                      std::to_string(elems), std::to_string(b.centralizer->order()), yesno(ab)});
  }
  r.data["blocks"] = blocks;
  return r;
}

Report cmd_centralizer(const std::string& group, const std::string& elem) {
  auto g = instantiate(parse_group(group));
  const Mat x = parse_element(elem, g->field(), g->n());
  const Id id = g->id_of(x);
  const Subgroup z = centralizer(*g, id);
  const Subgroup cz = center_of(z);
  const auto gens = generator_mats(z);
  Report r;
  r.data = base("centralizer");
  r.data["group"] = g->name();
  r.data["element"] = x.to_string();
  r.data["element_order"] = g->element_order(id);
  r.data["class_size"] = g->order() / z.order();
  json zj = {{"order", z.order()}, {"abelian", z.is_abelian()}, {"center_order", cz.order()}, {"generators", json::array()}};
  for (const auto& m : gens) zj["generators"].push_back(m.to_string());
  r.data["centralizer"] = zj;
  r.headers = {"property", "value"};
  r.rows = {{"group", g->name()},
            {"element", x.to_string()},
            {"element_order", std::to_string(g->element_order(id))},
            {"class_size", std::to_string(g->order() / z.order())},
            {"centralizer_order", std::to_string(z.order())},
            {"abelian", yesno(z.is_abelian())},
            {"center_order", std::to_string(cz.order())},
            {"generators", join(gens)}};
  return r;
}

Report cmd_conjtest(const std::string& group, const std::string& e1, const std::string& e2, bool sl) {
  const GroupSpec spec = parse_group(group);
  const Field& f = *spec.field;
  const int n = spec.family.dim();
  const Mat a = parse_element(e1, f, n), b = parse_element(e2, f, n);
  std::optional<Mat> x;
  std::string method;
  if (sl) {
    if (det(a) != 1 || det(b) != 1) throw DomainError("--sl needs determinant-one matrices");
    x = sl_conjugate_test(a, b);
    method = "sl_conjugate_test";
  } else if (spec.family.is_reductive()) {
    check_guard(spec.family, f);
    for (const Mat* m : {&a, &b})
      if (!family_contains(spec.family, *m)) throw DomainError(m->to_string() + " is not in " + spec.to_string());
    x = family_conjugate(spec.family, a, b);
    method = "canonical-form";
  } else {
    auto g = instantiate(spec);
    const Id ia = g->id_of(a), ib = g->id_of(b);
    if (g->class_of(ia) == g->class_of(ib))
      x = g->element(g->mul(g->conjugator_from_rep(ia), g->inv(g->conjugator_from_rep(ib))));
    method = "group-table";
  }
  Report r;
  r.data = base("conjtest");
  r.data["group"] = spec.to_string();
  r.data["a"] = a.to_string();
  r.data["b"] = b.to_string();
  r.data["conjugate"] = x.has_value();
  r.data["witness"] = x ? json(x->to_string()) : json(nullptr);
  r.data["method"] = method;
  r.headers = {"a", "b", "conjugate", "witness"};
  r.rows = {{a.to_string(), b.to_string(), yesno(x.has_value()), x ? x->to_string() : "-"}};
  return r;
}

Report cmd_probe(const std::string& family, std::uint64_t q, std::uint32_t deg, const std::vector<std::string>& pairs) {
  const FamilySpec fam = parse_family(family);
  const Field& f = field_of_order(q);
  std::vector<std::pair<Mat, Mat>> ps;
  for (const auto& s : pairs) {
    const auto bar = s.find('|');
    if (bar == std::string::npos) throw UsageError("pair '" + s + "' must be written e1|e2");
    ps.emplace_back(parse_element(s.substr(0, bar), f, fam.dim()), parse_element(s.substr(bar + 1), f, fam.dim()));
  }
  const ProbeReport rep = base_change_probe(fam, f, deg, ps);
  Report r;
  r.data = base("probe");
  r.data["group"] = rep.group;
  r.data["ext_group"] = rep.ext_group;
  r.data["r"] = rep.r;
  r.data["pairs"] = json::array();
  r.headers = {"g", "h", "base", "ext", "changed"};
  for (const auto& p : rep.pairs) {
    r.data["pairs"].push_back({{"g", p.g.to_string()},
                               {"h", p.h.to_string()},
                               {"equivalent_base", p.equivalent_base},
                               {"equivalent_ext", p.equivalent_ext},
                               {"changed", p.changed()}});
    r.rows.push_back({p.g.to_string(), p.h.to_string(), yesno(p.equivalent_base), yesno(p.equivalent_ext),
                      yesno(p.changed())});
  }
  return r;
}

Report cmd_h1_mu(std::uint64_t n, std::uint64_t q, std::uint32_t deg) {
  const H1MuN h = h1_mu_n(q, n, deg);
  Report r;
  r.data = base("h1");
  r.data["coefficients"] = "mu_" + std::to_string(n);
  r.data["frobenius_power"] = q;
  r.data["realizing_degree"] = h.r;
  r.data["realized_in_field"] = h.realized_in_field;
  r.data["class_count"] = h.twisted_count;
  r.data["gcd"] = h.gcd_count;
  r.data["power_classes"] = h.power_class_count;
  r.data["inflated"] = h.inflated_count;
  r.data["agree"] = h.agree();
  r.data["reps"] = h.reps;
  r.headers = {"property", "value"};
  r.rows = {{"coefficients", "mu_" + std::to_string(n)},
            {"frobenius_power", std::to_string(q)},
            {"realizing_degree", std::to_string(h.r)},
            {"class_count", std::to_string(h.twisted_count)},
            {"gcd(n,q-1)", std::to_string(h.gcd_count)},
            {"power_classes", std::to_string(h.power_class_count)},
            {"inflated", std::to_string(h.inflated_count)},
            {"agree", yesno(h.agree())}};
  if (!h.agree()) r.exit_code = kFailed;
  return r;
}

Report cmd_h1_group(const std::string& group, std::optional<std::uint64_t> base_q) {
  auto g = instantiate(parse_group(group));
  const Field& big = g->field();
  const Field& bf = base_q ? field_of_order(*base_q) : make_field(big.p(), 1);
  if (bf.p() != big.p() || big.m() % bf.m() != 0)
    throw UsageError("F_" + bf.name() + " is not a subfield of F_" + big.name());
  const TwistedGroup t = twisted_frobenius(whole(*g), bf);
  const TwistedClassSet cls = twisted_classes(t);
  Report r;
  r.data = base("h1");
  r.data["coefficients"] = g->name();
  r.data["frobenius_power"] = bf.q();
  r.data["realizing_degree"] = big.m() / bf.m();
  r.data["frobenius_order"] = t.r();
  r.data["class_count"] = cls.size();
  r.data["reps"] = json::array();
  r.headers = {"class", "rep", "size", "cocycle"};
  std::size_t cocycles = 0;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    const std::string rep = g->element(t.parent_ids()[cls.reps[i]]).to_string();
    r.data["reps"].push_back(rep);
    cocycles += cls.cocycle[i];
    r.rows.push_back({std::to_string(i), rep, std::to_string(cls.sizes[i]), yesno(cls.cocycle[i])});
  }
  r.data["cocycle_classes"] = cocycles;
  return r;
}

void add_check_rows(Report& r, const Experiment& e, bool with_params) {
  if (e.error) {
    std::vector<std::string> row = {e.id + " " + e.slug};
    if (with_params) row.push_back(params_string(e.params));
    row.insert(row.end(), {"error", "-", *e.error, to_string(e.verdict)});
    r.rows.push_back(row);
  }
  for (const auto& c : e.checks) {
    std::vector<std::string> row = {e.id + " " + e.slug};
    if (with_params) row.push_back(params_string(e.params));
    row.insert(row.end(), {c.name, short_cell(c.predicted), short_cell(c.computed), to_string(c.verdict)});
    r.rows.push_back(row);
  }
}

Report cmd_experiment(const std::string& id, const std::vector<std::string>& kvs) {
  json params = json::object();
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("parameter '" + kv + "' must be written key=value");
    params[kv.substr(0, eq)] = parse_param_value(kv.substr(eq + 1));
  }
  const Experiment e = run_experiment(id, params);
  Report r;
  r.data = to_json(e);
  r.headers = {"experiment", "params", "check", "predicted", "computed", "verdict"};
  add_check_rows(r, e, true);
  r.footer = runtime_footer({e});
  r.exit_code = e.verdict == Verdict::Fail ? kFailed : kOk;
  return r;
}

Report cmd_verify(const std::string& suite) {
  const SuiteSummary s = verify_suite(suite);
  Report r;
  r.data = to_json(s);
  r.headers = {"experiment", "params", "check", "predicted", "computed", "verdict"};
  for (const auto& e : s.runs) add_check_rows(r, e, true);
  r.footer = runtime_footer(s.runs) + ", " + std::to_string(s.failures()) + " failing";
  r.exit_code = s.passed() ? kOk : kFailed;
  return r;
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"z-classes of finite matrix groups"};
  app.name("zk");
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "table";
  bool no_footer = false, allow_bad_char = false;
  std::optional<std::uint64_t> max_group, max_field;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "md", "table"}));
  app.add_flag("--no-footer", no_footer, "Omit the runtime footer");
  app.add_flag("--allow-bad-char", allow_bad_char, "Allow SL_n with p | n");
  app.add_option("--max-group", max_group, "Largest group order to enumerate (env ZK_MAX_GROUP)");
  app.add_option("--max-field", max_field, "Largest field size (env ZK_MAX_FIELD)");

  std::function<Report()> action;
  std::string group, elem1, elem2, filter = "all", family, id, suite;
  std::uint64_t q = 0, mu = 0;
  std::uint32_t deg = 0;
  std::optional<std::uint64_t> base_q;
  bool sl = false, frob = false;
  std::vector<std::string> list;

  auto* zc = app.add_subcommand("zclasses", "z-partition of a group");
  zc->add_option("group", group, "Group, e.g. gl:2@3^1")->required();
  zc->add_option("--filter", filter, "all, rss, regular-unipotent, unipotent, semisimple");
  zc->callback([&] { action = [&] { return cmd_zclasses(group, filter); }; });

  auto* ce = app.add_subcommand("centralizer", "Centralizer of an element");
  ce->add_option("group", group)->required();
  ce->add_option("element", elem1, "[a,b;c,d], id, u_beta:b, h:t or diag:a,b")->required();
  ce->callback([&] { action = [&] { return cmd_centralizer(group, elem1); }; });

  auto* ct = app.add_subcommand("conjtest", "Conjugacy test with witness");
  ct->add_option("group", group)->required();
  ct->add_option("a", elem1)->required();
  ct->add_option("b", elem2)->required();
  ct->add_flag("--sl", sl, "Require a determinant-one conjugator");
  ct->callback([&] { action = [&] { return cmd_conjtest(group, elem1, elem2, sl); }; });

  auto* pr = app.add_subcommand("probe", "z-equivalence before and after base change");
  pr->add_option("family", family)->required();
  pr->add_option("q", q)->required();
  pr->add_option("r", deg)->required()->check(CLI::PositiveNumber);
  pr->add_option("pairs", list, "Pairs written e1|e2")->required();
  pr->callback([&] { action = [&] { return cmd_probe(family, q, deg, list); }; });

  auto* h1 = app.add_subcommand("h1", "First cohomology as Frobenius-twisted classes");
  auto* mu_opt = h1->add_option("--mu", mu, "Coefficients mu_n");
  auto* q_opt = h1->add_option("--q", q, "Base field size");
  h1->add_option("--r", deg, "Realizing degree (default: least)");
  auto* g_opt = h1->add_option("--group", group, "Group over F_{q^r}");
  auto* f_opt = h1->add_flag("--frobenius", frob, "Twist by the Frobenius of the base field");
  h1->add_option("--base", base_q, "Base field size for --group (default: prime field)");
  mu_opt->needs(q_opt)->excludes(g_opt);
  g_opt->needs(f_opt);
  h1->callback([&] {
    if (mu_opt->count()) action = [&] { return cmd_h1_mu(mu, q, deg); };
    else if (g_opt->count()) action = [&] { return cmd_h1_group(group, base_q); };
    else throw CLI::ValidationError("h1", "give --mu n --q q or --group G --frobenius");
  });

  auto* ex = app.add_subcommand("experiment", "Run one catalog experiment");
  ex->add_option("id", id, "E1..E12 or a slug")->required();
  ex->add_option("params", list, "key=value");
  ex->callback([&] { action = [&] { return cmd_experiment(id, list); }; });

  auto* ve = app.add_subcommand("verify", "Run a suite: smoke, paper or full");
  ve->add_option("suite", suite)->required();
  ve->callback([&] { action = [&] { return cmd_verify(suite); }; });

  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--format" || a == "--max-group" || a == "--max-field") {
      ++i;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    if (!app.get_subcommand_no_throw(a)) {
      err << "unknown subcommand '" << a << "'\nRun with --help for more information.\n";
      return kUsage;
    }
    break;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    ScopedLimits scope(limits());
    load_limits_from_env();
    if (max_group) limits().max_group = *max_group;
    if (max_field) limits().max_field = *max_field;
    limits().allow_bad_char = limits().allow_bad_char || allow_bad_char;

    const auto t0 = std::chrono::steady_clock::now();
    const Report r = action();
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    render(r, format, out);
    if (!no_footer) {
      const std::string line = r.footer.empty() ? "runtime: " + seconds(elapsed) : r.footer;
      (format == "json" || format == "csv" ? err : out) << line << "\n";
    }
    return r.exit_code;
  } catch (const BoundExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kBound;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kFailed;
  }
}

}  // namespace zk::cli
