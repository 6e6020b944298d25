#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/cli.hpp"
#include "tepui/errors.hpp"

namespace tepui::cli {

namespace {

using io::Json;

struct Globals {
  bool json = false;
  bool validate = false;
  std::uint64_t seed = 0;
};

std::uint64_t default_seed() {
  if (const char* s = std::getenv("TEPUI_SEED"); s && *s) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw ParseError(std::string("TEPUI_SEED is not a non-negative integer: ") + s);
    }
  }
  return 0;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

PolyVector parse_vector(const std::string& text, const RingPtr& r) {
  PolyVector v;
  for (const auto& e : split(text, ',')) v.push_back(parse_polynomial(e, r));
  return v;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << content;
  if (!f) throw IoError("write failed for '" + path + "'");
}

void emit(std::ostream& out, const Json& j) { out << io::dump(j) << '\n'; }

/// Prints "valid" and reports whether the command should stop here.
bool validated(const Globals& g, std::ostream& out) {
  if (!g.validate) return false;
  if (g.json)
    emit(out, Json{{"valid", true}});
  else
    out << "valid\n";
  return true;
}

void require_dims(const RationalPoint& m, const RingPtr& r) {
  if (m.size() != r->size())
    throw DimensionError("point has " + std::to_string(m.size()) + " coordinates, expected " + std::to_string(r->size()));
}

GridSpec parse_box(const std::string& text, const Rational& step, std::size_t n) {
  GridSpec g;
  g.step = step;
  for (const auto& side : split(text, ',')) {
    auto colon = side.find(':');
    if (colon == std::string::npos) throw ParseError("box sides are lo:hi, got '" + side + "'");
    g.lo.push_back(parse_rational(side.substr(0, colon)));
    g.hi.push_back(parse_rational(side.substr(colon + 1)));
  }
  if (g.lo.size() != n) throw DimensionError("box needs " + std::to_string(n) + " sides");
  return g;
}

GridSpec box_from_domain(const Bundle& e, const Rational& step) {
  GridSpec g;
  g.step = step;
  for (const auto& s : e.domain.sides) {
    if (!s.lo || !s.hi) throw DomainError("the bundle domain is unbounded; pass --box");
    g.lo.push_back(*s.lo);
    g.hi.push_back(*s.hi);
  }
  return g;
}

Json section_json(const Section& s) { return io::to_json(s); }

Json frame_json(std::size_t j, std::size_t n, const RingPtr& r) {
  Section e(n, Polynomial(r));
  e[j] = Polynomial::constant(r, 1);
  return section_json(e);
}

int check_command(const Globals& g, const std::string& file, const std::string& ideal_file, bool obstruction,
                  int bound, std::ostream& out) {
  Json j = io::read_json_file(file);
  AnchoredBracket l = io::algebroid_from_json(j);
  std::optional<ModuleBasis> d;
  if (!ideal_file.empty())
    d = io::submodule_from_json(io::read_json_file(ideal_file));
  else if (j.contains("ideal"))
    d = io::submodule_from_json(Json{{"vars", j["vars"]}, {"rank", j["rank"]}, {"generators", j["ideal"]}});
  if (obstruction && !d) throw DomainError("--obstruction needs a submodule (--ideal or an \"ideal\" key)");
  if (validated(g, out)) return kOk;

  Json rep;
  auto lb = check_leibniz(l);
  rep["leibniz"] = lb.holds;
  if (!lb.holds)
    rep["leibniz_counterexample"] = Json{{"i", *lb.i}, {"j", *lb.j}, {"slot", *lb.slot}, {"residual", section_json(*lb.residual)}};
  auto jac = check_jacobi(l);
  if (jacobi_vanishes(jac)) {
    rep["jacobi"] = "zero";
  } else {
    Json t = Json::array();
    for (const auto& e : jac)
      if (std::any_of(e.value.begin(), e.value.end(), [](const Polynomial& p) { return !p.is_zero(); }))
        t.push_back(Json{{"i", e.i}, {"j", e.j}, {"k", e.k}, {"value", section_json(e.value)}});
    rep["jacobi"] = t;
  }
  auto wj = check_weak_jacobi(l);
  rep["weak_jacobi"] = wj.holds;
  bool ok = lb.holds && wj.holds;
  if (d) {
    auto id = check_ideal(*d, l);
    Json ij{{"holds", id.holds}};
    if (!id.holds) {
      ij["frame"] = frame_json(*id.frame, l.rank(), l.ring());
      ij["generator"] = section_json(*id.generator);
      ij["bracket"] = section_json(*id.value);
    }
    rep["ideal"] = ij;
  } else {
    rep["ideal"] = nullptr;
  }
  if (obstruction) {
    auto w = quotient_obstruction(*d, l, bound, g.seed);
    if (w)
      rep["obstruction_witness"] = Json{{"a", frame_json(w->frame, l.rank(), l.ring())},
                                        {"sigma", section_json(w->sigma)},
                                        {"bracket", section_json(w->value)},
                                        {"point", io::to_json(w->point)}};
    else
      rep["obstruction_witness"] = Json{{"found", false}, {"note", "none up to degree bound " + std::to_string(bound)}};
  } else {
    rep["obstruction_witness"] = nullptr;
  }
  emit(out, rep);
  return ok ? kOk : kCheckFailed;
}

int fixtures_command(bool list, const std::string& dir, std::ostream& out) {
  const auto& suite = fixture_suite();
  if (list) {
    for (const auto& f : suite) out << f.name << '\n';
    return kOk;
  }
  FixtureSource src(dir);
  std::size_t width = 0;
  for (const auto& f : suite) width = std::max(width, f.name.size());
  int failures = 0;
  for (const auto& f : suite) {
    std::string msg;
    try {
      msg = f.check(src);
    } catch (const std::exception& e) {
      msg = e.what();
    }
    out << (msg.empty() ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << f.name << "  "
        << (msg.empty() ? f.summary : msg) << '\n';
    if (!msg.empty()) ++failures;
  }
  out << suite.size() - failures << "/" << suite.size() << " fixtures passed\n";
  return failures ? kCheckFailed : kOk;
}

struct Options {
  std::string file, file2, point, vector, box, out_path, ideal, gamma, bundle, w0, start, dir;
  std::string step = "0.5";
  double rk_step = 1e-3, time = 0.5, tol = 1e-5;
  int order = 3, bound = 2, depth = 4;
  std::size_t samples = 500;
  bool obstruction = false, list = false;
};

int dispatch(CLI::App& app, const Globals& g, const Options& opt, std::ostream& out);

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tepui: singular vector bundles, section modules and algebroids"};
  app.name(args.empty() ? "tepui" : args[0]);
  app.require_subcommand(1);
  Globals g;
  Options opt;
  std::optional<std::uint64_t> seed_flag;
  app.add_flag("--json", g.json, "JSON output");
  app.add_flag("--validate", g.validate, "parse and check the input files only");
  app.add_option("--seed", seed_flag, "random seed (default: TEPUI_SEED or 0)");

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto* fiber = sub("fiber", "fiber dimension of a bundle at a point");
  fiber->add_option("file", opt.file, "bundle JSON")->required();
  fiber->add_option("--point", opt.point, "comma-separated rational coordinates")->required();

  auto* rankmap = sub("rankmap", "fiber dimensions on a grid with a semicontinuity verdict");
  rankmap->add_option("file", opt.file, "bundle JSON")->required();
  rankmap->add_option("--box", opt.box, "lo:hi per variable, comma-separated (default: the domain)");
  rankmap->add_option("--step", opt.step, "grid step (rational)");
  rankmap->add_option("--out", opt.out_path, "CSV output file (default: stdout)");

  auto* tens = sub("tensor", "tensor product of two bundles");
  tens->add_option("a", opt.file, "bundle JSON")->required();
  tens->add_option("b", opt.file2, "bundle JSON")->required();
  tens->add_option("--out", opt.out_path, "output file");

  auto* pull = sub("pullback", "pullback of a bundle along a polynomial map");
  pull->add_option("bundle", opt.file, "bundle JSON")->required();
  pull->add_option("map", opt.file2, "map JSON")->required();
  pull->add_option("--out", opt.out_path, "output file");

  auto* invis = sub("invisible", "invisibility of an element of a finitely presented module");
  invis->add_option("module", opt.file, "module JSON")->required();
  invis->add_option("--vector", opt.vector, "comma-separated entries of v")->required();
  invis->add_option("--samples", opt.samples, "random rational points after the certificate");

  auto* fibdet = sub("fibdet", "fiber determination of a univariate module");
  fibdet->add_option("module", opt.file, "module JSON")->required();

  auto* check = sub("check", "Leibniz, Jacobi, ideal and obstruction checks of an algebroid");
  check->add_option("algebroid", opt.file, "algebroid JSON")->required();
  check->add_option("--ideal", opt.ideal, "submodule JSON");
  check->add_flag("--obstruction", opt.obstruction, "search for a quotient-bracket obstruction");
  check->add_option("--bound", opt.bound, "degree bound for the obstruction search");

  auto* synth = sub("synthesize", "almost-Lie bracket from an involutive anchor");
  synth->add_option("anchor", opt.file, "algebroid JSON (structure functions ignored)")->required();

  auto* basech = sub("basechange", "compare f*Gamma(D) with Gamma(f*D)");
  basech->add_option("submodule", opt.file, "D as submodule JSON over the target")->required();
  basech->add_option("map", opt.file2, "map JSON")->required();
  basech->add_option("--point", opt.point, "source point")->required();
  basech->add_option("--order", opt.order, "jet order");
  basech->add_option("--gamma", opt.gamma, "generators of Gamma(f*D) as submodule JSON over the source");

  auto* jett = sub("jettensor", "jet dimensions of a module tensor product (and a bundle)");
  jett->add_option("a", opt.file, "module or flat JSON")->required();
  jett->add_option("b", opt.file2, "module or flat JSON")->required();
  jett->add_option("--point", opt.point, "base point")->required();
  jett->add_option("--order", opt.order, "jet order");
  jett->add_option("--bundle", opt.bundle, "bundle JSON for the section-side jet dimension");

  auto* leaf = sub("leaf", "leaf exploration by generator flows");
  leaf->add_option("fields", opt.file, "fields or algebroid JSON")->required();
  leaf->add_option("--start", opt.start, "start point")->required();
  leaf->add_option("--time", opt.time, "flow time per move");
  leaf->add_option("--depth", opt.depth, "BFS depth");
  leaf->add_option("--step", opt.rk_step, "RK4 step");
  leaf->add_option("--out", opt.out_path, "CSV output file (default: stdout)");

  auto* transport = sub("transport", "Bott transport along a foliated path");
  transport->add_option("fields", opt.file, "fields or algebroid JSON")->required();
  transport->add_option("path", opt.file2, "path JSON")->required();
  transport->add_option("--w0", opt.w0, "initial vector")->required();
  transport->add_option("--step", opt.rk_step, "RK4 step");
  transport->add_option("--tol", opt.tol, "residual tolerance");

  auto* fixtures = sub("fixtures", "run the built-in example suite");
  fixtures->add_flag("--list", opt.list, "list fixture names only");
  fixtures->add_option("--dir", opt.dir, "read fixture files from this directory");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParse;
  }

  try {
    g.seed = seed_flag ? *seed_flag : default_seed();
    return dispatch(app, g, opt, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  }
}

namespace {

int dispatch(CLI::App& app, const Globals& g, const Options& opt, std::ostream& out) {
  const std::string cmd = app.get_subcommands().front()->get_name();
  FlowOptions flow;
  flow.step = opt.rk_step;

  if (cmd == "fiber") {
    Bundle e = io::bundle_from_json(io::read_json_file(opt.file));
    RationalPoint m = io::parse_point(opt.point);
    require_dims(m, e.ring);
    if (validated(g, out)) return kOk;
    std::size_t d = fiber_dim(e, m);
    if (g.json)
      emit(out, Json{{"point", io::to_json(m)}, {"dim", d}});
    else
      out << d << '\n';
    return kOk;
  }
  if (cmd == "rankmap") {
    Bundle e = io::bundle_from_json(io::read_json_file(opt.file));
    Rational step = parse_rational(opt.step);
    GridSpec grid = opt.box.empty() ? box_from_domain(e, step) : parse_box(opt.box, step, e.ring->size());
    if (validated(g, out)) return kOk;
    GridResult r = mrank_grid(e, grid);
    std::string csv = grid_csv(e, r);
    if (!opt.out_path.empty()) write_file(opt.out_path, csv);
    if (g.json) {
      Json j{{"nodes", r.nodes.size()}, {"dims", r.dims}, {"semicontinuous", r.semicontinuous},
             {"violations", r.violations}};
      if (!opt.out_path.empty()) j["csv"] = opt.out_path;
      emit(out, j);
    } else {
      if (opt.out_path.empty()) out << csv;
      out << "semicontinuity: " << (r.semicontinuous ? "pass" : "fail") << '\n';
    }
    return kOk;
  }
  if (cmd == "tensor" || cmd == "pullback") {
    Bundle a = io::bundle_from_json(io::read_json_file(opt.file));
    Bundle result;
    if (cmd == "tensor") {
      Bundle b = io::bundle_from_json(io::read_json_file(opt.file2));
      if (validated(g, out)) return kOk;
      result = tensor(a, b);
    } else {
      PolyMap f = io::map_from_json(io::read_json_file(opt.file2));
      if (validated(g, out)) return kOk;
      result = pullback(a, f, std::nullopt, g.seed);
    }
    std::string text = io::dump(io::to_json(result)) + "\n";
    if (opt.out_path.empty())
      out << text;
    else
      write_file(opt.out_path, text);
    return kOk;
  }
  if (cmd == "invisible") {
    FPModule q = io::module_from_json(io::read_json_file(opt.file));
    PolyVector v = parse_vector(opt.vector, q.ring());
    if (v.size() != q.free_rank()) throw DimensionError("v must have " + std::to_string(q.free_rank()) + " entries");
    if (validated(g, out)) return kOk;
    auto verdict = invisible_test(q, v, opt.samples, g.seed);
    if (g.json) {
      emit(out, Json{{"status", to_string(verdict.status)},
                     {"witness", verdict.witness ? io::to_json(*verdict.witness) : Json(nullptr)},
                     {"certificate", verdict.certificate},
                     {"points_checked", verdict.points_checked}});
    } else {
      out << to_string(verdict.status);
      if (verdict.witness) {
        out << " at ";
        for (std::size_t i = 0; i < verdict.witness->size(); ++i) out << (i ? "," : "") << to_string((*verdict.witness)[i]);
      }
      out << '\n';
    }
    return kOk;
  }
  if (cmd == "fibdet") {
    FPModule q = io::module_from_json(io::read_json_file(opt.file));
    if (validated(g, out)) return kOk;
    auto fd = fiber_determination_univariate(q);
    Json inv = Json::array();
    for (const auto& v : fd.invisible_generators) inv.push_back(io::to_json(v));
    Json diag = Json::array(), rho = Json::array();
    for (const auto& p : fd.diagonal) diag.push_back(io::to_json(p));
    for (const auto& p : fd.rho) rho.push_back(io::to_json(p));
    emit(out, Json{{"invisible_generators", inv}, {"quotient", io::to_json(fd.quotient)}, {"diagonal", diag}, {"rho", rho}});
    return kOk;
  }
  if (cmd == "check") return check_command(g, opt.file, opt.ideal, opt.obstruction, opt.bound, out);
  if (cmd == "synthesize") {
    AnchoredBracket l = io::algebroid_from_json(io::read_json_file(opt.file));
    if (validated(g, out)) return kOk;
    emit(out, io::to_json(synthesize_bracket(l.anchor())));
    return kOk;
  }
  if (cmd == "basechange") {
    ModuleBasis d = io::submodule_from_json(io::read_json_file(opt.file));
    PolyMap f = io::map_from_json(io::read_json_file(opt.file2));
    RationalPoint m = io::parse_point(opt.point);
    require_dims(m, f.source);
    std::optional<std::vector<PolyVector>> gamma;
    if (!opt.gamma.empty()) gamma = io::submodule_from_json(io::read_json_file(opt.gamma)).columns;
    if (validated(g, out)) return kOk;
    auto rep = base_change_comparison(d.rank, d, f, m, opt.order, gamma);
    emit(out, Json{{"alpha_D_surjective_at_order_k", rep.alpha_D_surjective_at_order_k},
                   {"ker_alpha_nontrivial", rep.ker_alpha_nontrivial},
                   {"witness", rep.witness ? io::to_json(*rep.witness) : Json(nullptr)},
                   {"order", opt.order},
                   {"globally_surjective", rep.globally_surjective},
                   {"method", rep.method}});
    return kOk;
  }
  if (cmd == "jettensor") {
    JetFactor a = io::jet_factor_from_json(io::read_json_file(opt.file));
    JetFactor b = io::jet_factor_from_json(io::read_json_file(opt.file2));
    Rational m = parse_rational(opt.point);
    std::optional<Bundle> e;
    if (!opt.bundle.empty()) e = io::bundle_from_json(io::read_json_file(opt.bundle));
    if (validated(g, out)) return kOk;
    std::size_t mod = jet_module_tensor(a, b, m, opt.order);
    std::optional<std::size_t> bun;
    if (e) bun = bundle_section_jet_dim(*e, m, opt.order);
    if (g.json) {
      Json j{{"point", io::to_json(m)}, {"order", opt.order}, {"module_side", mod}};
      j["bundle_side"] = bun ? Json(*bun) : Json(nullptr);
      emit(out, j);
    } else {
      out << "module: " << mod << '\n';
      if (bun) out << "bundle: " << *bun << '\n';
    }
    return kOk;
  }
  if (cmd == "leaf") {
    Json j = io::read_json_file(opt.file);
    auto gens = io::fields_from_json(j);
    RingPtr ring = j.contains("anchor") ? io::algebroid_from_json(j).ring() : io::ring_from_json(j);
    RealPoint x0 = io::parse_real_point(opt.start);
    if (x0.size() != ring->size()) throw DimensionError("start point has the wrong number of coordinates");
    if (validated(g, out)) return kOk;
    auto cloud = leaf_explore(gens, x0, opt.time, opt.depth, flow);
    std::ostringstream csv;
    for (const auto& v : ring->vars()) csv << v << ',';
    csv << "rank\n";
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
      for (double c : cloud.points[i]) csv << format_double(c) << ',';
      csv << cloud.ranks[i] << '\n';
    }
    if (!opt.out_path.empty()) write_file(opt.out_path, csv.str());
    if (g.json) {
      emit(out, Json{{"points", cloud.points.size()}, {"ranks", cloud.ranks}, {"constant_rank", cloud.constant_rank}});
    } else {
      if (opt.out_path.empty()) out << csv.str();
      out << "rank: " << (cloud.constant_rank ? "constant" : "varying") << '\n';
    }
    return kOk;
  }
  if (cmd == "transport") {
    Json j = io::read_json_file(opt.file);
    auto gens = io::fields_from_json(j);
    RingPtr ring = j.contains("anchor") ? io::algebroid_from_json(j).ring() : io::ring_from_json(j);
    FPath path = io::path_from_json(io::read_json_file(opt.file2), ring);
    RealPoint w0 = io::parse_real_point(opt.w0);
    if (validated(g, out)) return kOk;
    auto t = bott_transport(gens, path, w0, flow);
    emit(out, Json{{"point", io::to_json(t.point)},
                   {"representative", io::to_json(t.representative)},
                   {"w", io::to_json(t.w)},
                   {"fiber_rank", t.fiber_rank},
                   {"residual", t.residual},
                   {"residual_within_tol", t.residual <= opt.tol}});
    return kOk;
  }
  if (cmd == "fixtures") return fixtures_command(opt.list, opt.dir, out);
  throw Error("unknown command " + cmd);
}

}  // namespace

}  // namespace tepui::cli
