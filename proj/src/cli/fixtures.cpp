#include <cmath>
#include <numbers>
#include <sstream>

#include "cli/cli.hpp"

namespace tepui::cli {

namespace {

std::string expect(bool ok, const std::string& what) { return ok ? std::string() : what; }

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

GridSpec line_grid(int lo, int hi, const Rational& step) { return {{Rational(lo)}, {Rational(hi)}, step}; }

std::vector<Fixture> build() {
  std::vector<Fixture> s;
  s.push_back({"cross_fibers", "V/<x e>: fiber 1 at 0, 0 elsewhere", [](const FixtureSource& src) {
                 Bundle e = io::bundle_from_json(src.load("cross.json"));
                 auto g = mrank_grid(e, line_grid(-1, 1, Rational(1, 2)));
                 if (auto m = expect(g.dims == std::vector<std::size_t>{0, 0, 1, 0, 0}, "grid dims " + join(g.dims));
                     !m.empty())
                   return m;
                 return expect(g.semicontinuous, "semicontinuity failed");
               }});
  s.push_back({"free_rank_two", "trivial rank-2 bundle has fiber 2", [](const FixtureSource& src) {
                 Bundle e = io::bundle_from_json(src.load("free2.json"));
                 return expect(fiber_dim(e, RationalPoint{1}) == 2, "fiber at 1 is not 2");
               }});
  s.push_back({"not_monoidal", "E>= (x) E<= is R at 0 only; jets k+1 vs 1", [](const FixtureSource& src) {
                 Bundle t = tensor(io::bundle_from_json(src.load("egeq.json")), io::bundle_from_json(src.load("eleq.json")));
                 auto g = mrank_grid(t, line_grid(-1, 1, Rational(1, 20)));
                 for (std::size_t i = 0; i < g.dims.size(); ++i)
                   if (g.dims[i] != (i == 20 ? 1u : 0u)) return "tensor fiber at node " + std::to_string(i);
                 auto a = io::jet_factor_from_json(src.load("flat_geq.json"));
                 auto b = io::jet_factor_from_json(src.load("flat_leq.json"));
                 for (int k = 0; k <= 5; ++k) {
                   if (jet_module_tensor(a, b, 0, k) != static_cast<std::size_t>(k + 1)) return "module jets at k=" + std::to_string(k);
                   if (bundle_section_jet_dim(t, 0, k) != 1) return "bundle jets at k=" + std::to_string(k);
                 }
                 return std::string();
               }});
  s.push_back({"invisible_x", "x in Q[x]/(x^2) is invisible, 1 is visible at 0", [](const FixtureSource& src) {
                 FPModule q = io::module_from_json(src.load("module_x2.json"));
                 auto r = q.ring();
                 auto v = invisible_test(q, {parse_polynomial("x", r)});
                 if (v.status != Visibility::CertifiedInvisible) return "x: " + to_string(v.status);
                 if (module_member({parse_polynomial("x", r)}, image_basis(q))) return std::string("x is a member");
                 auto w = invisible_test(q, {Polynomial::constant(r, 1)});
                 if (w.status != Visibility::CertifiedVisible || *w.witness != RationalPoint{0})
                   return "1: " + to_string(w.status);
                 return std::string();
               }});
  s.push_back({"fiber_determination", "inv(Q[x]/(x^2)) = (x), quotient Q[x]/(x)", [](const FixtureSource& src) {
                 FPModule q = io::module_from_json(src.load("module_x2.json"));
                 auto fd = fiber_determination_univariate(q);
                 auto x = parse_polynomial("x", q.ring());
                 if (fd.invisible_generators.size() != 1 || fd.invisible_generators[0] != PolyVector{x})
                   return std::string("invisible generators");
                 return expect(fd.quotient.presentation.cols() == 1 && fd.quotient.presentation.at(0, 0) == x, "quotient");
               }});
  s.push_back({"uncertified_x2p1", "1 in Q[x]/(x^2+1): invisible on R, not certifiable", [](const FixtureSource& src) {
                 FPModule q = io::module_from_json(src.load("module_x2p1.json"));
                 auto v = invisible_test(q, {Polynomial::constant(q.ring(), 1)}, 200);
                 return expect(v.status == Visibility::SampledInvisibleUncertified, to_string(v.status));
               }});
  s.push_back({"base_change_fold", "f(y) = y^2 pulls <x e> back non-surjectively", [](const FixtureSource& src) {
                 ModuleBasis d = io::submodule_from_json(src.load("cross_D.json"));
                 PolyMap f = io::map_from_json(src.load("fold.json"));
                 Bundle e = Bundle::polynomial(PolyMatrix::from_columns(d.ring, 1, d.columns));
                 Bundle pb = pullback(e, f);
                 for (int y : {-2, -1, 1, 3})
                   if (fiber_dim(pb, RationalPoint{y}) != 0) return "pullback fiber at " + std::to_string(y);
                 if (fiber_dim(pb, RationalPoint{0}) != 1) return std::string("pullback fiber at 0");
                 auto rep = base_change_comparison(1, d, f, {0}, 1);
                 if (rep.alpha_D_surjective_at_order_k) return std::string("alpha_D surjective at order 1");
                 return expect(rep.ker_alpha_nontrivial, "ker alpha trivial");
               }});
  s.push_back({"twisted_bracket", "twisted bracket is a Lie algebroid", [](const FixtureSource& src) {
                 auto l = io::algebroid_from_json(src.load("twisted.json"));
                 auto r = l.ring();
                 auto f = parse_polynomial("x^2 - 3", r), g = parse_polynomial("x^3 + x", r);
                 Section b = bracket({f, Polynomial(r)}, {Polynomial(r), g}, l);
                 if (b != Section{Polynomial(r), f * g.differentiate(0)}) return std::string("bracket formula");
                 if (!check_leibniz(l).holds) return std::string("leibniz");
                 return expect(jacobi_vanishes(check_jacobi(l)), "jacobi");
               }});
  s.push_back({"so3_jacobi", "epsilon-table on a point satisfies Jacobi", [](const FixtureSource& src) {
                 auto l = io::algebroid_from_json(src.load("so3.json"));
                 return expect(jacobi_vanishes(check_jacobi(l)), "jacobi");
               }});
  s.push_back({"bracket_obstruction", "[d_y, y e2] = e2 is visible at y = 0", [](const FixtureSource& src) {
                 auto j = src.load("horrible.json");
                 auto l = io::algebroid_from_json(j);
                 ModuleBasis d = io::submodule_from_json(src.load("horrible_D.json"));
                 auto w = quotient_obstruction(d, l);
                 auto r = l.ring();
                 if (!w) return std::string("no witness");
                 if (w->frame != 0 || w->sigma != Section{Polynomial(r), parse_polynomial("y", r)})
                   return std::string("witness is not (e1, y e2)");
                 return expect(w->point == RationalPoint{0}, "witness point is not 0");
               }});
  s.push_back({"zero_algebroid", "zero anchor, zero bracket: all checks pass", [](const FixtureSource& src) {
                 auto l = io::algebroid_from_json(src.load("zero_algebroid.json"));
                 if (!check_leibniz(l).holds || !check_weak_jacobi(l).holds) return std::string("checks");
                 return expect(jacobi_vanishes(check_jacobi(l)), "jacobi");
               }});
  s.push_back({"synthesis", "anchors {d_x, x d_x} give [e1, e2] = e1", [](const FixtureSource& src) {
                 auto l = synthesize_bracket(io::algebroid_from_json(src.load("translation_dilation.json")).anchor());
                 auto r = l.ring();
                 if (l.structure(0, 1) != Section{Polynomial::constant(r, 1), Polynomial(r)}) return std::string("c_12");
                 return expect(check_leibniz(l).holds && check_weak_jacobi(l).holds, "almost-Lie checks");
               }});
  s.push_back({"rotation_transport", "Bott transport around the circle", [](const FixtureSource& src) {
                 auto j = src.load("rotation.json");
                 auto gens = io::fields_from_json(j);
                 auto ring = io::ring_from_json(j);
                 auto full = bott_transport(gens, io::path_from_json(src.load("rotation_loop.json"), ring), {1, 0});
                 auto half = bott_transport(gens, io::path_from_json(src.load("rotation_half.json"), ring), {1, 0});
                 auto near = [](const std::vector<double>& a, double x, double y) {
                   return std::abs(a[0] - x) < 1e-5 && std::abs(a[1] - y) < 1e-5;
                 };
                 if (!near(full.representative, 1, 0)) return std::string("2 pi loop");
                 return expect(near(half.representative, -1, 0), "pi loop");
               }});
  s.push_back({"rank_drop", "a path driven through 0 is flagged for <x d_x>", [](const FixtureSource& src) {
                 auto j = src.load("dilation.json");
                 auto trace = rank_constancy_along(io::path_from_json(src.load("crossing_path.json"), io::ring_from_json(j)),
                                                   io::fields_from_json(j));
                 return expect(!trace.constant && !trace.f_path, "rank drop not detected");
               }});
  return s;
}

}  // namespace

const std::vector<Fixture>& fixture_suite() {
  static const std::vector<Fixture> suite = build();
  return suite;
}

}  // namespace tepui::cli
