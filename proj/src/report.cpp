#include "capk/report.hpp"

namespace capk {

Json to_json(const Int& a) {
  if (a.fits_slong_p()) return a.get_si();
  return a.get_str();
}

Json to_json(const Rat& q) { return capk::to_string(q); }

Json to_json(const Vec& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(to_json(x));
  return j;
}

Json to_json(const IntMatrix& m) {
  Json j = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) j.push_back(to_json(m.row(i)));
  return j;
}

Json to_json(const FgAbelianGroup& g) {
  Json j;
  j["invariants"] = to_json(g.torsion());
  j["rank"] = g.rank();
  auto o = g.order();
  j["order"] = o ? to_json(*o) : Json(nullptr);
  j["structure"] = g.to_string();
  return j;
}

Json to_json(const QuadraticFieldData& f, const QuadElement& x) {
  auto [u, v] = f.sqrt_coords(x);
  Json j;
  j["sqrt_frame"] = {to_json(u), to_json(v)};
  j["text"] = f.to_string(x);
  return j;
}

Json to_json(const QuadIdeal& I) {
  Json j;
  j["a"] = to_json(I.a);
  j["b"] = to_json(I.b);
  j["c"] = to_json(I.c);
  j["norm"] = to_json(I.norm());
  return j;
}

Json to_json(const BiquadFieldData& k, const BiquadElement& x) {
  Json j;
  j["frame"] = Json::array();
  for (const auto& q : x.x) j["frame"].push_back(to_json(q));
  auto b = k.integral_coords(x);
  j["integral_basis"] = b ? to_json(*b) : Json(nullptr);
  j["text"] = k.to_string(x);
  return j;
}

Json to_json(const KIdeal& I) {
  Json j;
  j["hnf"] = to_json(I.hnf);
  j["norm"] = to_json(I.norm());
  return j;
}

Json field_json(const QuadraticFieldData& f) {
  Json j;
  j["m"] = f.m;
  j["disc"] = to_json(f.disc);
  j["signature"] = {f.r1, f.r2};
  return j;
}

Json field_json(const BiquadFieldData& k) {
  Json j;
  j["m"] = {k.m1, k.m2, k.m3};
  j["disc"] = to_json(k.disc);
  j["signature"] = {k.r1, k.r2};
  j["integral_basis"] = Json::array();
  for (const auto& b : k.integral_basis) j["integral_basis"].push_back(to_json(k, b));
  auto [z, w] = roots_of_unity(k);
  j["roots_of_unity"] = {{"order", w}, {"generator", to_json(k, z)}};
  j["galois"] = Json::array();
  for (int a = 0; a < 4; ++a) {
    auto s = k.aut_signs(a);
    j["galois"].push_back({{"sqrt_m1", s[0]}, {"sqrt_m2", s[1]}});
  }
  return j;
}

Json class_group_json(const QuadraticFieldData& f, const ClassGroup& cl) {
  Json j;
  j["field"] = field_json(f);
  j["group"] = to_json(cl.group);
  j["h"] = to_json(*cl.group.order());
  j["generators"] = Json::array();
  for (const auto& g : cl.generators) j["generators"].push_back(to_json(g));
  return j;
}

Json sigma_class_group_json(const QuadraticFieldData& f, const SigmaClassGroup& cl) {
  Json j;
  j["group"] = to_json(cl.group);
  j["generators"] = Json::array();
  for (const auto& g : cl.generators) j["generators"].push_back(to_json(g));
  j["class_group"] = class_group_json(f, cl.cl)["group"];
  return j;
}

Json units_json(const SUnitLattice& u) {
  Json j;
  j["field"] = field_json(u.field);
  j["group"] = to_json(u.group());
  j["torsion"] = {{"order", u.torsion_order}, {"generator", to_json(u.field, u.torsion_generator)}};
  j["free_generators"] = Json::array();
  for (const auto& g : u.free_generators) j["free_generators"].push_back(to_json(u.field, g));
  j["primes"] = Json::array();
  for (const auto& p : u.primes) j["primes"].push_back(to_json(p));
  j["valuations"] = to_json(u.valuation_matrix);
  return j;
}

Json units_json(const KUnitGroup& u) {
  const BiquadFieldData& k = u.field;
  Json j;
  j["field"] = field_json(k);
  j["rational_primes"] = u.primes;
  j["group"] = to_json(u.group());
  j["torsion"] = {{"order", u.w}, {"generator", to_json(k, u.zeta)}};
  j["free_generators"] = Json::array();
  for (const auto& g : u.free_generators) j["free_generators"].push_back(to_json(k, g));
  j["index_over_subfields"] = to_json(u.index);
  j["torsion_index"] = to_json(u.torsion_index);
  j["square_roots"] = Json::array();
  for (const auto& [r, s] : u.square_roots)
    j["square_roots"].push_back({{"root", to_json(k, r)}, {"square", to_json(k, s)}, {"verified", k.mul(r, r) == s}});
  return j;
}

Json module_json(const CyclicModule& m) {
  Json j;
  j["group"] = to_json(m.group);
  j["sigma"] = to_json(m.sigma.matrix());
  j["n"] = m.order_n;
  return j;
}

Json lac_json(const LacTerms& l) {
  Json j;
  j["terms"] = Json::array();
  for (const auto& t : l.seq.terms) j["terms"].push_back(to_json(t));
  j["maps"] = Json::array();
  for (const auto& m : l.seq.maps) j["maps"].push_back(to_json(m.matrix()));
  j["node_exact"] = l.seq.node_exact;
  j["exact"] = l.seq.exact;
  j["order_identity"] = l.order_identity;
  j["two_torsion"] = l.two_torsion;
  j["second_term"] = l.middle;
  return j;
}

Json report_json(const CapitulationReport& r) {
  const RelativeExtension& e = r.extension;
  const BiquadFieldData& k = e.K;
  Json j;
  Json ext;
  ext["K"] = field_json(k);
  ext["F"] = field_json(e.F());
  auto s = k.aut_signs(e.tau());
  ext["tau"] = {{"sqrt_m1", s[0]}, {"sqrt_m2", s[1]}};
  ext["sigma"] = {{"rational_primes", e.sigma}, {"infinite", true}, {"ramified_in_K", ramified_primes(k, e.f_index)}};
  ext["sigma_F"] = Json::array();
  for (const auto& P : e.sigma_f()) ext["sigma_F"].push_back(to_json(P));
  j["extension"] = ext;
  j["cl_sigma_F"] = sigma_class_group_json(e.F(), r.cl_sigma_f);

  const KUnitGroup& U = r.module.units;
  Json um = units_json(U);
  um.erase("field");
  um["tau"] = to_json(r.module.module.sigma.matrix());
  j["unit_module"] = um;
  j["fixed_points"] = to_json(r.fixed_points);
  j["units_of_F"] = to_json(r.base_units);

  Json kj;
  kj["h1"] = to_json(r.ker_j_h1);
  kj["norm_kernel"] = to_json(r.ker_j_fin);
  Json d;
  d["status"] = r.direct.status;
  d["generated"] = to_json(r.direct.generated);
  d["search_nodes"] = r.direct.nodes;
  d["certificates"] = Json::array();
  for (const auto& c : r.direct.certificates)
    d["certificates"].push_back({{"class", to_json(c.cls)}, {"ideal", to_json(c.ideal)},
                                 {"generator", to_json(k, c.generator)},
                                 {"generator_norm", to_json(k.norm(c.generator))}});
  d["non_capitulating"] = Json::array();
  for (const auto& c : r.direct.non_capitulating) d["non_capitulating"].push_back(to_json(c));
  kj["direct"] = d;
  j["ker_j"] = kj;
  j["lac"] = lac_json(r.lac);
  j["consistent"] = r.consistent;
  j["diagnostics"] = r.diagnostics;
  return j;
}

Json mordell_weil_json(const MordellWeilInput& in, const MordellWeilReport& r) {
  Json j;
  j["input"] = {{"group", to_json(in.group)}, {"tau", to_json(in.tau)}, {"provenance", in.provenance},
                {"fixed_claim", in.fixed_claim ? to_json(*in.fixed_claim) : Json(nullptr)}};
  j["fixed_points"] = to_json(r.fixed);
  j["claim_matches"] = r.claim_matches;
  j["lac"] = lac_json(r.lac);
  j["third_term"] = "global H^1(tau, A(K)); contains the Sha subgroup";
  return j;
}

namespace {

Int int_from(const Json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw DomainError("expected an integer");
}

FgAbelianGroup group_from(const Json& j) {
  Vec tors;
  if (j.contains("invariants"))
    for (const auto& x : j.at("invariants")) tors.push_back(int_from(x));
  std::size_t rank = j.value("rank", 0);
  return FgAbelianGroup::from_orders([&] {
    Vec o = tors;
    for (std::size_t i = 0; i < rank; ++i) o.push_back(0);
    return o;
  }());
}

IntMatrix matrix_from(const Json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw ShapeError("matrix must be " + std::to_string(n) + " x " + std::to_string(n));
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw ShapeError("matrix row has the wrong length");
    for (std::size_t c = 0; c < n; ++c) m(i, c) = int_from(j[i][c]);
  }
  return m;
}

// Invariants given out of normal form are rejected rather than silently
// re-based, since the matrix refers to the generators as listed.
void check_normal(const Json& j, const FgAbelianGroup& g) {
  Vec tors;
  if (j.contains("invariants"))
    for (const auto& x : j.at("invariants")) tors.push_back(int_from(x));
  if (tors != g.torsion()) throw DomainError("invariants must be in normal form d1 | d2 | ... with every d >= 2");
}

}  // namespace

CyclicModule module_from_json(const Json& j) {
  try {
    FgAbelianGroup g = group_from(j.at("group"));
    check_normal(j.at("group"), g);
    return CyclicModule(g, matrix_from(j.at("sigma"), g.ngens()), j.value("n", 2));
  } catch (const Json::exception& ex) {
    throw DomainError(std::string("malformed module input: ") + ex.what());
  }
}

MordellWeilInput mordell_weil_from_json(const Json& j) {
  try {
    MordellWeilInput in;
    in.group = group_from(j.at("group"));
    check_normal(j.at("group"), in.group);
    in.tau = matrix_from(j.at("tau"), in.group.ngens());
    if (j.contains("fixed_claim") && !j.at("fixed_claim").is_null()) in.fixed_claim = group_from(j.at("fixed_claim"));
    in.provenance = j.value("provenance", "");
    return in;
  } catch (const Json::exception& ex) {
    throw DomainError(std::string("malformed Mordell-Weil input: ") + ex.what());
  }
}

}  // namespace capk
