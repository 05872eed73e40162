// t2b: command-line queries on T^2-bundles over closed orientable surfaces.
//
// Exit codes: 0 answered, 1 usage error, 2 invalid input, 3 indeterminate.

#include "t2bundle/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <set>
#include <string>
#include <vector>

using namespace t2b;
using io::json;

namespace {

struct Result {
  json body = json::object();
  int code = 0;
};

TorusBundle load_bundle(std::string const& path) { return io::bundle_from_json(io::parse(io::read_file(path))); }

json order_json(int o) { return o == infinite_order ? json("infinite") : io::integer(o); }

bool is_matrix_text(std::string const& s) {
  size_t i = s.find_first_not_of(" \t");
  return i != std::string::npos && s[i] == '[';
}

Result cmd_order(std::string const& m) {
  Result r;
  r.body["order"] = order_json(order(io::parse_matrix(m)));
  return r;
}

Result cmd_word(std::string const& m) {
  Sl2Matrix x = io::parse_matrix(m);
  SlWord w = matrix_to_word(x);
  Result r;
  r.body["word"] = to_string(w);
  r.body["projection"] = to_string(project(x));
  return r;
}

Result cmd_conj(std::string const& a, std::string const& b) {
  Result r;
  if (is_matrix_text(a) != is_matrix_text(b)) throw std::invalid_argument("conj: mixed matrix and word arguments");
  if (is_matrix_text(a)) {
    std::optional<Sl2Matrix> q = sl_conjugate(io::parse_matrix(a), io::parse_matrix(b));
    r.body["mode"] = "SL";
    r.body["conjugate"] = q.has_value();
    if (q) r.body["Q"] = io::to_json(*q);
  } else {
    std::optional<PslWord> g = psl_conjugate(parse_psl_word(a), parse_psl_word(b));
    r.body["mode"] = "PSL";
    r.body["conjugate"] = g.has_value();
    if (g) r.body["g"] = to_string(*g);
  }
  return r;
}

Result cmd_subgroup(std::string const& sig_text, std::vector<std::string> const& words) {
  FreeProductSignature sig = parse_signature(sig_text);
  std::vector<FpWord> gens;
  for (std::string const& w : words) gens.push_back(parse_fp_word(sig, w));
  CoreGraph g = CoreGraph::build(sig, gens);
  Result r;
  r.body["kurosh"] = io::to_json(kurosh_invariants(g));
  r.body["states"] = io::integer(static_cast<long long>(g.num_states()));
  Rational chi = euler_characteristic_check(g);
  r.body["euler_characteristic"] = chi.str();
  std::optional<size_t> idx = finite_index(g);
  r.body["index"] = idx ? io::integer(static_cast<long long>(*idx)) : json("infinite");
  return r;
}

Result cmd_rep(std::string const& mode, std::string const& path) {
  TorusBundle b = load_bundle(path);
  PslRep p = project_rep(b.rep);
  Result r;
  if (mode == "check") {
    r.body["valid"] = true;
    r.body["genus"] = io::integer(static_cast<long long>(b.genus()));
    r.body["projection"] = io::to_json(p);
    r.body["contains_minus_identity"] = contains_minus_identity(b.rep);
    return r;
  }
  std::optional<NormalFormCertificate> nf = is_normal_form(p);
  if (mode == "normal-form") {
    r.body["normal_form"] = nf.has_value();
    if (nf) {
      r.body["k"] = io::integer(static_cast<long long>(nf->k));
      r.body["l"] = io::integer(static_cast<long long>(nf->l));
      r.body["m"] = io::integer(static_cast<long long>(nf->m));
    }
    return r;
  }
  if (!nf) throw std::invalid_argument("orbit-tag: projection is not in normal form");
  SlRep c = canonicalize_lift(b.rep);
  TorusBundle cb{c, b.m, b.n};
  r.body["canonical"] = io::to_json(cb);
  r.body["tag"] = io::to_json(lift_orbit_tag(c));
  return r;
}

Result cmd_lifts(std::string const& path) {
  PslRep p = io::pslrep_from_json(io::parse(io::read_file(path)));
  std::optional<NormalFormCertificate> nf = is_normal_form(p);
  if (!nf) throw std::invalid_argument("lifts: representation is not in normal form");
  std::vector<SlRep> lifts = enumerate_lifts(p);
  std::set<LiftOrbitTag> tags;
  for (SlRep const& l : lifts) tags.insert(lift_orbit_tag(canonicalize_lift(l)));
  Result r;
  r.body["lifts"] = io::integer(static_cast<long long>(lifts.size()));
  r.body["orbits"] = io::integer(static_cast<long long>(tags.size()));
  json t = json::array();
  for (LiftOrbitTag const& x : tags) t.push_back(x.str());
  r.body["tags"] = t;
  return r;
}

Result cmd_iso(std::string const& p1, std::string const& p2) {
  TorusBundle b1 = load_bundle(p1), b2 = load_bundle(p2);
  IsoVerdict v = iso(b1, b2);
  Result r;
  r.body = io::to_json(v);
  if (v.certificate) r.body["certificate_verified"] = verify_certificate(b1, b2, *v.certificate);
  if (v.answer == Answer::indeterminate) r.code = 3;
  return r;
}

Result cmd_euler(std::string const& path) {
  TorusBundle b = load_bundle(path);
  Result r;
  r.body["module"] = io::to_json(euler_module(b.rep));
  r.body["torsion"] = euler_torsion(b);
  return r;
}

Result cmd_symplectic(std::string const& path) {
  TorusBundle b = load_bundle(path);
  Result r;
  r.body["compatible"] = compatible_symplectic(b);
  r.body["total_space"] = total_space_symplectic(b);
  return r;
}

Result cmd_betti(std::string const& path) {
  Result r;
  r.body["b1_flat"] = io::integer(static_cast<long long>(betti1_flat(load_bundle(path).rep)));
  return r;
}

Result cmd_decompose(std::string const& path) {
  Result r;
  json pieces = json::array();
  for (TorusBundle const& p : decompose(load_bundle(path))) pieces.push_back(io::to_json(p));
  r.body["pieces"] = pieces;
  return r;
}

Result cmd_sum(std::string const& p1, std::string const& p2) {
  Result r;
  r.body["bundle"] = io::to_json(fiber_sum(load_bundle(p1), load_bundle(p2)));
  return r;
}

void print_human(json const& body) {
  for (auto const& [k, v] : body.items()) {
    std::string text = v.is_string() && !io::is_integer(v) ? v.get<std::string>() : io::dump(v, -1);
    std::cout << k << ": " << text << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification queries for T^2-bundles over closed orientable surfaces"};
  app.fallthrough();
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Print machine-readable JSON");

  std::string m1, m2, p1, p2, sig = "2,3", mode;
  std::vector<std::string> words;

  auto* order_cmd = app.add_subcommand("order", "Order of a matrix in SL(2,Z)");
  order_cmd->add_option("matrix", m1, "[[a,b],[c,d]]")->required();
  auto* word_cmd = app.add_subcommand("word", "Word in s, t for a matrix");
  word_cmd->add_option("matrix", m1, "[[a,b],[c,d]]")->required();
  auto* conj_cmd = app.add_subcommand("conj", "Conjugator g with g A g^-1 = B (matrices or PSL words)");
  conj_cmd->add_option("A", m1)->required();
  conj_cmd->add_option("B", m2)->required();
  auto* sub_cmd = app.add_subcommand("subgroup", "Kurosh invariants of a subgroup of a free product");
  sub_cmd->add_option("--sig", sig, "Orders of the cyclic factors, e.g. 2,3");
  sub_cmd->add_option("words", words, "Generators")->required();
  auto* rep_cmd = app.add_subcommand("rep", "Monodromy checks");
  rep_cmd->add_option("mode", mode)->required()->check(CLI::IsMember({"check", "normal-form", "orbit-tag"}));
  rep_cmd->add_option("bundle", p1)->required();
  auto* lifts_cmd = app.add_subcommand("lifts", "Orbit census of the 2^(2g) lifts");
  lifts_cmd->add_option("pslrep", p1)->required();
  auto* iso_cmd = app.add_subcommand("iso", "Decide bundle isomorphism");
  iso_cmd->add_option("b1", p1)->required();
  iso_cmd->add_option("b2", p2)->required();
  auto* euler_cmd = app.add_subcommand("euler", "Euler class module and torsion flag");
  euler_cmd->add_option("bundle", p1)->required();
  auto* sympl_cmd = app.add_subcommand("symplectic", "Symplectic predicates");
  sympl_cmd->add_option("bundle", p1)->required();
  auto* betti_cmd = app.add_subcommand("betti", "First Betti number of the flat bundle");
  betti_cmd->add_option("bundle", p1)->required();
  auto* dec_cmd = app.add_subcommand("decompose", "Split into genus-1 fiber-sum pieces");
  dec_cmd->add_option("bundle", p1)->required();
  auto* sum_cmd = app.add_subcommand("sum", "Fiber connected sum");
  sum_cmd->add_option("b1", p1)->required();
  sum_cmd->add_option("b2", p2)->required();

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 1;
  }

  Result res;
  try {
    if (*order_cmd) res = cmd_order(m1);
    else if (*word_cmd) res = cmd_word(m1);
    else if (*conj_cmd) res = cmd_conj(m1, m2);
    else if (*sub_cmd) res = cmd_subgroup(sig, words);
    else if (*rep_cmd) res = cmd_rep(mode, p1);
    else if (*lifts_cmd) res = cmd_lifts(p1);
    else if (*iso_cmd) res = cmd_iso(p1, p2);
    else if (*euler_cmd) res = cmd_euler(p1);
    else if (*sympl_cmd) res = cmd_symplectic(p1);
    else if (*betti_cmd) res = cmd_betti(p1);
    else if (*dec_cmd) res = cmd_decompose(p1);
    else if (*sum_cmd) res = cmd_sum(p1, p2);
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (as_json) {
    std::cout << io::dump(res.body) << "\n";
  } else {
    print_human(res.body);
  }
  return res.code;
}
