#pragma once

// JSON documents for bundles, representations, verdicts and certificates.
// Integers keep their exact decimal text in both directions.

#include "t2bundle/bundle.hpp"

#include <json.hpp>

#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace t2b::io {

using json = nlohmann::json;

namespace detail {

// Integers are held in the DOM as strings behind this marker; input strings
// may not contain it.
constexpr char int_marker = '\x01';

class ExactSax : public nlohmann::json_sax<json> {
 public:
  json root;

  bool null() override { return put(nullptr); }
  bool boolean(bool v) override { return put(v); }
  bool number_integer(number_integer_t v) override { return put(int_marker + std::to_string(v)); }
  bool number_unsigned(number_unsigned_t v) override { return put(int_marker + std::to_string(v)); }
  bool number_float(number_float_t, string_t const& s) override {
    static std::regex const integer("-?[0-9]+");
    if (!std::regex_match(s, integer)) throw std::invalid_argument("non-integer number " + s);
    return put(int_marker + s);
  }
  bool string(string_t& v) override {
    if (v.find(int_marker) != std::string::npos) throw std::invalid_argument("control character in string");
    return put(v);
  }
  bool binary(binary_t&) override { throw std::invalid_argument("binary values are not supported"); }
  bool start_object(std::size_t) override { return open(json::object()); }
  bool key(string_t& k) override {
    key_ = k;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(json::array()); }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t pos, std::string const&, nlohmann::detail::exception const& e) override {
    throw std::invalid_argument("JSON parse error at byte " + std::to_string(pos) + ": " + e.what());
  }

 private:
  std::vector<json*> stack_;
  std::string key_;

  json* slot() {
    if (stack_.empty()) return &root;
    json& top = *stack_.back();
    if (top.is_array()) {
      top.push_back(nullptr);
      return &top.back();
    }
    return &top[key_];
  }
  bool put(json v) {
    *slot() = std::move(v);
    return true;
  }
  bool open(json v) {
    json* s = slot();
    *s = std::move(v);
    stack_.push_back(s);
    return true;
  }
  bool close() {
    stack_.pop_back();
    return true;
  }
};

}  // namespace detail

inline json parse(std::string const& text) {
  detail::ExactSax sax;
  json::sax_parse(text, &sax);
  return sax.root;
}

inline json integer(Int const& x) { return detail::int_marker + x.str(); }
inline json integer(long long x) { return integer(Int(x)); }

inline bool is_integer(json const& j) {
  return j.is_string() && !j.get_ref<std::string const&>().empty()
         && j.get_ref<std::string const&>()[0] == detail::int_marker;
}

inline Int as_int(json const& j) {
  if (!is_integer(j)) throw std::invalid_argument("expected an integer, got " + j.dump());
  return parse_int(j.get_ref<std::string const&>().substr(1));
}

inline long as_long(json const& j) {
  Int x = as_int(j);
  if (!fits_int64(x)) throw std::invalid_argument("integer out of range: " + x.str());
  return static_cast<long>(x);
}

inline std::string dump(json const& j, int indent = 2) {
  static std::regex const marked("\"\\\\u0001(-?[0-9]+)\"");
  return std::regex_replace(j.dump(indent), marked, "$1");
}

inline json const& field(json const& obj, char const* name) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw std::invalid_argument(std::string("missing field \"") + name + "\"");
  }
  return obj.at(name);
}

inline std::string read_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

inline json to_json(IntVector const& v) {
  json a = json::array();
  for (Int const& x : v) a.push_back(integer(x));
  return a;
}

inline IntVector vector_from_json(json const& j, size_t len) {
  if (!j.is_array() || j.size() != len) {
    throw std::invalid_argument("expected an integer array of length " + std::to_string(len));
  }
  IntVector v;
  for (json const& x : j) v.push_back(as_int(x));
  return v;
}

inline json to_json(Sl2Matrix const& m) {
  return json::array({json::array({integer(m.a()), integer(m.b())}),
                      json::array({integer(m.c()), integer(m.d())})});
}

inline Sl2Matrix matrix_from_json(json const& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("matrix must be [[a,b],[c,d]]");
  IntVector r0 = vector_from_json(j[0], 2), r1 = vector_from_json(j[1], 2);
  return Sl2Matrix(r0[0], r0[1], r1[0], r1[1]);
}

inline Sl2Matrix parse_matrix(std::string const& text) { return matrix_from_json(parse(text)); }

inline json to_json(TorusBundle const& b) {
  json mono = json::array();
  for (auto const& [a, bb] : b.rep.pairs) mono.push_back(json::array({to_json(a), to_json(bb)}));
  return {{"genus", integer(static_cast<long long>(b.genus()))},
          {"monodromy", mono},
          {"euler", json::array({integer(b.m), integer(b.n)})}};
}

inline SlRep monodromy_from_json(json const& doc) {
  long g = as_long(field(doc, "genus"));
  json const& mono = field(doc, "monodromy");
  if (g < 0 || !mono.is_array() || mono.size() != static_cast<size_t>(g)) {
    throw std::invalid_argument("monodromy must list exactly genus pairs");
  }
  SlRep r;
  for (json const& p : mono) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("monodromy entries must be [A,B]");
    r.pairs.emplace_back(matrix_from_json(p[0]), matrix_from_json(p[1]));
  }
  return r;
}

inline TorusBundle bundle_from_json(json const& doc) {
  TorusBundle b;
  b.rep = monodromy_from_json(doc);
  IntVector e = vector_from_json(field(doc, "euler"), 2);
  b.m = e[0];
  b.n = e[1];
  require_valid(b);
  return b;
}

inline json to_json(PslRep const& r) {
  json pairs = json::array();
  for (auto const& [a, b] : r.pairs) pairs.push_back(json::array({to_string(a), to_string(b)}));
  return {{"genus", integer(static_cast<long long>(r.genus()))}, {"pairs", pairs}};
}

// {"genus", "pairs": [["e","ab"],...]}, or a bundle document whose
// monodromy is projected.
inline PslRep pslrep_from_json(json const& doc) {
  if (doc.is_object() && doc.contains("monodromy")) {
    SlRep r = monodromy_from_json(doc);
    if (!validate(r)) throw std::invalid_argument("monodromy violates the surface relator");
    return project_rep(r);
  }
  long g = as_long(field(doc, "genus"));
  json const& pairs = field(doc, "pairs");
  if (g < 0 || !pairs.is_array() || pairs.size() != static_cast<size_t>(g)) {
    throw std::invalid_argument("pairs must list exactly genus pairs");
  }
  PslRep r;
  for (json const& p : pairs) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
      throw std::invalid_argument("pairs entries must be two word strings");
    }
    r.pairs.emplace_back(parse_psl_word(p[0].get<std::string>()), parse_psl_word(p[1].get<std::string>()));
  }
  if (!validate(r)) throw std::invalid_argument("representation violates the surface relator");
  return r;
}

// ---------------------------------------------------------------------------

inline json to_json(QuotientModule const& q) {
  json t = json::array();
  for (Int const& x : q.torsion) t.push_back(integer(x));
  return {{"rank", integer(static_cast<long long>(q.rank))}, {"torsion", t}};
}

inline json to_json(LiftOrbitTag const& t) {
  json j = {{"variant", t.minus_in_image ? "MinusInImage" : "MinusFree"}, {"text", t.str()}};
  if (t.minus_in_image) {
    json s = json::array();
    for (int x : t.signs) s.push_back(integer(x));
    j["signs"] = s;
  } else {
    json m = json::array();
    for (Sl2Matrix const& x : t.matrices) m.push_back(to_json(x));
    j["matrices"] = m;
  }
  return j;
}

inline json to_json(KuroshInvariants const& k) {
  json f = json::object();
  for (auto const& [o, c] : k.factor_counts) f[std::to_string(o)] = integer(c);
  return {{"free_rank", integer(k.free_rank)}, {"factor_counts", f}};
}

inline json to_json(GenWord const& w) {
  json a = json::array();
  for (int x : w) a.push_back(integer(x));
  return a;
}

inline json to_json(IsoCertificate const& c) {
  json j = {{"genus", integer(static_cast<long long>(c.genus))}, {"Q", to_json(c.q)}};
  if (c.genus == 1) {
    j["P1"] = to_json(c.p1);
    j["P2"] = to_json(c.p2);
    j["normal1"] = to_json(c.normal1);
    j["normal2"] = to_json(c.normal2);
    j["case"] = integer(c.sf_case);
  }
  if (!c.x.empty()) {
    json xs = json::array();
    for (IntVector const& x : c.x) xs.push_back(to_json(x));
    j["x"] = xs;
  }
  if (c.x0) j["x0"] = to_json(*c.x0);
  if (c.genus >= 2) {
    json f = json::array(), b = json::array();
    for (GenWord const& w : c.forward) f.push_back(to_json(w));
    for (GenWord const& w : c.backward) b.push_back(to_json(w));
    j["forward"] = f;
    j["backward"] = b;
    j["orbit_tag"] = c.tag;
  }
  return j;
}

inline json to_json(IsoVerdict const& v) {
  json j = {{"answer", to_string(v.answer)}};
  if (v.answer == Answer::no) {
    j["failed_condition"] = integer(v.failed_condition);
    j["invariant"] = v.invariant;
  }
  if (v.answer == Answer::indeterminate) j["reason"] = v.reason;
  if (v.certificate) j["certificate"] = to_json(*v.certificate);
  return j;
}

}  // namespace t2b::io
