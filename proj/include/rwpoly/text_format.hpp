/**
 * @file text_format.hpp
 * @brief Structured-text files for chains, weights and experiments.
 *
 * One file may hold any of the sections below. Lines starting with ';' are
 * comments, as is the rest of a line after ';'; keys are `name = value`;
 * list values are comma separated; every number may be a decimal or a
 * rational `a/b`.
 *
 *     [chain]
 *     label = C
 *     p = 1              ; prefix p_0..p_{k-1}
 *     q = 0
 *     r = 0              ; optional, defaults to zeros
 *     kappa = 0          ; optional, defaults to zeros
 *     p_tail = 7/10      ; rules in j, valid for j >= prefix length
 *     q_tail = 3/10
 *     r_tail = 0
 *     kappa_tail = 0     ; optional
 *
 *     [weight]
 *     label = E
 *     eta = 1
 *     alpha = 1/2
 *     beta = 1/2
 *     smooth = 2+x       ; expression in x
 *     atoms = 1/2:1/10   ; location:mass pairs, optional
 *
 *     [experiment]
 *     precision = 34
 *     truncation = 400
 *     horizon = 799
 *     seed = 1
 *     chain_file = other.ini   ; relative to the config file
 *
 * Tail rules use the expression grammar of expression.hpp. Writing then
 * reading a chain reproduces it exactly at the working precision.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rwpoly/chain.hpp"
#include "rwpoly/error.hpp"
#include "rwpoly/expression.hpp"
#include "rwpoly/measure_to_chain.hpp"
#include "rwpoly/normalization.hpp"
#include "rwpoly/numeric.hpp"

namespace rwpoly {

struct Entry {
  std::string key;
  std::string value;
};

struct Section {
  std::string name;
  std::vector<Entry> entries;

  const Entry* find(const std::string& key) const {
    for (const auto& e : entries) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }
  bool has(const std::string& key) const { return find(key) != nullptr; }
  std::string get(const std::string& key, const std::string& fallback) const {
    const Entry* e = find(key);
    return e ? e->value : fallback;
  }
};

struct Document {
  std::string origin;  // file name or "<string>"
  std::vector<Section> sections;

  const Section* find(const std::string& name) const {
    for (const auto& s : sections) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

[[noreturn]] inline void fail_in(const std::string& origin, const Section& s, const std::string& what) {
  throw Error(ErrorCode::parse_error, origin + ": [" + s.name + "] " + what);
}

}  // namespace detail

/// INI syntax via Boost.PropertyTree; a ';' later on a line starts a comment.
inline Document parse_document(std::istream& in, const std::string& origin = "<string>") {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::parse_error, origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  Document doc;
  doc.origin = origin;
  for (const auto& [name, body] : tree) {
    if (body.empty()) throw Error(ErrorCode::parse_error, origin + ": key '" + name + "' outside of a section");
    if (name != "chain" && name != "weight" && name != "experiment") {
      throw Error(ErrorCode::parse_error, origin + ": unknown section [" + name + "]");
    }
    Section s{name, {}};
    for (const auto& [key, value] : body) {
      std::string v = value.data();
      if (const auto c = v.find(';'); c != std::string::npos) v = detail::trim(v.substr(0, c));
      s.entries.push_back({key, v});
    }
    doc.sections.push_back(std::move(s));
  }
  return doc;
}

inline Document parse_document(const std::string& text, const std::string& origin = "<string>") {
  std::istringstream in(text);
  return parse_document(in, origin);
}

inline Document read_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open '" + path.string() + "'");
  return parse_document(in, path.string());
}

/// A decimal or rational constant, evaluated at the working precision.
/// Decimals (including exponent notation) are read directly; anything
/// with a '/' goes through the expression parser as an exact rational.
template <class Real>
Real parse_number(const std::string& text) {
  if (text.find('/') == std::string::npos) return parse_real<Real>(text);
  const Expression e = Expression::parse(text, 'j');
  if (!e.is_constant()) throw Error(ErrorCode::parse_error, "not a number: '" + text + "'");
  return e.evaluate(Real(0));
}

namespace detail {

template <class Real>
std::vector<Real> number_list(const Section& s, const std::string& key, const std::string& origin) {
  const Entry* e = s.find(key);
  if (!e || e->value.empty()) return {};
  std::vector<Real> out;
  for (const auto& item : split(e->value, ',')) {
    try {
      out.push_back(parse_number<Real>(item));
    } catch (const Error& err) {
      fail_in(origin, s, key + ": " + err.what());
    }
  }
  return out;
}

template <class Real>
Real number(const Section& s, const std::string& key, const std::string& origin) {
  const Entry* e = s.find(key);
  if (!e) throw Error(ErrorCode::parse_error, origin + ": [" + s.name + "] is missing '" + key + "'");
  try {
    return parse_number<Real>(e->value);
  } catch (const Error& err) {
    fail_in(origin, s, key + ": " + err.what());
  }
}

inline void reject_unknown(const Section& s, std::initializer_list<const char*> known, const std::string& origin) {
  for (const auto& e : s.entries) {
    bool ok = false;
    for (const char* k : known) ok = ok || e.key == k;
    if (!ok) fail_in(origin, s, "unknown key '" + e.key + "'");
  }
}

}  // namespace detail

template <class Real>
ChainSpec<Real> chain_from_section(const Section& s, const std::string& origin = "<string>") {
  detail::reject_unknown(s, {"label", "p", "q", "r", "kappa", "p_tail", "q_tail", "r_tail", "kappa_tail"}, origin);
  auto p = detail::number_list<Real>(s, "p", origin);
  auto q = detail::number_list<Real>(s, "q", origin);
  auto r = detail::number_list<Real>(s, "r", origin);
  auto kappa = detail::number_list<Real>(s, "kappa", origin);
  if (q.size() != p.size()) throw Error(ErrorCode::parse_error, origin + ": p and q prefixes differ in length");
  if (r.empty()) r.assign(p.size(), Real(0));
  if (r.size() != p.size()) throw Error(ErrorCode::parse_error, origin + ": r prefix length differs from p");
  if (!kappa.empty() && kappa.size() != p.size()) {
    throw Error(ErrorCode::parse_error, origin + ": kappa prefix length differs from p");
  }
  const bool any_tail = s.has("p_tail") || s.has("q_tail") || s.has("r_tail") || s.has("kappa_tail");
  std::optional<TailRule> tail;
  if (any_tail) {
    if (!s.has("p_tail") || !s.has("q_tail")) {
      throw Error(ErrorCode::parse_error, origin + ": a tail needs at least p_tail and q_tail");
    }
    tail = TailRule::parse(s.get("p_tail", "0"), s.get("q_tail", "0"), s.get("r_tail", "0"), s.get("kappa_tail", "0"));
  }
  if (p.empty() && !tail) throw Error(ErrorCode::parse_error, origin + ": [chain] has neither a prefix nor a tail");
  return ChainSpec<Real>(s.get("label", "chain"), std::move(p), std::move(q), std::move(r), std::move(kappa),
                         std::move(tail));
}

template <class Real>
WeightSpec<Real> weight_from_section(const Section& s, const std::string& origin = "<string>") {
  detail::reject_unknown(s, {"label", "eta", "alpha", "beta", "smooth", "atoms"}, origin);
  std::vector<std::pair<Real, Real>> atoms;
  if (const Entry* e = s.find("atoms"); e && !e->value.empty()) {
    for (const auto& item : detail::split(e->value, ',')) {
      const auto parts = detail::split(item, ':');
      if (parts.size() != 2) detail::fail_in(origin, s, "atoms are 'location:mass' pairs");
      atoms.push_back({parse_number<Real>(parts[0]), parse_number<Real>(parts[1])});
    }
  }
  return WeightSpec<Real>(s.get("label", "weight"), s.has("eta") ? detail::number<Real>(s, "eta", origin) : Real(1),
                          detail::number<Real>(s, "alpha", origin), detail::number<Real>(s, "beta", origin),
                          Expression::parse(s.get("smooth", "1"), 'x'), std::move(atoms));
}

namespace detail {

template <class Real>
void write_list(std::ostream& os, const std::string& key, const std::vector<Real>& v) {
  os << key << " = ";
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << format_real(v[k]);
  os << '\n';
}

}  // namespace detail

template <class Real>
void write_chain(std::ostream& os, const ChainSpec<Real>& c) {
  os << "[chain]\n";
  os << "label = " << c.label() << '\n';
  if (c.prefix_size() > 0) {
    detail::write_list(os, "p", c.prefix_p());
    detail::write_list(os, "q", c.prefix_q());
    detail::write_list(os, "r", c.prefix_r());
    if (c.has_killing()) detail::write_list(os, "kappa", c.prefix_kappa());
  }
  if (c.tail()) {
    os << "p_tail = " << c.tail()->p.to_string() << '\n';
    os << "q_tail = " << c.tail()->q.to_string() << '\n';
    os << "r_tail = " << c.tail()->r.to_string() << '\n';
    os << "kappa_tail = " << c.tail()->kappa.to_string() << '\n';
  }
}

template <class Real>
void write_weight(std::ostream& os, const WeightSpec<Real>& w) {
  os << "[weight]\n";
  os << "label = " << w.label << '\n';
  os << "eta = " << format_real(w.eta) << '\n';
  os << "alpha = " << format_real(w.alpha) << '\n';
  os << "beta = " << format_real(w.beta) << '\n';
  os << "smooth = " << w.smooth.to_string() << '\n';
  if (!w.atoms.empty()) {
    os << "atoms = ";
    for (std::size_t k = 0; k < w.atoms.size(); ++k) {
      os << (k ? ", " : "") << format_real(w.atoms[k].first) << ':' << format_real(w.atoms[k].second);
    }
    os << '\n';
  }
}

/// The normalized chain as a prefix-only [chain] section, preceded by a
/// comment recording the source chain, eta and the identity deviation.
template <class Real>
void write_normalized(std::ostream& os, const NormalizedChain<Real>& nc) {
  os << "; provenance: normalized from '" << nc.base_label << "' at eta = " << format_real(nc.eta_used)
     << ", depth = " << nc.depth() << ", max |p~+q~+r~-1| = " << format_real(nc.max_sum_deviation) << '\n';
  write_chain(os, nc.as_chain());
}

// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::filesystem::path path;
  Document document;           // all sections, with referenced files merged in
  int precision = default_digits;
  std::size_t truncation = 400;
  std::size_t horizon = 799;
  std::uint64_t seed = 1;
  std::map<std::string, std::string> options;  // other [experiment] keys

  const Section* chain() const { return document.find("chain"); }
  const Section* weight() const { return document.find("weight"); }

  std::string option(const std::string& key, const std::string& fallback) const {
    const auto it = options.find(key);
    return it == options.end() ? fallback : it->second;
  }
  std::size_t option_size(const std::string& key, std::size_t fallback) const {
    const auto it = options.find(key);
    if (it == options.end()) return fallback;
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(key);
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::parse_error, "option '" + key + "' must be a nonnegative integer");
    }
  }

  void validate() const {
    if (precision < 15) throw Error(ErrorCode::invalid_argument, "precision must be at least 15 digits");
    if (truncation < 2) throw Error(ErrorCode::invalid_argument, "truncation must be at least 2");
    if (horizon < 1) throw Error(ErrorCode::invalid_argument, "horizon must be at least 1");
  }
};

namespace detail {

inline std::size_t parse_size(const Entry& e, const Section& s, const std::string& origin) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument(e.value);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    fail_in(origin, s, e.key + " must be a nonnegative integer");
  }
}

}  // namespace detail

/// Reads a config; `chain_file` / `weight_file` entries pull the matching
/// section from another file (relative to this one).
inline ExperimentConfig read_experiment(const std::filesystem::path& path) {
  ExperimentConfig cfg;
  cfg.path = path;
  cfg.document = read_document(path);
  const std::string origin = cfg.document.origin;
  if (const Section* found = cfg.document.find("experiment")) {
    const Section ex = *found;  // sections may grow below
    for (const auto& e : ex.entries) {
      if (e.key == "precision") {
        cfg.precision = static_cast<int>(detail::parse_size(e, ex, origin));
      } else if (e.key == "truncation") {
        cfg.truncation = detail::parse_size(e, ex, origin);
      } else if (e.key == "horizon") {
        cfg.horizon = detail::parse_size(e, ex, origin);
      } else if (e.key == "seed") {
        cfg.seed = detail::parse_size(e, ex, origin);
      } else if (e.key == "chain_file" || e.key == "weight_file") {
        const std::string want = e.key == "chain_file" ? "chain" : "weight";
        if (cfg.document.find(want)) detail::fail_in(origin, ex, e.key + " given alongside an embedded [" + want + "]");
        const auto ref = path.parent_path() / e.value;
        if (!std::filesystem::exists(ref)) detail::fail_in(origin, ex, "referenced file '" + ref.string() + "' does not exist");
        const Document other = read_document(ref);
        const Section* s = other.find(want);
        if (!s) detail::fail_in(origin, ex, "'" + ref.string() + "' has no [" + want + "] section");
        cfg.document.sections.push_back(*s);
      } else {
        cfg.options[e.key] = e.value;
      }
    }
  }
  if (!cfg.chain() && !cfg.weight()) {
    throw Error(ErrorCode::parse_error, origin + ": config has neither a [chain] nor a [weight] section");
  }
  cfg.validate();
  return cfg;
}

}  // namespace rwpoly
