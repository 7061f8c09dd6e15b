#include "csrkn/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace csrkn {

std::string format_double(double x) {
  if (!std::isfinite(x)) throw ValidationError("cannot serialize a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void dump(const Json& j, bool pretty, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(2 * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        dump(it.value(), pretty, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(),
                                     [](const Json& e) { return e.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += pretty && flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump(e, pretty, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json meta_json(const TableauMeta& meta) {
  Json m = Json::object();
  if (meta.source_family_order) m["source_family_order"] = *meta.source_family_order;
  if (meta.params) {
    Json p = Json::object();
    for (const auto& [k, v] : *meta.params) p[k] = v;
    m["params"] = p;
  }
  if (meta.quadrature) m["quadrature"] = *meta.quadrature;
  return m;
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path.empty() ? "document" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

int read_r(const Json& j) {
  const Json& r = field(j, "r", "");
  if (!r.is_number_integer()) throw ParseError("r", "expected an integer");
  const int value = r.get<int>();
  if (value < 1) throw ValidationError("r must be at least 1");
  return value;
}

void check_format(const Json& j) {
  const Json& f = field(j, "format", "");
  if (!f.is_string()) throw ParseError("format", "expected a string");
  if (f.get<std::string>() != kTableauFormat) {
    throw ParseError("format", "unsupported format '" + f.get<std::string>() + "'");
  }
}

void check_length(const Json& a, int r, const std::string& name) {
  if (static_cast<int>(a.size()) != r) {
    throw ValidationError(name + " has length " + std::to_string(a.size()) + " but r = " +
                          std::to_string(r));
  }
}

template <typename Leaf, typename Out>
void read_vector(const Json& j, const std::string& name, int r, Leaf leaf, Out out) {
  const Json& a = array(field(j, name, ""), name);
  check_length(a, r, name);
  for (int i = 0; i < r; ++i) out(i, leaf(a[static_cast<std::size_t>(i)],
                                          name + "[" + std::to_string(i) + "]"));
}

template <typename Leaf, typename Out>
void read_matrix(const Json& j, int r, Leaf leaf, Out out) {
  const Json& a = array(field(j, "a_bar", ""), "a_bar");
  check_length(a, r, "a_bar");
  for (int i = 0; i < r; ++i) {
    const std::string row_path = "a_bar[" + std::to_string(i) + "]";
    const Json& row = array(a[static_cast<std::size_t>(i)], row_path);
    check_length(row, r, row_path);
    for (int k = 0; k < r; ++k)
      out(i, k, leaf(row[static_cast<std::size_t>(k)], row_path + "[" + std::to_string(k) + "]"));
  }
}

bool is_affine_leaf(const Json& j) { return j.is_object() && j.contains("const"); }

bool any_affine(const Json& j) {
  if (is_affine_leaf(j)) return true;
  if (j.is_array()) return std::any_of(j.begin(), j.end(), any_affine);
  return false;
}

}  // namespace

std::string dump_json(const Json& j, bool pretty) {
  std::string out;
  dump(j, pretty, 0, out);
  if (pretty) out += '\n';
  return out;
}

Json to_json(const RknTableau<double>& t, const TableauMeta& meta) {
  t.validate();
  Json j;
  j["format"] = kTableauFormat;
  j["r"] = t.stages();
  j["c"] = vector_json(t.c);
  Json a = Json::array();
  for (int i = 0; i < t.stages(); ++i) a.push_back(vector_json(t.a_bar.row(i).transpose()));
  j["a_bar"] = a;
  j["b_bar"] = vector_json(t.b_bar);
  j["b"] = vector_json(t.b);
  Json m = meta_json(meta);
  if (!m.empty()) j["meta"] = m;
  return j;
}

Json to_json(const ParametricTableau& pt, const TableauMeta& meta) {
  pt.validate();
  const int r = pt.stages();
  auto leaf = [&](const AffineForm& f) {
    Json lin = Json::object();
    for (Eigen::Index k = 0; k < f.coeffs.size(); ++k) {
      if (f.coeffs(k) != 0.0) lin[pt.parameters[static_cast<std::size_t>(k)]] = f.coeffs(k);
    }
    return Json{{"const", f.constant}, {"lin", lin}};
  };
  auto forms = [&](const std::vector<AffineForm>& v) {
    Json a = Json::array();
    for (const auto& f : v) a.push_back(leaf(f));
    return a;
  };
  Json j;
  j["format"] = kTableauFormat;
  j["r"] = r;
  j["parameters"] = pt.parameters;
  j["c"] = vector_json(pt.c);
  Json a = Json::array();
  for (int i = 0; i < r; ++i) {
    Json row = Json::array();
    for (int k = 0; k < r; ++k) row.push_back(leaf(pt.a(i, k)));
    a.push_back(row);
  }
  j["a_bar"] = a;
  j["b_bar"] = forms(pt.b_bar);
  j["b"] = forms(pt.b);
  Json m = meta_json(meta);
  if (!m.empty()) j["meta"] = m;
  return j;
}

bool is_parametric_document(const Json& j) {
  if (!j.is_object()) return false;
  for (const char* key : {"c", "a_bar", "b_bar", "b"}) {
    auto it = j.find(key);
    if (it != j.end() && any_affine(*it)) return true;
  }
  return false;
}

TableauDocument tableau_from_json(const Json& j) {
  check_format(j);
  const int r = read_r(j);
  TableauDocument doc;
  auto& t = doc.tableau;
  t.c.resize(r);
  t.a_bar.resize(r, r);
  t.b_bar.resize(r);
  t.b.resize(r);
  read_vector(j, "c", r, number, [&](int i, double v) { t.c(i) = v; });
  read_matrix(j, r, number, [&](int i, int k, double v) { t.a_bar(i, k) = v; });
  read_vector(j, "b_bar", r, number, [&](int i, double v) { t.b_bar(i) = v; });
  read_vector(j, "b", r, number, [&](int i, double v) { t.b(i) = v; });

  if (auto it = j.find("meta"); it != j.end()) {
    const Json& m = *it;
    if (!m.is_object()) throw ParseError("meta", "expected an object");
    if (auto o = m.find("source_family_order"); o != m.end()) {
      if (!o->is_number_integer()) throw ParseError("meta.source_family_order", "expected an integer");
      doc.meta.source_family_order = o->get<int>();
    }
    if (auto p = m.find("params"); p != m.end()) {
      if (!p->is_object()) throw ParseError("meta.params", "expected an object");
      ParameterMap params;
      for (auto e = p->begin(); e != p->end(); ++e)
        params[e.key()] = number(e.value(), "meta.params." + e.key());
      doc.meta.params = params;
    }
    if (auto q = m.find("quadrature"); q != m.end()) {
      if (!q->is_string()) throw ParseError("meta.quadrature", "expected a string");
      doc.meta.quadrature = q->get<std::string>();
    }
  }
  return doc;
}

ParametricTableau parametric_from_json(const Json& j) {
  check_format(j);
  const int r = read_r(j);
  ParametricTableau pt;
  std::map<std::string, std::size_t> index;
  auto add_parameter = [&](const std::string& name) {
    if (index.count(name)) return;
    index[name] = pt.parameters.size();
    pt.parameters.push_back(name);
  };
  if (auto it = j.find("parameters"); it != j.end()) {
    if (!it->is_array()) throw ParseError("parameters", "expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      if (!(*it)[k].is_string())
        throw ParseError("parameters[" + std::to_string(k) + "]", "expected a string");
      add_parameter((*it)[k].get<std::string>());
    }
  }
  // First pass collects parameter names used by any leaf.
  std::function<void(const Json&)> scan = [&](const Json& e) {
    if (is_affine_leaf(e)) {
      if (auto lin = e.find("lin"); lin != e.end() && lin->is_object())
        for (auto p = lin->begin(); p != lin->end(); ++p) add_parameter(p.key());
    } else if (e.is_array()) {
      for (const auto& x : e) scan(x);
    }
  };
  for (const char* key : {"a_bar", "b_bar", "b"})
    if (auto it = j.find(key); it != j.end()) scan(*it);

  const auto n = static_cast<Eigen::Index>(pt.parameters.size());
  auto affine = [&](const Json& e, const std::string& path) {
    AffineForm f;
    f.coeffs = Eigen::VectorXd::Zero(n);
    if (e.is_number()) {
      f.constant = e.get<double>();
      return f;
    }
    if (!is_affine_leaf(e)) throw ParseError(path, "expected a number or {\"const\", \"lin\"}");
    f.constant = number(e.at("const"), path + ".const");
    if (auto lin = e.find("lin"); lin != e.end()) {
      if (!lin->is_object()) throw ParseError(path + ".lin", "expected an object");
      for (auto p = lin->begin(); p != lin->end(); ++p)
        f.coeffs(static_cast<Eigen::Index>(index.at(p.key()))) =
            number(p.value(), path + ".lin." + p.key());
    }
    return f;
  };

  pt.c.resize(r);
  pt.a_bar.assign(static_cast<std::size_t>(r * r), AffineForm{});
  pt.b_bar.assign(static_cast<std::size_t>(r), AffineForm{});
  pt.b.assign(static_cast<std::size_t>(r), AffineForm{});
  read_vector(j, "c", r, number, [&](int i, double v) { pt.c(i) = v; });
  read_matrix(j, r, affine, [&](int i, int k, AffineForm v) {
    pt.a_bar[static_cast<std::size_t>(i * r + k)] = std::move(v);
  });
  read_vector(j, "b_bar", r, affine,
              [&](int i, AffineForm v) { pt.b_bar[static_cast<std::size_t>(i)] = std::move(v); });
  read_vector(j, "b", r, affine,
              [&](int i, AffineForm v) { pt.b[static_cast<std::size_t>(i)] = std::move(v); });
  pt.validate();
  return pt;
}

namespace {

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("document", e.what());
  }
}

}  // namespace

std::string serialize(const RknTableau<double>& t, const TableauMeta& meta, bool pretty) {
  return dump_json(to_json(t, meta), pretty);
}

std::string serialize(const ParametricTableau& pt, const TableauMeta& meta, bool pretty) {
  return dump_json(to_json(pt, meta), pretty);
}

TableauDocument deserialize_tableau(const std::string& text) {
  return tableau_from_json(parse_text(text));
}

ParametricTableau deserialize_parametric(const std::string& text) {
  return parametric_from_json(parse_text(text));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path, "cannot open file for writing");
  out << text;
  if (!out) throw ParseError(path, "write failed");
}

TableauDocument load_tableau(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return deserialize_tableau(text);
  } catch (const ParseError& e) {
    std::string message = e.what();
    const std::string prefix = e.path() + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    throw ParseError(path + ": " + e.path(), message);
  }
}

std::string trajectory_csv(const Trajectory<double>& traj) {
  std::string out = "t";
  const Eigen::Index d = traj.states.empty() ? 0 : traj.states.front().q.size();
  for (Eigen::Index k = 1; k <= d; ++k) out += ",q" + std::to_string(k);
  for (Eigen::Index k = 1; k <= d; ++k) out += ",p" + std::to_string(k);
  const bool energy = traj.energy.size() == traj.states.size() && !traj.energy.empty();
  if (energy) out += ",H";
  out += '\n';
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const auto& s = traj.states[n];
    out += format_double(s.t);
    for (Eigen::Index k = 0; k < d; ++k) out += "," + format_double(s.q(k));
    for (Eigen::Index k = 0; k < d; ++k) out += "," + format_double(s.p(k));
    if (energy) out += "," + format_double(traj.energy[n]);
    out += '\n';
  }
  return out;
}

}  // namespace csrkn
