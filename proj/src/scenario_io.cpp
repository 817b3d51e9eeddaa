#include "qnet/scenario_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace qnet {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s, int line, const std::string& field) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, field, "not a number: '" + s + "'");
  }
}

/// Accepts a, bi, a+bi, a-bi.
cplx parse_complex(const std::string& tok, int line, const std::string& field) {
  std::string s = tok;
  double re = 0.0, im = 0.0;
  if (!s.empty() && s.back() == 'i') {
    s.pop_back();
    // split at the last +/- that is not an exponent sign or leading sign
    size_t split = std::string::npos;
    for (size_t i = s.size(); i-- > 1;) {
      if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
        split = i;
        break;
      }
    }
    if (split == std::string::npos) {
      im = parse_double(s.empty() || s == "+" || s == "-" ? s + "1" : s, line, field);
    } else {
      re = parse_double(s.substr(0, split), line, field);
      std::string imag = s.substr(split);
      if (imag == "+") imag = "1";
      if (imag == "-") imag = "-1";
      im = parse_double(imag, line, field);
    }
  } else {
    re = parse_double(s, line, field);
  }
  return {re, im};
}

Vec3 parse_vec3(const std::string& s, int line, const std::string& field) {
  const auto toks = split_ws(s);
  if (toks.size() != 3) throw ParseError(line, field, "expected 3 numbers");
  return {parse_double(toks[0], line, field), parse_double(toks[1], line, field),
          parse_double(toks[2], line, field)};
}

struct KeyValue {
  std::string value;
  int line;
};

using Section = std::map<std::string, KeyValue>;

std::string require_key(const Section& sec, const std::string& key, int section_line) {
  const auto it = sec.find(key);
  if (it == sec.end()) throw ParseError(section_line, key, "missing required key");
  return it->second.value;
}

int key_line(const Section& sec, const std::string& key, int fallback) {
  const auto it = sec.find(key);
  return it == sec.end() ? fallback : it->second.line;
}

SourceSpec read_source(const Section& sec, int line) {
  SourceSpec s;
  s.line = line;
  const std::string kind = require_key(sec, "kind", line);
  if (kind == "werner") {
    s.kind = SourceSpec::Kind::Werner;
    s.v = parse_double(require_key(sec, "v", line), key_line(sec, "v", line), "v");
  } else if (kind == "bloch") {
    s.kind = SourceSpec::Kind::Bloch;
    s.bloch_u = parse_vec3(require_key(sec, "u", line), key_line(sec, "u", line), "u");
    s.bloch_v = parse_vec3(require_key(sec, "v", line), key_line(sec, "v", line), "v");
    const int tline = key_line(sec, "T", line);
    const auto toks = split_ws(require_key(sec, "T", line));
    if (toks.size() != 9) throw ParseError(tline, "T", "expected 9 numbers (row-major)");
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        s.correlation(i, j) = parse_double(toks[3 * i + j], tline, "T");
  } else if (kind == "matrix") {
    s.kind = SourceSpec::Kind::Matrix;
    const int mline = key_line(sec, "m", line);
    const auto toks = split_ws(require_key(sec, "m", line));
    if (toks.size() != 16) throw ParseError(mline, "m", "expected 16 complex entries (row-major)");
    s.matrix = ComplexMatrix(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s.matrix.at(i, j) = parse_complex(toks[4 * i + j], mline, "m");
  } else {
    throw ParseError(key_line(sec, "kind", line), "kind",
                     "unknown source kind '" + kind + "' (werner | bloch | matrix)");
  }
  return s;
}

PartySpec read_party(const Section& sec, int line) {
  PartySpec p;
  p.line = line;
  const std::string role = require_key(sec, "role", line);
  if (role == "edge") {
    p.role = PartySpec::Role::Edge;
    p.eta = parse_double(require_key(sec, "eta", line), key_line(sec, "eta", line), "eta");
    if (sec.count("eta1"))  // optional second sharpness for asymmetric pairs
      p.eta1 = parse_double(sec.at("eta1").value, sec.at("eta1").line, "eta1");
    if (sec.count("plane")) {
      const std::string plane = sec.at("plane").value;
      if (plane == "xz")
        p.plane = Plane::XZ;
      else if (plane == "xy")
        p.plane = Plane::XY;
      else
        throw ParseError(sec.at("plane").line, "plane", "expected xz or xy");
      p.t = parse_double(require_key(sec, "t", line), key_line(sec, "t", line), "t");
    } else if (sec.count("dir0") && sec.count("dir1")) {
      p.dir0 = parse_vec3(sec.at("dir0").value, sec.at("dir0").line, "dir0");
      p.dir1 = parse_vec3(sec.at("dir1").value, sec.at("dir1").line, "dir1");
    } else {
      throw ParseError(line, "plane", "edge party needs either plane/t or dir0/dir1");
    }
  } else if (role == "central") {
    p.role = PartySpec::Role::Central;
    const std::string basis = require_key(sec, "basis", line);
    if (basis == "bell")
      p.basis = PartySpec::BasisKind::Bell;
    else if (basis == "ghz")
      p.basis = PartySpec::BasisKind::Ghz;
    else
      throw ParseError(sec.at("basis").line, "basis", "expected bell or ghz");
  } else {
    throw ParseError(key_line(sec, "role", line), "role",
                     "unknown party role '" + role + "' (edge | central)");
  }
  return p;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text) {
  ScenarioFile file;
  bool have_topology = false, have_n = false;

  Section top;
  std::vector<std::pair<std::string, int>> section_order;  // (type, header line)
  std::vector<Section> sections;

  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  Section* current = &top;
  while (std::getline(is, raw)) {
    ++lineno;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[[source]]" || line == "[[party]]") {
        section_order.emplace_back(line == "[[source]]" ? "source" : "party", lineno);
        sections.emplace_back();
        current = &sections.back();
        continue;
      }
      throw ParseError(lineno, "section", "unknown section '" + line + "'");
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(lineno, "line", "expected 'key = value' or a [[section]] header");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError(lineno, key.empty() ? "line" : key, "empty key or value");
    if (current->count(key)) throw ParseError(lineno, key, "duplicate key in this section");
    (*current)[key] = {value, lineno};
  }

  for (const auto& [key, kv] : top) {
    if (key == "topology") {
      if (kv.value == "linear")
        file.topology = Topology::Linear;
      else if (kv.value == "star")
        file.topology = Topology::Star;
      else
        throw ParseError(kv.line, "topology", "expected linear or star");
      have_topology = true;
    } else if (key == "n") {
      file.n = static_cast<int>(parse_double(kv.value, kv.line, "n"));
      have_n = true;
    } else if (key == "name") {
      file.name = kv.value;
    } else if (key == "reference_value") {
      file.reference_value = parse_double(kv.value, kv.line, "reference_value");
    } else {
      throw ParseError(kv.line, key, "unknown top-level key");
    }
  }
  if (!have_topology) throw ParseError(1, "topology", "missing required key");
  if (!have_n) throw ParseError(1, "n", "missing required key");

  for (size_t i = 0; i < sections.size(); ++i) {
    if (section_order[i].first == "source")
      file.sources.push_back(read_source(sections[i], section_order[i].second));
    else
      file.parties.push_back(read_party(sections[i], section_order[i].second));
  }
  if (static_cast<int>(file.sources.size()) != file.n)
    throw ParseError(1, "n", "expected " + std::to_string(file.n) + " [[source]] sections, got " +
                                 std::to_string(file.sources.size()));
  if (static_cast<int>(file.parties.size()) != file.n + 1)
    throw ParseError(1, "n", "expected " + std::to_string(file.n + 1) +
                                 " [[party]] sections, got " +
                                 std::to_string(file.parties.size()));
  return file;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

NetworkScenario ScenarioFile::build() const {
  NetworkScenario s;
  s.topology = topology;
  s.n = n;
  for (const auto& src : sources) {
    switch (src.kind) {
      case SourceSpec::Kind::Werner:
        s.sources.push_back(werner(src.v));
        break;
      case SourceSpec::Kind::Bloch:
        s.sources.push_back(from_bloch(src.bloch_u, src.bloch_v, src.correlation));
        break;
      case SourceSpec::Kind::Matrix:
        s.sources.push_back(from_matrix(src.matrix));
        break;
    }
  }
  for (const auto& p : parties) {
    if (p.role == PartySpec::Role::Edge) {
      MeasurementPair pair;
      if (p.plane) {
        pair = equatorial_pair(*p.plane, p.t, p.eta);
        if (p.eta1) pair.m1.eta = *p.eta1;
      } else {
        pair = {DichotomicObservable{p.eta, *p.dir0},
                DichotomicObservable{p.eta1.value_or(p.eta), *p.dir1}};
      }
      s.parties.push_back({pair, std::nullopt});
    } else if (p.basis == PartySpec::BasisKind::Bell) {
      s.parties.push_back({std::nullopt, bell_basis()});
    } else {
      const int nq = (topology == Topology::Star) ? n : 2;
      s.parties.push_back({std::nullopt, ghz_basis(nq)});
    }
  }
  validate_scenario(s);
  return s;
}

std::string serialize_scenario(const NetworkScenario& scenario, const std::string& name,
                               std::optional<double> reference_value) {
  std::ostringstream os;
  os.precision(17);
  os << "topology = " << (scenario.topology == Topology::Linear ? "linear" : "star") << "\n";
  os << "n = " << scenario.n << "\n";
  if (!name.empty()) os << "name = " << name << "\n";
  if (reference_value) os << "reference_value = " << *reference_value << "\n";
  for (const auto& src : scenario.sources) {
    os << "\n[[source]]\nkind = bloch\n";
    os << "u = " << src.bloch_u[0] << ' ' << src.bloch_u[1] << ' ' << src.bloch_u[2] << "\n";
    os << "v = " << src.bloch_v[0] << ' ' << src.bloch_v[1] << ' ' << src.bloch_v[2] << "\n";
    os << "T =";
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) os << ' ' << src.correlation(i, j);
    os << "\n";
  }
  for (const auto& p : scenario.parties) {
    os << "\n[[party]]\n";
    if (p.is_edge()) {
      os << "role = edge\n";
      os << "dir0 = " << p.pair->m0.direction[0] << ' ' << p.pair->m0.direction[1] << ' '
         << p.pair->m0.direction[2] << "\n";
      os << "dir1 = " << p.pair->m1.direction[0] << ' ' << p.pair->m1.direction[1] << ' '
         << p.pair->m1.direction[2] << "\n";
      os << "eta = " << p.pair->m0.eta << "\n";
      if (p.pair->m1.eta != p.pair->m0.eta) os << "eta1 = " << p.pair->m1.eta << "\n";
    } else {
      os << "role = central\n";
      os << "basis = " << (p.basis->n_qubits == 2 && p.basis->label_bits == 2 &&
                                   scenario.topology == Topology::Linear
                               ? "bell"
                               : "ghz")
         << "\n";
    }
  }
  return os.str();
}

}  // namespace qnet
