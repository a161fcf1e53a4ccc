#include "lbjet_cli/spec_file.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lbjet/parser.hpp"

namespace lbjet::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct RawEntry {
  std::string key, value;
  int line;
};

std::vector<RawEntry> tokenize(const std::string& text) {
  std::vector<RawEntry> out;
  std::string cur;
  bool quoted = false, comment = false;
  int line = 1, entry_line = 1;
  auto flush = [&]() {
    std::string t = trim(cur);
    cur.clear();
    if (t.empty()) return;
    auto eq = t.find('=');
    // The key never contains quotes, so the first '=' separates.
    if (eq == std::string::npos) throw SpecError("expected key = value, got '" + t + "'", entry_line);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (value.find('"') != std::string::npos) {
      throw SpecError("stray quote in value of '" + key + "'", entry_line);
    }
    if (key.empty()) throw SpecError("empty key", entry_line);
    out.push_back({key, value, entry_line});
  };
  for (char c : text) {
    if (c == '\n') {
      if (quoted) throw SpecError("unterminated quote", line);
      comment = false;
      flush();
      ++line;
      entry_line = line;
      continue;
    }
    if (comment) continue;
    if (c == '"') quoted = !quoted;
    if (!quoted && c == '#') {
      comment = true;
      continue;
    }
    if (!quoted && c == ';') {
      flush();
      entry_line = line;
      continue;
    }
    if (cur.empty() && (c == ' ' || c == '\t')) continue;
    if (cur.empty()) entry_line = line;
    cur.push_back(c);
  }
  if (quoted) throw SpecError("unterminated quote", line);
  flush();
  return out;
}

int parse_count(const RawEntry& e) {
  try {
    std::size_t used = 0;
    int v = std::stoi(e.value, &used);
    if (used != e.value.size() || v < 1) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw SpecError("'" + e.key + "' must be a positive integer", e.line);
  }
}

// Index suffix of keys like xi2 or eta0_1.
std::optional<int> suffix(const std::string& key, const std::string& prefix) {
  if (key.rfind(prefix, 0) != 0 || key.size() == prefix.size()) return std::nullopt;
  std::string rest = key.substr(prefix.size());
  for (char c : rest) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  return std::stoi(rest);
}

Expr parse_component(const std::string& key, const std::string& text, const Signature& sig, int line = 0) {
  try {
    return lbjet::parse(text, sig);
  } catch (const ParseError& e) {
    throw SpecError(key + ": " + e.what(), line);
  }
}

int line_of(const FieldSpecFile& f, const std::string& key) {
  auto it = f.key_lines.find(key);
  return it == f.key_lines.end() ? 0 : it->second;
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

FieldSpecFile FieldSpecFile::parse(const std::string& text) {
  FieldSpecFile f;
  std::map<int, std::string> xi, eta, phi;
  bool have_n = false, have_m = false;
  for (const auto& e : tokenize(text)) {
    if (f.key_lines.count(e.key)) throw SpecError("duplicate key '" + e.key + "'", e.line);
    f.key_lines[e.key] = e.line;
    if (e.key == "n") {
      f.n = static_cast<std::size_t>(parse_count(e));
      have_n = true;
    } else if (e.key == "m") {
      f.m = parse_count(e);
      have_m = true;
    } else if (e.key == "name") {
      f.name = e.value;
    } else if (e.key == "origin") {
      f.origin = e.value;
    } else if (e.key == "point") {
      f.point = e.value;
    } else if (auto i = suffix(e.key, "eta0_")) {
      eta[*i] = e.value;
    } else if (auto i = suffix(e.key, "xi")) {
      xi[*i] = e.value;
    } else if (auto i = suffix(e.key, "phi")) {
      phi[*i] = e.value;
    } else {
      throw SpecError("unknown key '" + e.key + "'", e.line);
    }
  }
  if (!have_n || !have_m) throw SpecError("spec needs both n and m");
  auto collect = [](const std::map<int, std::string>& src, std::size_t count, const std::string& prefix) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= count; ++i) {
      auto it = src.find(static_cast<int>(i));
      if (it == src.end()) throw SpecError("missing " + prefix + std::to_string(i));
      out.push_back(it->second);
    }
    if (src.size() != count) throw SpecError(prefix + " entries beyond the declared signature");
    return out;
  };
  if (!phi.empty()) {
    if (!xi.empty() || !eta.empty()) throw SpecError("a spec gives either phi or xi/eta0, not both");
    f.kind = Kind::Phi;
    f.phi = collect(phi, static_cast<std::size_t>(f.m), "phi");
  } else {
    f.xi = collect(xi, f.n, "xi");
    f.eta0 = collect(eta, static_cast<std::size_t>(f.m), "eta0_");
  }
  return f;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

FieldSpecFile FieldSpecFile::load(const std::string& path) { return parse(read_file(path)); }

LBField FieldSpecFile::field() const {
  if (kind != Kind::Field) throw SpecError("spec describes phi functions, not a field");
  Signature sig{n, m, {}};
  std::vector<Expr> x, e;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    std::string key = "xi" + std::to_string(i + 1);
    x.push_back(parse_component(key, xi[i], sig, line_of(*this, key)));
  }
  for (std::size_t i = 0; i < eta0.size(); ++i) {
    std::string key = "eta0_" + std::to_string(i + 1);
    e.push_back(parse_component(key, eta0[i], sig, line_of(*this, key)));
  }
  return LBField::make(n, m, x, e);
}

std::vector<Expr> FieldSpecFile::phis() const {
  Signature sig{n, m, {}};
  std::vector<Expr> out;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    std::string key = "phi" + std::to_string(i + 1);
    out.push_back(parse_component(key, phi[i], sig, line_of(*this, key)));
  }
  return out;
}

std::optional<JetPoint> FieldSpecFile::jet_point() const {
  if (!point) return std::nullopt;
  std::vector<Rational> v;
  std::stringstream ss(*point);
  std::string item;
  Signature none{1, 1, {}};
  while (std::getline(ss, item, ',')) {
    Expr e = parse_component("point", trim(item), none, line_of(*this, "point"));
    Rational q;
    if (!e.is_rational_constant(&q)) throw SpecError("point entries must be rational numbers");
    v.push_back(q);
  }
  if (v.size() != 5) throw SpecError("point needs 5 values: x, y0_1, y0_2, y1_1, y1_2");
  return make_point(v[0], v[1], v[2], v[3], v[4]);
}

std::string FieldSpecFile::to_text() const {
  std::ostringstream os;
  if (!name.empty()) os << "name = " << quote(name) << "\n";
  if (!origin.empty()) os << "origin = " << quote(origin) << "\n";
  os << "n = " << n << "\n";
  os << "m = " << m << "\n";
  for (std::size_t i = 0; i < xi.size(); ++i) os << "xi" << i + 1 << " = " << quote(xi[i]) << "\n";
  for (std::size_t i = 0; i < eta0.size(); ++i) os << "eta0_" << i + 1 << " = " << quote(eta0[i]) << "\n";
  for (std::size_t i = 0; i < phi.size(); ++i) os << "phi" << i + 1 << " = " << quote(phi[i]) << "\n";
  if (point) os << "point = " << quote(*point) << "\n";
  return os.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lbjet::cli
