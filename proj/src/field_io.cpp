#include "circlestab/field_io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "circlestab/errors.hpp"

namespace circlestab {
namespace {

struct Token {
  std::string text;
  int column = 0;  // 1-based start column
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

double parse_double(const Token& tok, const std::string& value, int line_no) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') {
    throw parse_error("bad numeric value '" + value + "'", line_no, tok.column);
  }
  return v;
}

int parse_int(const Token& tok, const std::string& value, int line_no) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') {
    throw parse_error("bad integer value '" + value + "'", line_no, tok.column);
  }
  return static_cast<int>(v);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Atom parse_atom_line(const std::string& line, int line_no) {
  const auto tokens = tokenize(line);
  if (tokens.empty()) throw parse_error("empty atom line", line_no, 1);

  Atom atom;
  try {
    atom.kind = atom_kind_from_name(tokens[0].text);
  } catch (const error& e) {
    throw parse_error(e.what(), line_no, tokens[0].column);
  }

  std::map<std::string, double> nums;
  std::map<std::string, int> ints;
  for (size_t i = 1; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    const auto eq = tok.text.find('=');
    if (eq == std::string::npos) {
      throw parse_error("expected key=value, got '" + tok.text + "'", line_no, tok.column);
    }
    const std::string key = tok.text.substr(0, eq);
    const std::string value = tok.text.substr(eq + 1);
    if (nums.count(key) || ints.count(key)) {
      throw parse_error("duplicate parameter '" + key + "'", line_no, tok.column);
    }
    if (key == "k") {
      ints[key] = parse_int(tok, value, line_no);
    } else if (key == "amp" || key == "a" || key == "b" || key == "delta" || key == "center" ||
               key == "radius") {
      nums[key] = parse_double(tok, value, line_no);
    } else {
      throw parse_error("unknown parameter '" + key + "'", line_no, tok.column);
    }
  }

  const auto need = [&](const char* key) -> double {
    const auto it = nums.find(key);
    if (it == nums.end()) {
      throw parse_error(std::string("missing parameter '") + key + "' for " + tokens[0].text,
                        line_no, tokens[0].column);
    }
    return it->second;
  };
  const auto allowed = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : nums) {
      (void)value;
      bool ok = key == "amp";
      for (const char* want : keys) ok = ok || key == want;
      if (!ok) {
        throw parse_error("parameter '" + key + "' does not apply to " + tokens[0].text, line_no,
                          tokens[0].column);
      }
    }
  };

  atom.amplitude = nums.count("amp") ? nums["amp"] : 1.0;
  switch (atom.kind) {
    case AtomKind::Constant:
      allowed({});
      if (ints.count("k")) throw parse_error("parameter 'k' does not apply to constant", line_no, tokens[0].column);
      break;
    case AtomKind::FourierCos:
    case AtomKind::FourierSin:
      allowed({});
      if (!ints.count("k")) throw parse_error("missing parameter 'k'", line_no, tokens[0].column);
      atom.k = ints["k"];
      break;
    case AtomKind::BumpPsi:
      allowed({"a", "b"});
      atom.a = need("a");
      atom.b = need("b");
      break;
    case AtomKind::PlateauPhi:
      allowed({"a", "b", "delta"});
      atom.a = need("a");
      atom.b = need("b");
      atom.delta = need("delta");
      break;
    case AtomKind::OddTheta:
      allowed({"center", "delta"});
      atom.center = need("center");
      atom.delta = need("delta");
      break;
    case AtomKind::OddThetaHat:
      allowed({"a", "b", "delta"});
      atom.a = need("a");
      atom.b = need("b");
      atom.delta = need("delta");
      break;
    case AtomKind::AccumOsc:
      allowed({"center", "radius"});
      atom.center = need("center");
      atom.radius = need("radius");
      break;
  }

  try {
    atom.validate();
  } catch (const precondition_error& e) {
    throw parse_error(e.what(), line_no, tokens[0].column);
  }
  return atom;
}

CircleField parse_field_text(const std::string& text, const std::string& label) {
  CircleField field;
  field.label = label;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (tokenize(line).empty()) continue;
    field.atoms.push_back(parse_atom_line(line, line_no));
  }
  return field;
}

CircleField load_field_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open field file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_field_text(buf.str(), std::filesystem::path(path).stem().string());
}

std::string serialize_atom(const Atom& atom) {
  std::string out = atom_kind_name(atom.kind);
  const auto num = [&](const char* key, double v) {
    out += ' ';
    out += key;
    out += '=';
    out += format_number(v);
  };
  switch (atom.kind) {
    case AtomKind::Constant:
      break;
    case AtomKind::FourierCos:
    case AtomKind::FourierSin:
      out += " k=" + std::to_string(atom.k);
      break;
    case AtomKind::BumpPsi:
      num("a", atom.a);
      num("b", atom.b);
      break;
    case AtomKind::PlateauPhi:
      num("a", atom.a);
      num("b", atom.b);
      num("delta", atom.delta);
      break;
    case AtomKind::OddTheta:
      num("center", atom.center);
      num("delta", atom.delta);
      break;
    case AtomKind::OddThetaHat:
      num("a", atom.a);
      num("b", atom.b);
      num("delta", atom.delta);
      break;
    case AtomKind::AccumOsc:
      num("center", atom.center);
      num("radius", atom.radius);
      break;
  }
  num("amp", atom.amplitude);
  return out;
}

std::string serialize_field(const CircleField& field) {
  std::string out;
  for (const Atom& atom : field.atoms) {
    out += serialize_atom(atom);
    out += '\n';
  }
  return out;
}

}  // namespace circlestab
