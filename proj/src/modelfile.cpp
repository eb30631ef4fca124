#include "smr/modelfile.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "smr/errors.hpp"

namespace smr {

namespace {

struct Tokenizer {
  std::vector<std::vector<std::string>> lines;  // tokenized, comments stripped
  std::vector<int> line_numbers;
  std::size_t pos = 0;

  explicit Tokenizer(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::vector<std::string> toks;
      std::string tok;
      while (ls >> tok) toks.push_back(tok);
      if (!toks.empty()) {
        lines.push_back(std::move(toks));
        line_numbers.push_back(lineno);
      }
    }
  }

  bool done() const { return pos >= lines.size(); }
  const std::vector<std::string>& peek() const { return lines[pos]; }
  int lineno() const { return done() ? -1 : line_numbers[pos]; }
  std::vector<std::string> take() { return lines[pos++]; }
};

[[noreturn]] void fail(int lineno, const std::string& msg) {
  throw ParseError("model file, line " + std::to_string(lineno) + ": " + msg);
}

double parse_number(const std::string& tok, int lineno) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') fail(lineno, "expected a number, got '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int lineno) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0') fail(lineno, "expected an integer, got '" + tok + "'");
  return static_cast<int>(v);
}

// A weight is a number or a signed parameter reference.
double parse_weight(const std::string& tok, const std::map<std::string, double>& params,
                    int lineno) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() && *end == '\0') return v;
  double sign = 1.0;
  std::string name = tok;
  if (!name.empty() && (name[0] == '-' || name[0] == '+')) {
    sign = name[0] == '-' ? -1.0 : 1.0;
    name.erase(0, 1);
  }
  auto it = params.find(name);
  if (it == params.end()) fail(lineno, "unknown parameter '" + name + "'");
  return sign * it->second;
}

Matrix parse_matrix(Tokenizer& tz, const std::string& which) {
  auto header = tz.take();
  const int lineno = tz.line_numbers[tz.pos - 1];
  if (header.size() != 3 || header[0] != which) {
    fail(lineno, "expected '" + which + " <rows> <cols>'");
  }
  const int rows = parse_int(header[1], lineno);
  const int cols = parse_int(header[2], lineno);
  if (rows < 0 || cols < 0) fail(lineno, which + ": negative dimension");
  Matrix m(rows, cols);
  std::size_t need = static_cast<std::size_t>(rows) * cols;
  std::size_t got = 0;
  while (got < need) {
    if (tz.done()) fail(lineno, which + ": unexpected end of file inside matrix");
    const int entry_line = tz.lineno();
    for (const std::string& tok : tz.take()) {
      if (got >= need) fail(entry_line, which + ": too many entries");
      m.data()[got++] = parse_number(tok, entry_line);
    }
  }
  if (!m.all_finite()) fail(lineno, which + ": non-finite entry");
  return m;
}

void parse_edge_section(Tokenizer& tz, const std::string& name, std::vector<Edge>& out,
                        const std::map<std::string, double>& params) {
  while (!tz.done()) {
    const int lineno = tz.lineno();
    auto toks = tz.take();
    if (toks.size() == 1 && toks[0] == "end") return;
    if (toks.size() != 2 && toks.size() != 3) {
      fail(lineno, name + ": edge rows have 2 or 3 columns");
    }
    Edge e;
    e.from = parse_int(toks[0], lineno);
    e.to = parse_int(toks[1], lineno);
    e.weight = toks.size() == 3 ? parse_weight(toks[2], params, lineno) : 1.0;
    out.push_back(e);
  }
  throw ParseError("model file: '" + name + "' section not closed with 'end'");
}

}  // namespace

ModelDocument parse_model(const std::string& text) {
  Tokenizer tz(text);
  ModelDocument doc;
  bool saw_ext_in = false;
  bool saw_ext_out = false;
  while (!tz.done()) {
    const int lineno = tz.lineno();
    const auto& head = tz.peek();
    const std::string& kw = head[0];
    if (kw == "param") {
      auto toks = tz.take();
      if (toks.size() != 3) fail(lineno, "expected 'param <name> <value>'");
      doc.params[toks[1]] = parse_number(toks[2], lineno);
    } else if (kw == "subsystem") {
      auto toks = tz.take();
      if (toks.size() != 2) fail(lineno, "expected 'subsystem <label>'");
      const std::string label = toks[1];
      Matrix a = parse_matrix(tz, "A");
      Matrix b = parse_matrix(tz, "B");
      Matrix c = parse_matrix(tz, "C");
      Matrix d = parse_matrix(tz, "D");
      if (tz.done() || tz.peek() != std::vector<std::string>{"end"}) {
        fail(lineno, "subsystem '" + label + "' not closed with 'end'");
      }
      tz.take();
      try {
        doc.subsystems.emplace_back(std::move(a), std::move(b), std::move(c),
                                    std::move(d), label);
      } catch (const Error& e) {
        fail(lineno, e.what());
      }
    } else if (kw == "external_inputs") {
      auto toks = tz.take();
      if (toks.size() != 2) fail(lineno, "expected 'external_inputs <count>'");
      doc.edges.external_inputs = parse_int(toks[1], lineno);
      saw_ext_in = true;
    } else if (kw == "external_outputs") {
      auto toks = tz.take();
      if (toks.size() != 2) fail(lineno, "expected 'external_outputs <count>'");
      doc.edges.external_outputs = parse_int(toks[1], lineno);
      saw_ext_out = true;
    } else if (kw == "iedges" || kw == "einedges" || kw == "eoutedges" || kw == "eedges") {
      tz.take();
      std::vector<Edge>* target = kw == "iedges"      ? &doc.edges.iedges
                                  : kw == "einedges"  ? &doc.edges.einedges
                                  : kw == "eoutedges" ? &doc.edges.eoutedges
                                                      : &doc.edges.eedges;
      parse_edge_section(tz, kw, *target, doc.params);
    } else {
      fail(lineno, "unknown keyword '" + kw + "'");
    }
  }
  if (doc.subsystems.empty()) throw ParseError("model file: no subsystems");
  if (!saw_ext_in || !saw_ext_out) {
    throw ParseError("model file: external_inputs/external_outputs are required");
  }
  return doc;
}

ModelDocument load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix(std::ostream& out, const char* name, const Matrix& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (int i = 0; i < m.rows(); ++i) {
    out << " ";
    for (int j = 0; j < m.cols(); ++j) out << ' ' << fmt17(m(i, j));
    out << '\n';
  }
}

void write_edges(std::ostream& out, const char* name, const std::vector<Edge>& edges) {
  out << name << '\n';
  for (const Edge& e : edges) {
    out << "  " << e.from << ' ' << e.to << ' ' << fmt17(e.weight) << '\n';
  }
  out << "end\n";
}

}  // namespace

std::string write_model(const ModelDocument& doc) {
  std::ostringstream out;
  for (const auto& [name, value] : doc.params) {
    out << "param " << name << ' ' << fmt17(value) << '\n';
  }
  for (const StateSpaceModel& s : doc.subsystems) {
    out << "subsystem " << (s.label.empty() ? std::string("S") : s.label) << '\n';
    write_matrix(out, "A", s.A);
    write_matrix(out, "B", s.B);
    write_matrix(out, "C", s.C);
    write_matrix(out, "D", s.D);
    out << "end\n";
  }
  out << "external_inputs " << doc.edges.external_inputs << '\n';
  out << "external_outputs " << doc.edges.external_outputs << '\n';
  write_edges(out, "iedges", doc.edges.iedges);
  write_edges(out, "einedges", doc.edges.einedges);
  write_edges(out, "eoutedges", doc.edges.eoutedges);
  write_edges(out, "eedges", doc.edges.eedges);
  return out.str();
}

void save_model(const ModelDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model file: " + path.string());
  out << write_model(doc);
}

}  // namespace smr
