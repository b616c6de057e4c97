#include "trusskit/cli.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "trusskit/morita.hpp"
#include "trusskit/tensor.hpp"

namespace trusskit::cli {

ParseError::ParseError(Location at, const std::string& message)
    : Error(std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + message), where(at) {}

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Info: return "info";
    case Status::Error: return "error";
  }
  return "?";
}

bool Document::failed() const {
  return std::any_of(certificates.begin(), certificates.end(),
                     [](const Certificate& c) { return c.status == Status::Fail || c.status == Status::Error; });
}

// ---------------------------------------------------------------------------
// Lexing

namespace {

bool is_symbol_char(char c) { return c == '=' || c == ':' || c == ';' || c == '[' || c == ']'; }

std::vector<Token> tokenize(const std::string& line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    const Location at{line_no, i + 1};
    if (c == '"') {
      std::string s;
      ++i;
      bool closed = false;
      while (i < n) {
        if (line[i] == '\\' && i + 1 < n) {
          s += line[i + 1];
          i += 2;
        } else if (line[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          s += line[i++];
        }
      }
      if (!closed) throw ParseError(at, "unterminated string");
      out.push_back({TokenKind::String, s, at});
      continue;
    }
    if (c == '-' && i + 1 < n && line[i + 1] == '>') {
      out.push_back({TokenKind::Symbol, "->", at});
      i += 2;
      continue;
    }
    if (is_symbol_char(c)) {
      out.push_back({TokenKind::Symbol, std::string(1, c), at});
      ++i;
      continue;
    }
    std::string w;
    while (i < n && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#' && line[i] != '"' &&
           !is_symbol_char(line[i]) && !(line[i] == '-' && i + 1 < n && line[i + 1] == '>')) {
      w += line[i++];
    }
    out.push_back({TokenKind::Word, w, at});
  }
  return out;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; });
}

bool is_number(const std::string& s) {
  return !s.empty() && s.size() < 10 && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

const std::set<std::string>& command_words() {
  static const std::set<std::string> words{"validate", "hom",   "tensor",  "quotient", "coeq",  "coproduct", "free",
                                           "dbp",      "morita", "exact",  "split",    "project", "ring"};
  return words;
}

// ---------------------------------------------------------------------------
// Parsing and resolution

// Kinds a name can be referred to as.
enum class Ref { Heap, Truss, Module, Morphism };

// A truss stands for its regular bimodule wherever a module is expected.
Ref as_module(Ref r) { return r == Ref::Truss ? Ref::Module : r; }

class Parser {
 public:
  std::map<std::string, Ref> names;

  std::optional<Declaration> line(const std::string& text, std::size_t line_no) {
    auto toks = tokenize(text, line_no);
    if (toks.empty()) return std::nullopt;
    pos_ = 0;
    toks_ = &toks;
    end_ = Location{line_no, text.size() + 1};
    const Token kw = next("a keyword");
    Declaration d;
    d.at = kw.at;
    if (kw.kind != TokenKind::Word) throw ParseError(kw.at, "expected a keyword, found '" + kw.text + "'");
    if (kw.text == "heap" || kw.text == "heapTT" || kw.text == "truss" || kw.text == "module" || kw.text == "morphism") {
      d.kind = kw.text == "heap"     ? DeclKind::Heap
               : kw.text == "heapTT" ? DeclKind::HeapTT
               : kw.text == "truss"  ? DeclKind::Truss
               : kw.text == "module" ? DeclKind::Module
                                     : DeclKind::Morphism;
      const Token name = next("a name");
      if (name.kind != TokenKind::Word || !is_identifier(name.text)) throw ParseError(name.at, "expected a name");
      if (names.count(name.text)) throw ParseError(name.at, "duplicate name '" + name.text + "'");
      d.name = name.text;
      if (d.kind == DeclKind::Morphism) {
        expect(":");
        d.signature.push_back(reference({Ref::Heap, Ref::Module, Ref::Truss}));
        expect("->");
        d.signature.push_back(reference({Ref::Heap, Ref::Module, Ref::Truss}));
        if (as_module(names.at(d.signature[0].text)) != as_module(names.at(d.signature[1].text))) {
          throw ParseError(d.signature[1].at, "morphism between a heap and a module");
        }
      }
      expect("=");
      const std::size_t body_start = pos_;
      check_body(d);
      d.body.assign(toks.begin() + static_cast<std::ptrdiff_t>(body_start), toks.end());
      names[d.name] = d.kind == DeclKind::Heap || d.kind == DeclKind::HeapTT ? Ref::Heap
                      : d.kind == DeclKind::Truss                           ? Ref::Truss
                      : d.kind == DeclKind::Module                          ? Ref::Module
                                                                            : Ref::Morphism;
      return d;
    }
    if (!command_words().count(kw.text)) throw ParseError(kw.at, "unknown keyword '" + kw.text + "'");
    d.kind = DeclKind::Command;
    d.name = kw.text;
    const std::size_t body_start = pos_;
    check_command(d.name);
    d.body.assign(toks.begin() + static_cast<std::ptrdiff_t>(body_start), toks.end());
    return d;
  }

 private:
  const std::vector<Token>* toks_ = nullptr;
  std::size_t pos_ = 0;
  Location end_;

  bool done() const { return pos_ >= toks_->size(); }
  const Token* peek() const { return done() ? nullptr : &(*toks_)[pos_]; }
  Token next(const std::string& what) {
    if (done()) throw ParseError(end_, "expected " + what + " at end of line");
    return (*toks_)[pos_++];
  }
  void expect(const std::string& sym) {
    const Token t = next("'" + sym + "'");
    if (t.text != sym || t.kind == TokenKind::String) throw ParseError(t.at, "expected '" + sym + "', found '" + t.text + "'");
  }
  void finish() {
    if (!done()) throw ParseError(peek()->at, "unexpected '" + peek()->text + "'");
  }
  Token word(const std::string& what) {
    const Token t = next(what);
    if (t.kind != TokenKind::Word) throw ParseError(t.at, "expected " + what);
    return t;
  }
  Token number(const std::string& what) {
    const Token t = next(what);
    if (t.kind != TokenKind::Word || !is_number(t.text)) throw ParseError(t.at, "expected " + what + ", found '" + t.text + "'");
    return t;
  }
  Token label() {
    const Token t = next("an element");
    if (t.kind == TokenKind::Symbol) throw ParseError(t.at, "expected an element, found '" + t.text + "'");
    return t;
  }
  Token reference(std::initializer_list<Ref> kinds) {
    const Token t = word("a name");
    const auto it = names.find(t.text);
    if (it == names.end()) throw ParseError(t.at, "unresolved reference '" + t.text + "'");
    if (std::find(kinds.begin(), kinds.end(), it->second) == kinds.end()) {
      throw ParseError(t.at, "'" + t.text + "' has the wrong kind here");
    }
    return t;
  }
  bool accept_word(const std::string& w) {
    if (const Token* t = peek(); t && t->kind == TokenKind::Word && t->text == w) {
      ++pos_;
      return true;
    }
    return false;
  }
  void side_flag(bool allow_both) {
    if (accept_word("left") || accept_word("right")) return;
    if (allow_both) accept_word("both");
  }
  // Labels up to ';', then at least one entry.
  void table_rest(bool with_labels) {
    if (with_labels) {
      std::size_t count = 0;
      while (const Token* t = peek()) {
        if (t->kind == TokenKind::Symbol && t->text == ";") break;
        label();
        ++count;
      }
      if (count == 0) throw ParseError(peek() ? peek()->at : end_, "expected element labels");
    }
    expect(";");
    // An action table over an empty carrier has no entries.
    if (with_labels && done()) throw ParseError(end_, "expected table entries");
    while (!done()) label();
  }

  void check_body(const Declaration& d) {
    switch (d.kind) {
      case DeclKind::Heap: {
        const Token form = word("a heap form");
        if (form.text == "cyclic") number("an order");
        else if (form.text == "group") {
          number("an order");
          while (!done()) number("an order");
        } else if (form.text == "star" || form.text == "empty") {
        } else if (form.text == "table") table_rest(true);
        else if (form.text == "product") {
          reference({Ref::Heap});
          reference({Ref::Heap});
        } else throw ParseError(form.at, "unknown heap form '" + form.text + "'");
        break;
      }
      case DeclKind::HeapTT: table_rest(true); break;
      case DeclKind::Truss: {
        const Token form = word("a truss form");
        if (form.text == "ring" || form.text == "odd") number("a modulus");
        else if (form.text == "matrix") {
          reference({Ref::Truss});
          number("a dimension");
        } else if (form.text == "endo") reference({Ref::Heap});
        else if (form.text == "opposite") reference({Ref::Truss});
        else if (form.text == "table") {
          reference({Ref::Heap});
          table_rest(false);
        } else throw ParseError(form.at, "unknown truss form '" + form.text + "'");
        break;
      }
      case DeclKind::Module: {
        const Token form = word("a module form");
        if (form.text == "regular") {
          reference({Ref::Truss});
          side_flag(true);
        } else if (form.text == "trivial") {
          reference({Ref::Truss});
          reference({Ref::Heap});
          side_flag(false);
        } else if (form.text == "empty") reference({Ref::Truss});
        else if (form.text == "table") {
          reference({Ref::Truss});
          reference({Ref::Heap});
          side_flag(false);
          table_rest(false);
        } else if (form.text == "power") {
          reference({Ref::Module, Ref::Truss});
          number("an exponent");
        } else if (form.text == "product") {
          reference({Ref::Module, Ref::Truss});
          reference({Ref::Module, Ref::Truss});
        } else if (form.text == "induced") {
          reference({Ref::Module, Ref::Truss});
          label();
        } else if (form.text == "family") {
          reference({Ref::Truss});
          number("a family index");
        } else if (form.text == "columns" || form.text == "rows") {
          reference({Ref::Truss});
          number("a dimension");
        } else if (form.text == "dual" || form.text == "abs") reference({Ref::Module, Ref::Truss});
        else throw ParseError(form.at, "unknown module form '" + form.text + "'");
        break;
      }
      case DeclKind::Morphism: {
        if (done()) throw ParseError(end_, "expected images");
        while (!done()) {
          const Token open = next("'['");
          if (open.text != "[" || open.kind != TokenKind::Symbol) throw ParseError(open.at, "expected '[' starting a word");
          std::size_t len = 0;
          for (;;) {
            const Token* t = peek();
            if (!t) throw ParseError(end_, "unterminated word");
            if (t->kind == TokenKind::Symbol && t->text == "]") {
              ++pos_;
              break;
            }
            label();
            ++len;
          }
          if (len % 2 == 0) {
            throw ParseError(open.at, "word of even length " + std::to_string(len) + "; a bracket word needs an odd number of letters");
          }
        }
        break;
      }
      case DeclKind::Command: break;
    }
    finish();
  }

  void check_command(const std::string& c) {
    const std::initializer_list<Ref> any{Ref::Heap, Ref::Truss, Ref::Module, Ref::Morphism};
    if (c == "validate") reference(any);
    else if (c == "hom" || c == "coproduct") {
      const Token a = reference({Ref::Heap, Ref::Module, Ref::Truss});
      const Token b = reference({Ref::Heap, Ref::Module, Ref::Truss});
      if (as_module(names.at(a.text)) != as_module(names.at(b.text))) throw ParseError(b.at, "'" + c + "' needs two heaps or two modules");
    } else if (c == "tensor") {
      reference({Ref::Module, Ref::Truss});
      reference({Ref::Module, Ref::Truss});
      const Token o = word("'over'");
      if (o.text != "over") throw ParseError(o.at, "expected 'over'");
      reference({Ref::Truss});
    } else if (c == "quotient") {
      reference({Ref::Module, Ref::Truss});
      const Token b = word("'by'");
      if (b.text != "by") throw ParseError(b.at, "expected 'by'");
      if (done()) throw ParseError(end_, "expected a morphism or elements");
      while (!done()) label();
    } else if (c == "coeq" || c == "exact" || c == "split") {
      reference({Ref::Morphism});
      reference({Ref::Morphism});
    } else if (c == "free") {
      reference({Ref::Truss});
      const Token o = word("'over'");
      if (o.text != "over") throw ParseError(o.at, "expected 'over'");
      if (done()) throw ParseError(end_, "expected generators");
      while (!done()) label();
    } else if (c == "dbp") {
      reference({Ref::Module, Ref::Truss});
      if (!done()) {
        const Token opt = word("an option");
        if (opt.text.rfind("smax=", 0) != 0 || !is_number(opt.text.substr(5))) throw ParseError(opt.at, "expected smax=K");
        if (std::stoul(opt.text.substr(5)) % 2 == 0) throw ParseError(opt.at, "smax must be odd");
      }
    } else if (c == "morita") {
      reference({Ref::Truss});
      reference({Ref::Truss});
      reference({Ref::Module, Ref::Truss});
      reference({Ref::Module, Ref::Truss});
    } else if (c == "project") reference({Ref::Module, Ref::Truss});
    else if (c == "ring") number("a modulus");
    finish();
  }
};

std::string quote(const Token& t) {
  if (t.kind == TokenKind::Symbol) return t.text;
  bool plain = t.kind == TokenKind::Word && !t.text.empty();
  for (char ch : t.text) {
    if (ch == ' ' || ch == '\t' || ch == '#' || ch == '"' || ch == '\\' || is_symbol_char(ch)) plain = false;
  }
  for (std::size_t i = 0; i + 1 < t.text.size(); ++i) {
    if (t.text[i] == '-' && t.text[i + 1] == '>') plain = false;
  }
  if (plain) return t.text;
  std::string s = "\"";
  for (char ch : t.text) {
    if (ch == '"' || ch == '\\') s += '\\';
    s += ch;
  }
  return s + "\"";
}

std::string quote_label(const std::string& s) { return quote(Token{TokenKind::Word, s, {}}); }

}  // namespace

std::vector<Declaration> parse(const std::string& source) {
  Parser p;
  std::vector<Declaration> out;
  const auto lines = split_lines(source);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (auto d = p.line(lines[i], i + 1)) out.push_back(std::move(*d));
  }
  return out;
}

std::string serialize(const Declaration& d) {
  static const char* kw[] = {"heap", "heapTT", "truss", "module", "morphism"};
  std::string s;
  if (d.kind == DeclKind::Command) {
    s = d.name;
  } else {
    s = std::string(kw[static_cast<int>(d.kind)]) + " " + d.name;
    if (d.kind == DeclKind::Morphism) s += " : " + quote(d.signature[0]) + " -> " + quote(d.signature[1]);
    s += " =";
  }
  for (const auto& t : d.body) s += " " + quote(t);
  return s;
}

std::string serialize(const std::vector<Declaration>& ds) {
  std::string s;
  for (const auto& d : ds) s += serialize(d) + "\n";
  return s;
}

std::string serialize_heap(const std::string& name, const FiniteAbelianHeap& h) {
  if (h.empty()) return "heap " + name + " = empty";
  std::string s = "heap " + name + " = table";
  for (Index x = 0; x < h.size(); ++x) s += " " + quote_label(h.label(x));
  s += " ;";
  for (Index a = 0; a < h.size(); ++a) {
    for (Index b = 0; b < h.size(); ++b) s += " " + quote_label(h.label(h.add(a, b)));
  }
  return s;
}

std::string serialize_truss(const std::string& name, const std::string& heap_name, const FiniteTruss& t) {
  std::string s = "truss " + name + " = table " + heap_name + " ;";
  const auto& h = t.heap();
  for (Index a = 0; a < t.size(); ++a) {
    for (Index b = 0; b < t.size(); ++b) s += " " + quote_label(h.label(t.mul(a, b)));
  }
  return s;
}

std::string serialize_module(const std::string& name, const std::string& truss_name, const std::string& heap_name,
                             const FiniteModule& m) {
  std::string s = "module " + name + " = table " + truss_name + " " + heap_name;
  s += m.side() == Side::Left ? " left ;" : " right ;";
  for (Index t = 0; t < m.truss().size(); ++t) {
    for (Index x = 0; x < m.size(); ++x) s += " " + quote_label(m.heap().label(m.act(t, x)));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct ModuleObj {
  ModulePtr left, right;
  std::string kind = "other";  // regular, columns, rows, other
  std::string truss_name;
  std::size_t n = 0;
  const ModulePtr& primary() const { return left ? left : right; }
};

struct MorphismObj {
  bool heaps = false;
  HeapPtr dom_heap, cod_heap;
  ModuleMorphism mm;
  std::vector<Index> map;
};

std::string join(const std::vector<std::string>& xs, const std::string& sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

std::string labels_of(const FiniteAbelianHeap& h, const std::vector<Index>& xs) {
  std::vector<std::string> out;
  for (Index x : xs) out.push_back(quote_label(h.label(x)));
  return "(" + join(out) + ")";
}

std::string invariants_text(const std::vector<Integer>& inv) {
  if (inv.empty()) return "trivial";
  std::vector<std::string> out;
  for (const auto& d : inv) out.push_back(sgn(d) == 0 ? "Z" : "Z/" + d.get_str());
  return join(out, " + ");
}

void report_lines(Certificate& c, const ValidationReport& r) {
  if (r.ok()) {
    c.result.push_back("no violations");
    c.status = Status::Pass;
    return;
  }
  c.result.push_back(std::to_string(r.count) + " violations");
  const std::size_t shown = std::min<std::size_t>(r.violations.size(), 3);
  for (std::size_t i = 0; i < shown; ++i) {
    std::vector<std::string> w;
    for (Index x : r.violations[i].witness) w.push_back(std::to_string(x));
    c.witnesses.push_back(r.violations[i].law + " at (" + join(w) + ")");
  }
  c.status = Status::Fail;
}

constexpr double kHomGuard = 2e7;

}  // namespace

struct Session::State {
  Options options;
  Parser parser;
  std::size_t line_no = 0;
  std::size_t index = 0;
  std::map<std::string, HeapPtr> heaps;
  std::map<std::string, TrussPtr> trusses;
  std::map<std::string, std::string> truss_heap;  // truss name -> carrier heap name, if declared by table
  std::map<std::string, ModuleObj> modules;
  std::map<std::string, MorphismObj> morphisms;

  std::map<std::string, ModuleObj> implicit;  // regular bimodules of trusses used as modules

  explicit State(Options o) : options(o) {}

  bool is_module(const std::string& name) const { return modules.count(name) || trusses.count(name); }
  const ModuleObj& mod(const std::string& name) {
    if (auto it = modules.find(name); it != modules.end()) return it->second;
    if (auto it = implicit.find(name); it != implicit.end()) return it->second;
    const TrussPtr t = trusses.at(name);
    ModuleObj m;
    m.kind = "regular";
    m.truss_name = name;
    m.left = regular_module(t, Side::Left);
    m.right = make_module(FiniteModule(t, t->heap_ptr(), transpose_mult(*t), Side::Right));
    return implicit[name] = std::move(m);
  }

  // --- lookups with located errors
  static Index element(const FiniteAbelianHeap& h, const Token& t) {
    for (Index x = 0; x < h.size(); ++x) {
      if (h.label(x) == t.text) return x;
    }
    throw ParseError(t.at, "unknown element '" + t.text + "'");
  }
  HeapPtr heap_like(const Token& t) const {
    if (auto it = heaps.find(t.text); it != heaps.end()) return it->second;
    if (auto it = modules.find(t.text); it != modules.end()) return it->second.primary()->heap_ptr();
    throw ParseError(t.at, "'" + t.text + "' is not a heap");
  }
  static std::size_t num(const Token& t) { return std::stoul(t.text); }

  std::vector<Index> table_entries(const FiniteAbelianHeap& h, const std::vector<Token>& body, std::size_t from,
                                   std::size_t expected, Location at) const {
    if (body.size() - from != expected) {
      throw ParseError(at, "expected " + std::to_string(expected) + " table entries, found " + std::to_string(body.size() - from));
    }
    std::vector<Index> out;
    for (std::size_t i = from; i < body.size(); ++i) out.push_back(element(h, body[i]));
    return out;
  }

  static std::size_t find_semicolon(const std::vector<Token>& body) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i].kind == TokenKind::Symbol && body[i].text == ";") return i;
    }
    return body.size();
  }

  static Side side_of(const std::vector<Token>& body, std::size_t at, Side fallback) {
    if (at < body.size() && body[at].text == "right") return Side::Right;
    if (at < body.size() && body[at].text == "left") return Side::Left;
    return fallback;
  }

  void declare(const Declaration& d) {
    try {
      declare_inner(d);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(d.at, std::string("cannot build '") + d.name + "': " + e.what());
    }
  }

  void declare_inner(const Declaration& d) {
    const auto& b = d.body;
    switch (d.kind) {
      case DeclKind::Heap: {
        const std::string& form = b[0].text;
        HeapPtr h;
        if (form == "cyclic") h = cyclic_heap(num(b[1]));
        else if (form == "group") {
          std::vector<std::uint64_t> orders;
          for (std::size_t i = 1; i < b.size(); ++i) orders.push_back(num(b[i]));
          h = abelian_group_heap(orders);
        } else if (form == "star") h = star_heap();
        else if (form == "empty") h = empty_heap();
        else if (form == "product") h = product_heap(*heap_like(b[1]), *heap_like(b[2]));
        else {
          const std::size_t semi = find_semicolon(b);
          std::vector<std::string> labels;
          for (std::size_t i = 1; i < semi; ++i) labels.push_back(b[i].text);
          check_distinct(labels, b[1].at);
          std::vector<Index> add;
          const std::size_t n = labels.size();
          if (b.size() - semi - 1 != n * n) {
            throw ParseError(b[semi].at, "expected " + std::to_string(n * n) + " table entries, found " + std::to_string(b.size() - semi - 1));
          }
          for (std::size_t i = semi + 1; i < b.size(); ++i) add.push_back(label_index(labels, b[i]));
          // The base is the identity of the table.
          std::optional<Index> base;
          for (Index e = 0; e < n && !base; ++e) {
            bool identity = true;
            for (Index x = 0; x < n; ++x) identity = identity && add[e * n + x] == x && add[x * n + e] == x;
            if (identity) base = e;
          }
          if (!base) throw ParseError(b[semi].at, "the table has no identity element");
          h = make_heap(FiniteAbelianHeap(labels, *base, add));
        }
        heaps[d.name] = h;
        break;
      }
      case DeclKind::HeapTT: {
        const std::size_t semi = find_semicolon(b);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < semi; ++i) labels.push_back(b[i].text);
        check_distinct(labels, b[0].at);
        const std::size_t n = labels.size();
        if (b.size() - semi - 1 != n * n * n) {
          throw ParseError(b[semi].at, "expected " + std::to_string(n * n * n) + " ternary entries, found " + std::to_string(b.size() - semi - 1));
        }
        std::vector<Index> tt;
        for (std::size_t i = semi + 1; i < b.size(); ++i) tt.push_back(label_index(labels, b[i]));
        const auto op = [&](Index x, Index y, Index z) { return tt[(x * n + y) * n + z]; };
        const auto r = validate_ternary(n, op);
        if (!r.ok()) throw ParseError(d.at, "ternary table is not an abelian heap (" + r.violations.front().law + ")");
        auto h = heap_from_ternary(n, op, 0);
        if (!h) throw ParseError(d.at, "ternary table is not an abelian heap");
        heaps[d.name] = make_heap(h->relabeled(labels));
        break;
      }
      case DeclKind::Truss: {
        const std::string& form = b[0].text;
        TrussPtr t;
        if (form == "ring") t = truss_from_ring(num(b[1]));
        else if (form == "odd") t = odd_residues_truss(num(b[1]));
        else if (form == "matrix") t = matrix_truss(*trusses.at(b[1].text), num(b[2]));
        else if (form == "endo") t = endomorphism_truss(heaps.at(b[1].text)).truss;
        else if (form == "opposite") t = opposite(*trusses.at(b[1].text));
        else {
          const HeapPtr h = heaps.at(b[1].text);
          const auto mult = table_entries(*h, b, 3, h->size() * h->size(), b[2].at);
          t = make_truss(FiniteTruss(h, mult, find_unit(*h, mult)));
        }
        trusses[d.name] = t;
        heaps.emplace(d.name, t->heap_ptr());
        break;
      }
      case DeclKind::Module: {
        const std::string& form = b[0].text;
        ModuleObj m;
        if (form == "regular") {
          const TrussPtr t = trusses.at(b[1].text);
          m.kind = "regular";
          m.truss_name = b[1].text;
          const std::string side = b.size() > 2 ? b[2].text : "left";
          if (side != "right") m.left = regular_module(t, Side::Left);
          if (side != "left") m.right = make_module(FiniteModule(t, t->heap_ptr(), transpose_mult(*t), Side::Right));
        } else if (form == "trivial") {
          const TrussPtr t = trusses.at(b[1].text);
          const Side s = side_of(b, 3, Side::Left);
          (s == Side::Left ? m.left : m.right) = trivial_module(t, heap_like(b[2]), s);
          m.truss_name = b[1].text;
        } else if (form == "empty") {
          m.left = empty_module(trusses.at(b[1].text));
          m.truss_name = b[1].text;
        } else if (form == "table") {
          const TrussPtr t = trusses.at(b[1].text);
          const HeapPtr h = heap_like(b[2]);
          const std::size_t semi = find_semicolon(b);
          const Side s = side_of(b, 3, Side::Left);
          const auto act = table_entries(*h, b, semi + 1, t->size() * h->size(), b[semi].at);
          (s == Side::Left ? m.left : m.right) = make_module(FiniteModule(t, h, act, s));
          m.truss_name = b[1].text;
        } else if (form == "power") {
          const auto& src = mod(b[1].text);
          m.left = power(src.primary(), num(b[2]));
          m.truss_name = src.truss_name;
        } else if (form == "product") {
          const auto& x = mod(b[1].text);
          const auto& y = mod(b[2].text);
          m.left = product(x.primary(), y.primary()).module;
          m.truss_name = x.truss_name;
        } else if (form == "induced") {
          const auto& src = mod(b[1].text);
          m.left = induced_module(src.primary(), element(src.primary()->heap(), b[2]));
          m.truss_name = src.truss_name;
        } else if (form == "family") {
          const auto fam = module_family(trusses.at(b[1].text), options.max_size);
          const std::size_t i = num(b[2]);
          if (i >= fam.size()) throw ParseError(b[2].at, "family has " + std::to_string(fam.size()) + " modules");
          m.left = fam[i];
          m.truss_name = b[1].text;
        } else if (form == "columns" || form == "rows") {
          const auto ctx = matrix_morita_example(trusses.at(b[1].text), num(b[2]));
          m.kind = form;
          m.truss_name = b[1].text;
          m.n = num(b[2]);
          m.left = form == "columns" ? ctx.p_left : ctx.q_left;
          m.right = form == "columns" ? ctx.p_right : ctx.q_right;
        } else if (form == "dual") {
          const auto& src = mod(b[1].text);
          if (!src.left) throw ParseError(b[1].at, "the dual needs a left module");
          m.right = dual_module(src.left).module;
          m.truss_name = src.truss_name;
        } else {
          const auto& src = mod(b[1].text);
          m.left = abs_functor(src.primary()).module;
          m.truss_name = src.truss_name;
        }
        modules[d.name] = std::move(m);
        break;
      }
      case DeclKind::Morphism: {
        MorphismObj f;
        const bool heaps_only = !is_module(d.signature[0].text);
        f.heaps = heaps_only;
        if (heaps_only) {
          f.dom_heap = heaps.at(d.signature[0].text);
          f.cod_heap = heaps.at(d.signature[1].text);
        } else {
          f.mm.domain = mod(d.signature[0].text).primary();
          f.mm.codomain = mod(d.signature[1].text).primary();
          f.dom_heap = f.mm.domain->heap_ptr();
          f.cod_heap = f.mm.codomain->heap_ptr();
        }
        std::vector<Index> word;
        std::size_t words = 0;
        for (const auto& t : b) {
          if (t.kind == TokenKind::Symbol && t.text == "[") {
            word.clear();
          } else if (t.kind == TokenKind::Symbol && t.text == "]") {
            f.map.push_back(f.cod_heap->multi_bracket(word));
            ++words;
          } else {
            word.push_back(element(*f.cod_heap, t));
          }
        }
        if (words != f.dom_heap->size()) {
          throw ParseError(d.at, "expected " + std::to_string(f.dom_heap->size()) + " images, found " + std::to_string(words));
        }
        f.mm.map = f.map;
        morphisms[d.name] = std::move(f);
        break;
      }
      case DeclKind::Command: break;
    }
  }

  static std::vector<Index> transpose_mult(const FiniteTruss& t) {
    std::vector<Index> act(t.size() * t.size());
    for (Index a = 0; a < t.size(); ++a) {
      for (Index x = 0; x < t.size(); ++x) act[a * t.size() + x] = t.mul(x, a);
    }
    return act;
  }
  static void check_distinct(const std::vector<std::string>& labels, Location at) {
    std::set<std::string> s(labels.begin(), labels.end());
    if (s.size() != labels.size()) throw ParseError(at, "repeated element label");
  }
  static Index label_index(const std::vector<std::string>& labels, const Token& t) {
    const auto it = std::find(labels.begin(), labels.end(), t.text);
    if (it == labels.end()) throw ParseError(t.at, "unknown element '" + t.text + "'");
    return static_cast<Index>(it - labels.begin());
  }

  // --- commands

  Certificate run(const Declaration& d, const std::string& echo) {
    Certificate c;
    c.index = ++index;
    c.at = d.at;
    c.command = echo;
    c.scope = "exhaustive";
    try {
      dispatch(d, c);
    } catch (const Error& e) {
      c.result.push_back(std::string("error: ") + e.what());
      c.status = Status::Error;
    }
    return c;
  }

  void dispatch(const Declaration& d, Certificate& c) {
    const auto& b = d.body;
    const std::string& cmd = d.name;
    if (cmd == "validate") return validate(b[0].text, c);
    if (cmd == "hom") return hom(b[0].text, b[1].text, c);
    if (cmd == "tensor") return tensor_cmd(b[0].text, b[1].text, b[3].text, c);
    if (cmd == "quotient") return quotient_cmd(b, c);
    if (cmd == "coeq") return coeq_cmd(b[0].text, b[1].text, c);
    if (cmd == "coproduct") return coproduct_cmd(b[0], b[1], c);
    if (cmd == "free") return free_cmd(b, c);
    if (cmd == "dbp") {
      std::size_t smax = options.smax;
      if (b.size() > 1) smax = std::stoul(b[1].text.substr(5));
      return dbp_cmd(b[0].text, smax, c);
    }
    if (cmd == "morita") return morita_cmd(b[0].text, b[1].text, b[2].text, b[3].text, c);
    if (cmd == "exact") return exact_cmd(b[0].text, b[1].text, c);
    if (cmd == "split") return split_cmd(b[0].text, b[1].text, c);
    if (cmd == "project") return project_cmd(b[0].text, c);
    if (cmd == "ring") return ring_cmd(num(b[0]), c);
  }

  void validate(const std::string& name, Certificate& c) {
    if (auto it = morphisms.find(name); it != morphisms.end()) {
      const auto& f = it->second;
      const bool ok = f.heaps ? is_heap_morphism(*f.dom_heap, *f.cod_heap, f.map) : is_linear(*f.mm.domain, *f.mm.codomain, f.map);
      c.claim = f.heaps ? "heap morphism" : "linear map";
      c.result.push_back(ok ? "holds" : "fails");
      c.status = ok ? Status::Pass : Status::Fail;
      return;
    }
    if (modules.count(name)) {
      const auto& m = mod(name);
      ValidationReport r;
      if (m.left) r.merge(validate_module(*m.left));
      if (m.right) r.merge(validate_module(*m.right));
      if (m.left && m.right) {
        for (Index s = 0; s < m.left->truss().size(); ++s) {
          for (Index t = 0; t < m.right->truss().size(); ++t) {
            for (Index x = 0; x < m.left->size(); ++x) {
              if (m.left->act(s, m.right->act(t, x)) != m.right->act(t, m.left->act(s, x))) r.add("actions commute", {s, t, x});
            }
          }
        }
      }
      c.claim = m.left && m.right ? "bimodule axioms (module laws on both sides, commuting actions)"
                                  : "module axioms (action associativity, both distributive laws)";
      c.result.push_back("carrier " + std::to_string(m.primary()->size()));
      report_lines(c, r);
      if (!r.reduced_checks.empty()) c.scope = "exhaustive (reduced scan: " + join(r.reduced_checks, ", ") + ")";
      return;
    }
    if (auto it = trusses.find(name); it != trusses.end()) {
      const auto r = validate_truss(*it->second);
      c.claim = "truss axioms (heap, associativity, both distributive laws" +
                std::string(it->second->is_unital() ? ", unit)" : ")");
      c.result.push_back("carrier " + std::to_string(it->second->size()));
      report_lines(c, r);
      if (!r.reduced_checks.empty()) c.scope = "exhaustive (reduced scan: " + join(r.reduced_checks, ", ") + ")";
      return;
    }
    const auto& h = heaps.at(name);
    const auto r = validate_heap(*h);
    c.claim = "abelian heap axioms (associativity, Mal'cev identities, commutativity)";
    c.result.push_back("carrier " + std::to_string(h->size()));
    report_lines(c, r);
    if (!r.reduced_checks.empty()) c.scope = "exhaustive (reduced scan: " + join(r.reduced_checks, ", ") + ")";
  }

  static void guard(const FiniteAbelianHeap& a, const FiniteAbelianHeap& b) {
    if (count_heap_morphisms(a, b).get_d() > kHomGuard) throw SizeLimitError("hom enumeration exceeds the size guard");
  }

  void hom(const std::string& a, const std::string& b, Certificate& c) {
    const std::size_t show = 8;
    if (is_module(a)) {
      const auto& m = *mod(a).primary();
      const auto& n = *mod(b).primary();
      guard(m.heap(), n.heap());
      const auto maps = hom_modules(m, n);
      c.claim = "linear maps " + a + " -> " + b;
      c.result.push_back("count " + std::to_string(maps.size()));
      for (std::size_t i = 0; i < std::min(show, maps.size()); ++i) c.witnesses.push_back(labels_of(n.heap(), maps[i]));
    } else {
      const auto& h = *heaps.at(a);
      const auto& k = *heaps.at(b);
      guard(h, k);
      std::vector<std::vector<Index>> maps;
      for_each_heap_morphism(h, k, [&](const std::vector<Index>& f) {
        if (maps.size() < show) maps.push_back(f);
      });
      c.claim = "heap morphisms " + a + " -> " + b;
      c.result.push_back("count " + count_heap_morphisms(h, k).get_str());
      for (const auto& f : maps) c.witnesses.push_back(labels_of(k, f));
    }
    c.status = Status::Pass;
  }

  ModulePtr sided(const ModuleObj& m, Side side, const TrussPtr& t, const std::string& name) const {
    const ModulePtr& want = side == Side::Left ? m.left : m.right;
    if (want && (want->truss_ptr() == t || want->truss() == *t)) return want;
    const ModulePtr& other = side == Side::Left ? m.right : m.left;
    const ModulePtr& have = other ? other : want;
    if (have && (have->truss_ptr() == t || have->truss() == *t) && is_commutative(*t)) {
      return make_module(have->with_side(side, have->truss_ptr()));
    }
    throw DomainError("'" + name + "' is not a " + (side == Side::Left ? "left" : "right") + " module over the given truss");
  }

  static bool is_commutative(const FiniteTruss& t) {
    for (Index a = 0; a < t.size(); ++a) {
      for (Index b = 0; b < t.size(); ++b) {
        if (t.mul(a, b) != t.mul(b, a)) return false;
      }
    }
    return true;
  }

  void tensor_cmd(const std::string& a, const std::string& b, const std::string& tn, Certificate& c) {
    const TrussPtr t = trusses.at(tn);
    const auto m = sided(mod(a), Side::Right, t, a);
    const auto n = sided(mod(b), Side::Left, t, b);
    const auto tp = tensor(m, n);
    c.claim = a + " (x)_" + tn + " " + b + " as a quotient of the free abelian heap on pairs";
    c.result.push_back("generator pairs " + std::to_string(tp->pair_count()));
    c.result.push_back("relators " + std::to_string(tp->relator_count()));
    c.result.push_back("class group " + invariants_text(tp->invariants()));
    if (tp->finite()) {
      c.result.push_back("carrier " + std::to_string(tp->size()));
      c.result.push_back(std::string("simple tensors generate: ") + (simple_tensors_generate(*tp) ? "yes" : "no"));
    } else {
      c.result.push_back("carrier infinite");
    }
    c.scope = "exhaustive (integer lattice)";
    c.status = Status::Pass;
  }

  void quotient_cmd(const std::vector<Token>& b, Certificate& c) {
    const auto& mo = mod(b[0].text);
    const ModulePtr m = mo.primary();
    std::vector<Index> seed;
    if (b.size() == 3 && morphisms.count(b[2].text)) {
      seed = image_of(morphisms.at(b[2].text).map);
    } else {
      for (std::size_t i = 2; i < b.size(); ++i) seed.push_back(element(m->heap(), b[i]));
    }
    const Index e = seed.front();
    const SubHeap s = generate_subheap(m->heap(), seed);
    c.claim = b[0].text + " / " + labels_of(m->heap(), s.members) + " at e = " + quote_label(m->heap().label(e));
    if (!is_induced_submodule(*m, s, e)) {
      c.result.push_back("the sub-heap is not closed under the induced action");
      c.status = Status::Fail;
      return;
    }
    const auto q = quotient_module(m, s, e);
    c.result.push_back("carrier " + std::to_string(q.module->size()));
    for (const auto& cls : q.classes) c.witnesses.push_back("class " + labels_of(m->heap(), cls));
    c.status = validate_module(*q.module).ok() ? Status::Pass : Status::Fail;
  }

  void coeq_cmd(const std::string& f, const std::string& g, Certificate& c) {
    const auto& fm = morphisms.at(f);
    const auto& gm = morphisms.at(g);
    if (fm.heaps || gm.heaps) throw DomainError("coeq needs module maps");
    if (!(*fm.mm.codomain == *gm.mm.codomain) || fm.map.size() != gm.map.size()) throw DomainError("maps are not parallel");
    ValidationReport r;
    if (!is_linear(*fm.mm.domain, *fm.mm.codomain, fm.map)) r.add("first map linear", {});
    if (!is_linear(*gm.mm.domain, *gm.mm.codomain, gm.map)) r.add("second map linear", {});
    if (!r.ok()) {
      c.claim = "coequalizer";
      report_lines(c, r);
      return;
    }
    const Index e = fm.mm.codomain->size() ? fm.mm.codomain->heap().base() : 0;
    const auto q = coequalizer(fm.mm, gm.mm, e);
    c.claim = "coequalizer C(e) of " + f + ", " + g;
    c.result.push_back("carrier " + std::to_string(q.module->size()));
    for (const auto& cls : q.classes) c.witnesses.push_back("class " + labels_of(fm.mm.codomain->heap(), cls));
    // The projection coequalizes both maps.
    bool ok = true;
    for (std::size_t x = 0; x < fm.map.size(); ++x) ok = ok && q.projection.map[fm.map[x]] == q.projection.map[gm.map[x]];
    c.result.push_back(std::string("projection coequalizes: ") + (ok ? "yes" : "no"));
    c.status = ok ? Status::Pass : Status::Fail;
  }

  void coproduct_cmd(const Token& a, const Token& b, Certificate& c) {
    const HeapPtr h = heap_like(a);
    const HeapPtr k = heap_like(b);
    const auto r = check_iso_direct(h, k, options.bound);
    const HeapCoproduct cop({h, k});
    c.claim = a.text + " [+] " + b.text + " matches H(G(A) + G(B) + Z)";
    c.result.push_back("elements in the tail ball " + std::to_string(cop.ball(options.bound).size()));
    report_lines(c, r);
    c.scope = "bounded(" + std::to_string(options.bound) + ")";
  }

  void free_cmd(const std::vector<Token>& b, Certificate& c) {
    const TrussPtr t = trusses.at(b[0].text);
    std::vector<std::string> gens;
    for (std::size_t i = 2; i < b.size(); ++i) gens.push_back(b[i].text);
    const FreeModule free(t, gens);
    const auto ball = free.ball(options.bound);
    ValidationReport r;
    const auto& cop = free.coproduct();
    for (std::size_t i = 0; i < ball.size(); ++i) {
      for (Index x = 0; x < t->size(); ++x) {
        const auto sx = free.act(x, ball[i]);
        for (Index y = 0; y < t->size(); ++y) {
          if (free.act(y, sx) != free.act(t->mul(y, x), ball[i])) r.add("(ts)·x = t·(s·x)", {y, x, static_cast<Index>(i)});
        }
      }
    }
    const std::size_t sample = std::min<std::size_t>(ball.size(), 12);
    for (std::size_t i = 0; i < sample; ++i) {
      for (std::size_t j = 0; j < sample; ++j) {
        for (std::size_t k = 0; k < sample; ++k) {
          for (Index x = 0; x < t->size(); ++x) {
            if (free.act(x, cop.bracket(ball[i], ball[j], ball[k])) !=
                cop.bracket(free.act(x, ball[i]), free.act(x, ball[j]), free.act(x, ball[k]))) {
              r.add("t·[x,y,z] = [tx,ty,tz]", {x, static_cast<Index>(i), static_cast<Index>(j), static_cast<Index>(k)});
            }
          }
        }
      }
    }
    c.claim = "free module on " + join(gens) + " over " + b[0].text;
    c.result.push_back("rank " + std::to_string(free.rank()));
    c.result.push_back("elements in the tail ball " + std::to_string(ball.size()));
    report_lines(c, r);
    c.scope = "bounded(" + std::to_string(options.bound) + ")";
  }

  void dbp_cmd(const std::string& name, std::size_t smax, Certificate& c) {
    const auto& mo = mod(name);
    if (!mo.left) throw DomainError("dual bases are searched for left modules");
    const ModulePtr p = mo.left;
    guard(p->heap(), p->truss().heap());
    const auto b = search_dual_basis(p, smax);
    c.claim = "dual basis of " + name + " with s <= " + std::to_string(smax);
    if (!b) {
      c.result.push_back("absent");
      c.status = Status::Info;
      return;
    }
    c.result.push_back("holds with s = " + std::to_string(b->size()));
    c.witnesses.push_back("elements " + labels_of(p->heap(), b->elements));
    for (std::size_t k = 0; k < b->size(); ++k) c.witnesses.push_back("covector " + labels_of(p->truss().heap(), b->covectors[k]));
    c.status = check_dual_basis(p, *b).holds ? Status::Pass : Status::Fail;
  }

  void morita_cmd(const std::string& s, const std::string& t, const std::string& p, const std::string& q, Certificate& c) {
    const auto& po = mod(p);
    const auto& qo = mod(q);
    const TrussPtr sp = trusses.at(s);
    const TrussPtr tp = trusses.at(t);
    MoritaContext ctx;
    if (po.kind == "columns" && qo.kind == "rows" && po.truss_name == qo.truss_name && po.n == qo.n) {
      ctx = matrix_morita_example(trusses.at(po.truss_name), po.n);
      ctx.p_left = po.left;
      ctx.p_right = po.right;
      ctx.q_left = qo.left;
      ctx.q_right = qo.right;
      c.claim = "Morita context with ev(c (x) r) = c r^t and db(1) = u (x) u";
    } else if (po.kind == "regular" && qo.kind == "regular" && po.left && po.right && qo.left && qo.right) {
      ctx = unit_morita_context(tp);
      c.claim = "Morita context with ev = multiplication and db(1) = 1 (x) 1";
    } else {
      throw DomainError("no pairing is known for these bimodules (use columns/rows or regular both)");
    }
    if (!(*ctx.s == *sp) || !(*ctx.t == *tp)) throw DomainError("the bimodules are not over the named trusses");
    const auto r = morita_check(ctx);
    c.result.push_back("P (x)_T Q carrier " + std::to_string(r.pq_size) + ", S carrier " + std::to_string(sp->size()));
    c.result.push_back("Q (x)_S P carrier " + std::to_string(r.qp_size) + ", T carrier " + std::to_string(tp->size()));
    c.result.push_back("zigzag identities, bilinearity, bijectivity, explicit inverses");
    report_lines(c, r.report);
  }

  const MorphismObj& module_map(const std::string& name) const {
    const auto& f = morphisms.at(name);
    if (f.heaps) throw DomainError("'" + name + "' is not a module map");
    if (!is_linear(*f.mm.domain, *f.mm.codomain, f.map)) throw DomainError("'" + name + "' is not linear");
    return f;
  }

  void exact_cmd(const std::string& f, const std::string& g, Certificate& c) {
    const auto& fm = module_map(f);
    const auto& gm = module_map(g);
    c.claim = "im(" + f + ") = " + g + "^-1(e) for some e in im(" + g + ")";
    const auto seq = exactness(fm.mm, gm.mm);
    if (!seq) {
      c.result.push_back("no witness e");
      c.status = Status::Fail;
      return;
    }
    c.result.push_back("exact");
    c.witnesses.push_back("e = " + quote_label(gm.mm.codomain->heap().label(seq->e)));
    c.status = Status::Pass;
  }

  void split_cmd(const std::string& f, const std::string& g, Certificate& c) {
    const auto& fm = module_map(f);
    const auto& gm = module_map(g);
    c.claim = "split exact sequence " + f + ", " + g;
    std::string why;
    try {
      const auto s = split_product(fm.mm, gm.mm);
      c.result.push_back("N = M x P through (retraction, " + g + ")");
      c.witnesses.push_back("retraction " + labels_of(fm.mm.domain->heap(), s.splitting));
      c.witnesses.push_back("e = " + quote_label(gm.mm.codomain->heap().label(s.e)));
      report_lines(c, s.report);
      return;
    } catch (const DomainError& e) {
      why = e.what();
    }
    try {
      const auto s = star_sum(fm.mm, gm.mm);
      c.result.push_back("no retraction (" + why + ")");
      c.result.push_back("N = M^(e') x P through [f(m), s(e), s(p)]");
      c.witnesses.push_back("section " + labels_of(gm.mm.domain->heap(), s.splitting));
      c.witnesses.push_back("e = " + quote_label(gm.mm.codomain->heap().label(s.e)) +
                            ", e' = " + quote_label(fm.mm.domain->heap().label(s.e_prime)));
      report_lines(c, s.report);
    } catch (const DomainError& e) {
      c.result.push_back("not split: " + why + "; " + e.what());
      c.status = Status::Fail;
    }
  }

  void project_cmd(const std::string& name, Certificate& c) {
    const ModulePtr p = mod(name).primary();
    if (p->side() != Side::Left) throw DomainError("projectivity is tested for left modules");
    const auto epis = epi_family(p->truss_ptr(), options.max_size);
    const auto r = projectivity(p, epis, 1);
    c.claim = "lifts along every epimorphism of the test family and the counit";
    c.result.push_back("epimorphisms " + std::to_string(r.epis) + ", lifting problems " + std::to_string(r.lifts));
    c.result.push_back(std::string("counit lift: ") + (!r.counit_tested ? "not tested" : r.counit_lifted ? "found" : "none in the ball"));
    if (r.blocking) {
      const auto& pi = epis[r.blocking->first];
      c.witnesses.push_back("blocking epi " + labels_of(pi.codomain->heap(), pi.map) + " with map " +
                            labels_of(pi.codomain->heap(), r.blocking->second));
    }
    c.scope = r.scope;
    c.status = r.passed ? Status::Pass : Status::Fail;
  }

  void ring_cmd(std::size_t n, Certificate& c) {
    if (n < 1 || n > 16) throw DomainError("ring modulus must lie in 1..16");
    const auto t = truss_from_ring(n);
    const auto ring_mods = ring_module_family(n, options.max_size);
    std::vector<ModulePtr> truss_mods;
    for (const auto& m : module_family(t, options.max_size, true)) {
      if (m->size() > 0 && !absorbers(*m).empty()) truss_mods.push_back(m);
    }
    ValidationReport r;
    for (const auto& m : truss_mods) {
      for (const auto& nm : ring_mods) r.merge(abs_adjunction_check(m, nm));
    }
    r.merge(abs_naturality_check(truss_mods, ring_mods));
    c.claim = "(-)_Abs and T(-) over Z/" + std::to_string(n) + ": unit, counit, triangles, naturality";
    c.result.push_back("ring modules " + std::to_string(ring_mods.size()) + ", truss modules with absorbers " +
                       std::to_string(truss_mods.size()));
    for (const auto& nm : ring_mods) {
      const bool proj = ring_projective(nm);
      const bool tiny = search_dual_basis(nm, options.smax).has_value();
      c.witnesses.push_back("module of size " + std::to_string(nm->size()) + ": projective " + (proj ? "yes" : "no") +
                            ", dual basis " + (tiny ? "yes" : "no"));
      if (proj && !tiny) r.add("projective module has a dual basis", {static_cast<Index>(nm->size())});
      if (tiny && !ring_projective(abs_functor(nm).module)) r.add("absorber quotient of a tiny module is projective", {});
    }
    report_lines(c, r);
    c.scope = "exhaustive over modules of size <= " + std::to_string(options.max_size);
  }

  std::vector<Certificate> feed(const std::string& text) {
    ++line_no;
    auto d = parser.line(text, line_no);
    if (!d) return {};
    if (d->kind != DeclKind::Command) {
      // Register the name only after a successful build.
      try {
        declare(*d);
      } catch (...) {
        parser.names.erase(d->name);
        throw;
      }
      return {};
    }
    return {run(*d, serialize(*d))};
  }
};

Session::Session(Options options) : state_(std::make_unique<State>(options)) {}
Session::~Session() = default;
std::vector<Certificate> Session::feed(const std::string& line) { return state_->feed(line); }
Objects Session::objects() const {
  Objects o;
  o.heaps = state_->heaps;
  o.trusses = state_->trusses;
  for (const auto& [name, m] : state_->modules) o.modules[name] = m.primary();
  return o;
}

Document evaluate(const std::string& source, const Options& options) {
  Document doc;
  doc.source = source;
  doc.options = options;
  Session session(options);
  for (const auto& line : split_lines(source)) {
    for (auto& c : session.feed(line)) doc.certificates.push_back(std::move(c));
  }
  return doc;
}

std::string render_certificate(const Certificate& c) {
  std::ostringstream os;
  os << "[" << c.index << "] " << c.command << "   (line " << c.at.line << ")\n";
  if (!c.claim.empty()) os << "  claim: " << c.claim << "\n";
  for (const auto& r : c.result) os << "  result: " << r << "\n";
  for (const auto& w : c.witnesses) os << "  witness: " << w << "\n";
  os << "  scope: " << c.scope << "\n";
  os << "  status: " << status_name(c.status) << "\n";
  return os.str();
}

namespace {

std::string options_line(const Options& o) {
  return "options: bound=" + std::to_string(o.bound) + " smax=" + std::to_string(o.smax) + " size=" + std::to_string(o.max_size);
}

}  // namespace

std::string render_text(const Document& doc) {
  std::ostringstream os;
  os << "trusskit certificate 1\n" << options_line(doc.options) << "\n";
  os << "source:\n";
  for (const auto& l : split_lines(doc.source)) os << "| " << l << "\n";
  os << "end source\n";
  os << "recheck: trusskit check <this file>\n";
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& c : doc.certificates) {
    os << "\n" << render_certificate(c);
    ++counts[static_cast<int>(c.status)];
  }
  os << "\nsummary: " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2] << " info, " << counts[3]
     << " error\n";
  return os.str();
}

std::string render_json(const Document& doc) {
  nlohmann::ordered_json j;
  j["format"] = "trusskit certificate 1";
  j["options"] = {{"bound", doc.options.bound}, {"smax", doc.options.smax}, {"size", doc.options.max_size}};
  j["source"] = split_lines(doc.source);
  j["certificates"] = nlohmann::ordered_json::array();
  for (const auto& c : doc.certificates) {
    j["certificates"].push_back({{"index", c.index},
                                 {"line", c.at.line},
                                 {"command", c.command},
                                 {"claim", c.claim},
                                 {"result", c.result},
                                 {"witnesses", c.witnesses},
                                 {"scope", c.scope},
                                 {"status", status_name(c.status)}});
  }
  return j.dump(2) + "\n";
}

CheckResult check_certificate(const std::string& text) {
  CheckResult out;
  const auto lines = split_lines(text);
  if (lines.size() < 4 || lines[0] != "trusskit certificate 1") {
    out.message = "not a trusskit certificate";
    return out;
  }
  Options o;
  {
    std::istringstream is(lines[1]);
    std::string head, item;
    is >> head;
    if (head != "options:") {
      out.message = "missing options line";
      return out;
    }
    while (is >> item) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) continue;
      const std::string k = item.substr(0, eq), v = item.substr(eq + 1);
      if (k == "bound") o.bound = std::stoll(v);
      else if (k == "smax") o.smax = std::stoul(v);
      else if (k == "size") o.max_size = std::stoul(v);
    }
  }
  std::string source;
  std::size_t i = 2;
  if (lines[i] != "source:") {
    out.message = "missing source block";
    return out;
  }
  for (++i; i < lines.size() && lines[i] != "end source"; ++i) {
    if (lines[i].rfind("|", 0) != 0) {
      out.message = "malformed source line";
      return out;
    }
    source += (lines[i].size() > 2 ? lines[i].substr(2) : std::string()) + "\n";
  }
  const Document doc = evaluate(source, o);
  const std::string again = render_text(doc);
  out.identical = again == text;
  out.failed = doc.failed();
  out.message = out.identical ? "certificate reproduced byte for byte" : "certificate differs from a fresh run";
  return out;
}

}  // namespace trusskit::cli
