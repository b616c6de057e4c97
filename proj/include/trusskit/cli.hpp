#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trusskit/module.hpp"

namespace trusskit::cli {

struct Location {
  std::size_t line = 0, column = 0;  // 1-based
};

class ParseError : public Error {
 public:
  ParseError(Location at, const std::string& message);
  Location where;
};

enum class TokenKind { Word, String, Symbol };

struct Token {
  TokenKind kind = TokenKind::Word;
  std::string text;
  Location at;
  friend bool operator==(const Token& a, const Token& b) { return a.kind == b.kind && a.text == b.text; }
};

enum class DeclKind { Heap, HeapTT, Truss, Module, Morphism, Command };

// One line of a session.  For commands `name` is the command word and
// `body` its arguments; for declarations `body` follows the `=`.  A
// morphism keeps its signature `A -> B` in `signature`.
struct Declaration {
  DeclKind kind = DeclKind::Command;
  std::string name;
  std::vector<Token> signature;
  std::vector<Token> body;
  Location at;
  friend bool operator==(const Declaration& a, const Declaration& b) {
    return a.kind == b.kind && a.name == b.name && a.signature == b.signature && a.body == b.body;
  }
};

// Syntax, duplicate names and unresolved references are ParseErrors.
std::vector<Declaration> parse(const std::string& source);
std::string serialize(const Declaration& d);
std::string serialize(const std::vector<Declaration>& ds);

// Tabular declarations reproducing a fixture; evaluating them rebuilds an
// equal structure.
std::string serialize_heap(const std::string& name, const FiniteAbelianHeap& h);
std::string serialize_truss(const std::string& name, const std::string& heap_name, const FiniteTruss& t);
std::string serialize_module(const std::string& name, const std::string& truss_name, const std::string& heap_name,
                             const FiniteModule& m);

struct Options {
  std::int64_t bound = 3;     // tail ball radius
  std::size_t smax = 3;       // dual-basis size
  std::size_t max_size = 4;   // enumeration size for fixture families
};

enum class Status { Pass, Fail, Info, Error };
const char* status_name(Status s);

struct Certificate {
  std::size_t index = 0;
  Location at;
  std::string command;
  std::string claim;
  std::vector<std::string> result;
  std::vector<std::string> witnesses;
  std::string scope;
  Status status = Status::Pass;
};

struct Document {
  std::string source;
  Options options;
  std::vector<Certificate> certificates;
  bool failed() const;
};

// Declarations are evaluated in order; a command's library errors become a
// certificate with status error.  Errors in building declared objects are
// ParseErrors located at the declaration.
Document evaluate(const std::string& source, const Options& options);

std::string render_text(const Document& doc);
std::string render_json(const Document& doc);

struct CheckResult {
  bool identical = false;
  bool failed = false;
  std::string message;
};
// Re-runs the embedded source and compares the rendered text byte for byte.
CheckResult check_certificate(const std::string& text);

// Declared objects by name; a bimodule contributes its left side.
struct Objects {
  std::map<std::string, HeapPtr> heaps;
  std::map<std::string, TrussPtr> trusses;
  std::map<std::string, ModulePtr> modules;
};

// Incremental evaluation for the interactive shell.
class Session {
 public:
  explicit Session(Options options);
  ~Session();
  // Evaluates one more line; returns the certificates it produced.
  std::vector<Certificate> feed(const std::string& line);
  Objects objects() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

std::string render_certificate(const Certificate& c);

}  // namespace trusskit::cli
