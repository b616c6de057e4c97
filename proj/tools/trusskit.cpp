// trusskit run <file> | repl | check <certificate>
// Exit status: 0 every command passed, 1 a violation, failed command or
// certificate mismatch, 2 usage, parse or declaration error.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "trusskit/cli.hpp"

namespace {

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = trusskit::cli;
  CLI::App app{"trusskit: finite heaps, trusses and their modules"};
  app.require_subcommand(1);
  cli::Options options;
  bool json = false;
  std::string path;

  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--bound", options.bound, "tail ball radius")->check(CLI::Range(0, 8));
    sub->add_option("--smax", options.smax, "largest dual-basis size (odd)")->check(CLI::Range(1, 7));
    sub->add_option("--size", options.max_size, "largest fixture module")->check(CLI::Range(1, 6));
    sub->add_flag("--json", json, "emit the JSON mirror instead of text");
  };
  auto* run = app.add_subcommand("run", "evaluate a session file and print its certificate");
  run->add_option("file", path, "session file")->required();
  add_flags(run);
  auto* repl = app.add_subcommand("repl", "evaluate lines from standard input as they arrive");
  add_flags(repl);
  auto* check = app.add_subcommand("check", "re-run a text certificate and compare byte for byte");
  check->add_option("certificate", path, "certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (run->parsed() && options.smax % 2 == 0) {
    std::cerr << "trusskit: --smax must be odd\n";
    return 2;
  }

  if (run->parsed()) {
    std::string source;
    if (!read_file(path, source)) {
      std::cerr << "trusskit: cannot read " << path << "\n";
      return 2;
    }
    try {
      const auto doc = cli::evaluate(source, options);
      std::cout << (json ? cli::render_json(doc) : cli::render_text(doc));
      return doc.failed() ? 1 : 0;
    } catch (const cli::ParseError& e) {
      std::cerr << path << ":" << e.what() << "\n";
      return 2;
    }
  }

  if (check->parsed()) {
    std::string text;
    if (!read_file(path, text)) {
      std::cerr << "trusskit: cannot read " << path << "\n";
      return 2;
    }
    try {
      const auto r = cli::check_certificate(text);
      std::cout << path << ": " << r.message << (r.failed ? " (contains failing commands)" : "") << "\n";
      return r.identical && !r.failed ? 0 : 1;
    } catch (const cli::ParseError& e) {
      std::cerr << path << ": embedded source: " << e.what() << "\n";
      return 2;
    }
  }

  // repl: errors are reported and the session continues.
  cli::Session session(options);
  int status = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    try {
      for (const auto& c : session.feed(line)) {
        std::cout << (json ? cli::render_json({line, options, {c}}) : cli::render_certificate(c)) << std::flush;
        if (c.status == cli::Status::Fail || c.status == cli::Status::Error) status = std::max(status, 1);
      }
    } catch (const cli::ParseError& e) {
      std::cout << "error " << e.what() << "\n" << std::flush;
      status = 2;
    }
  }
  return status;
}
