// r2sf command-line front end. Human summary on stdout, JSON report via
// --out (or on stdout with --json-only). Exit 0 = all checks pass, 1 = a
// check failed, 2 = usage or infeasible request.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "r2sf/report.hpp"

namespace {

struct Options {
  r2sf::RunConfig cfg;
  std::string out;
  bool json_only = false;
  bool transpose = false, dual = false;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--mode", o.cfg.mode, "Long-line search: exhaustive, candidates or auto")
      ->check(CLI::IsMember({"exhaustive", "candidates", "auto"}));
  sub->add_option("--nuclei", o.cfg.nuclei, "Nuclei route: spreadset, bruteforce, sampled or all")
      ->check(CLI::IsMember({"spreadset", "bruteforce", "sampled", "all"}));
  sub->add_option("--workers", o.cfg.workers, "Worker threads")->envname("R2SF_WORKERS");
  sub->add_option("--seed", o.cfg.seed, "Seed for sampled nuclei");
  sub->add_option("--cap", o.cfg.cap, "Exhaustive long-line cap on |L|^2");
  sub->add_option("--out", o.out, "Write the JSON report here");
  sub->add_flag("--json-only", o.json_only, "Print only the JSON report");
}

void add_field(CLI::App* sub, Options& o) {
  auto& s = o.cfg.spec;
  sub->add_option("--p", s.p, "Characteristic")->required();
  sub->add_option("--h", s.h, "q = p^h")->required();
  sub->add_option("--n", s.n, "Extension degree")->required();
}

void add_family(CLI::App* sub, Options& o) {
  auto& s = o.cfg.spec;
  sub->add_option("--family", s.family, "dA, dB, dAB, k17, k19, gd or gtf")->required();
  add_field(sub, o);
  sub->add_option("--r", s.r, "Frobenius exponent r");
  sub->add_option("--s", s.s, "GD exponent s");
  sub->add_option("--t", s.t, "GD / GTF exponent t");
  sub->add_option("--a", s.a, "Parameter a");
  sub->add_option("--b", s.b, "Parameter b");
  sub->add_option("--c", s.c, "GTF parameter c as e0|e1");
  sub->add_option("--f", s.f, "Parameter f");
  sub->add_option("--g", s.g, "Parameter g");
  sub->add_option("--xi", s.xi, "Non-square xi of F_q");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-two presemifields, their linear sets and known-family comparison"};
  // --h is the field parameter, so help is --help only.
  app.set_help_flag("--help", "Print help");
  app.require_subcommand(1);
  Options o;

  for (const char* name : {"build", "check", "nuclei", "linset", "distinguish"}) {
    auto* sub = app.add_subcommand(name);
    add_family(sub, o);
    add_common(sub, o);
  }
  auto* derive = app.add_subcommand("derive", "Transpose or translation dual");
  add_family(derive, o);
  add_common(derive, o);
  auto* tr = derive->add_flag("--transpose", o.transpose);
  auto* du = derive->add_flag("--translation-dual", o.dual);
  tr->excludes(du);

  auto* lst = app.add_subcommand("lst", "The linear set L_{s,t}");
  add_field(lst, o);
  lst->add_option("--s", o.cfg.spec.s)->required();
  lst->add_option("--t", o.cfg.spec.t)->required();
  add_common(lst, o);

  auto* verify = app.add_subcommand("verify-paper", "Run a verification suite");
  verify->add_option("--suite", o.cfg.suite)->required()->check(CLI::IsMember(r2sf::suite_names()));
  add_common(verify, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  o.cfg.command = app.get_subcommands().front()->get_name();
  if (o.cfg.command == "derive") {
    if (!o.transpose && !o.dual) {
      std::cerr << "derive needs --transpose or --translation-dual\n";
      return 2;
    }
    o.cfg.derive = o.transpose ? "transpose" : "translation-dual";
  }

  const auto t0 = std::chrono::steady_clock::now();
  const r2sf::Report rep = r2sf::run(o.cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string doc = rep.to_json().dump(2) + "\n";

  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "cannot write " << o.out << "\n";
      return 2;
    }
    f << doc;
  }
  if (o.json_only) {
    std::cout << doc;
  } else {
    std::cout << rep.summary();
    std::printf("elapsed %.2f s\n", secs);
    if (!o.out.empty()) std::cout << "report written to " << o.out << "\n";
  }
  if (o.json_only && !rep.error_message.empty()) std::cerr << rep.error_message << "\n";
  return rep.exit_code();
}
