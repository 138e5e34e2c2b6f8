// Command-line front end.
//
// Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
// parse error, 3 validation error.

#include <cstdlib>
#include <functional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "udrs/udrs.hpp"

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kInvalid = 3 };

struct Config {
  std::size_t bound = 3;
  std::string gen = "strict";
  std::string format = "text";
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw udrs::Error(udrs::ErrorCode::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

udrs::EvalOptions eval_options(const Config& c) {
  udrs::EvalOptions o;
  if (c.gen == "universal") o.gen = udrs::GenMode::Universal;
  else if (c.gen == "existential") o.gen = udrs::GenMode::Existential;
  return o;
}

bool report_violations(const udrs::UdrsDatabase& db) {
  auto rep = udrs::validate(db);
  for (const auto& v : rep.violations) std::cerr << "invalid: " << v.code << " " << v.label << ": " << v.message << "\n";
  return rep.ok();
}

/// `x` or `alpha(X)`.
udrs::Term parse_term(const std::string& s) {
  auto open = s.find('(');
  if (open == std::string::npos) return udrs::Term(udrs::Referent(s));
  if (s.back() != ')') throw udrs::Error(udrs::ErrorCode::InvalidArgument, "bad term " + s);
  return udrs::Term(s.substr(0, open), udrs::Referent(s.substr(open + 1, s.size() - open - 2)));
}

void need(const std::vector<std::string>& args, std::size_t n, const std::string& op) {
  if (args.size() != n)
    throw udrs::Error(udrs::ErrorCode::InvalidArgument, op + " takes " + std::to_string(n) + " arguments");
}

udrs::UdrsDatabase on_owner(udrs::UdrsDatabase db, const std::string& label,
                            const std::function<udrs::Udrs(const udrs::Udrs&)>& f) {
  udrs::Udrs* u = db.owner_mut(label);
  if (!u) throw udrs::Error(udrs::ErrorCode::UnknownLabel, label);
  *u = f(*u);
  return db;
}

udrs::UdrsDatabase transform(const udrs::UdrsDatabase& db, const std::string& op, const std::vector<std::string>& a) {
  using namespace udrs;
  if (op == "distribute" || op == "collectivize" || op == "genericize") {
    need(a, 1, op);
    return on_owner(db, a[0], [&](const Udrs& u) {
      return op == "distribute" ? distribute(u, a[0]) : op == "genericize" ? genericize(u, a[0]) : collectivize(u, a[0]);
    });
  }
  if (op == "cumulate") {
    need(a, 2, op);
    return on_owner(db, a[0], [&](const Udrs& u) { return cumulate(u, a[0], a[1]); });
  }
  if (op == "resolve") {
    need(a, 2, op);
    return on_owner(db, a[0], [&](const Udrs& u) { return resolve_pronoun(u, a[0], Referent(a[1])); });
  }
  if (op == "order") {
    need(a, 2, op);
    return on_owner(db, a[0], [&](const Udrs& u) { return add_constraint(u, a[0], a[1]); });
  }
  if (op == "abstract") {
    need(a, 3, op);
    return abstract_antecedent(db, a[0], Referent(a[1]), a[2]);
  }
  if (op == "coindex") {
    need(a, 3, op);
    return coindex(db, a[0], a[1], a[2]);
  }
  if (op == "dep") {
    if (a.size() < 2) throw Error(ErrorCode::InvalidArgument, "dep takes K0 L0 followed by t->t pairs");
    std::vector<std::pair<Term, Term>> pi;
    for (std::size_t i = 2; i < a.size(); ++i) {
      auto arrow = a[i].find("->");
      if (arrow == std::string::npos) throw Error(ErrorCode::InvalidArgument, "expected t->t, got " + a[i]);
      pi.emplace_back(parse_term(a[i].substr(0, arrow)), parse_term(a[i].substr(arrow + 2)));
    }
    return mark_dependent(db, a[0], a[1], pi);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown operation " + op);
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  if (const char* env = std::getenv("UDRS_MODEL_BOUND")) {
    try {
      cfg.bound = std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "UDRS_MODEL_BOUND must be a positive integer\n";
      return kUsage;
    }
  }

  CLI::App app{"Underspecified DRS toolkit"};
  app.require_subcommand(1);
  app.add_option("--gen", cfg.gen, "Reading of the generic quantifier")
      ->check(CLI::IsMember({"strict", "universal", "existential"}));
  app.add_option("--format", cfg.format, "Output style")->check(CLI::IsMember({"text", "machine"}));

  std::string file, db_file, goal_file, drs_file, model_file, op;
  std::vector<std::string> op_args;

  auto* validate_cmd = app.add_subcommand("validate", "Check well-formedness");
  validate_cmd->add_option("FILE", file)->required();

  auto* readings_cmd = app.add_subcommand("readings", "List every reading and its DRSs");
  readings_cmd->add_option("FILE", file)->required();

  auto* entail_cmd = app.add_subcommand("entail", "Bounded consequence from a database to a goal");
  entail_cmd->add_option("--db", db_file)->required();
  entail_cmd->add_option("--goal", goal_file)->required();
  entail_cmd->add_option("--bound", cfg.bound)->check(CLI::PositiveNumber);

  auto* check_cmd = app.add_subcommand("check", "Verify a DRS in a model");
  check_cmd->add_option("--drs", drs_file)->required();
  check_cmd->add_option("--model", model_file)->required();

  auto* cons_cmd = app.add_subcommand("consistency", "Search for a model of a DRS");
  cons_cmd->add_option("--drs", drs_file)->required();
  cons_cmd->add_option("--bound", cfg.bound)->check(CLI::PositiveNumber);

  auto* tr_cmd = app.add_subcommand("transform", "Apply one disambiguation step and print the result");
  tr_cmd->add_option("FILE", file)->required();
  tr_cmd->add_option("--op", op)->required()->check(CLI::IsMember(
      {"distribute", "collectivize", "genericize", "cumulate", "resolve", "abstract", "coindex", "dep", "order"}));
  tr_cmd->add_option("--args", op_args)->expected(0, -1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (cfg.bound == 0) {
    std::cerr << "the model bound must be positive\n";
    return kUsage;
  }
  const auto opt = eval_options(cfg);

  try {
    if (*validate_cmd) {
      auto db = udrs::parse_udrs(slurp(file));
      if (!report_violations(db)) return kInvalid;
      std::cout << "valid\n";
      return kOk;
    }
    if (*readings_cmd) {
      auto db = udrs::parse_udrs(slurp(file));
      if (!report_violations(db)) return kInvalid;
      auto rs = udrs::enumerate_readings(db);
      if (cfg.format == "machine") {
        std::cout << udrs::format_readings(db, rs);
      } else {
        std::cout << rs.size() << " reading" << (rs.size() == 1 ? "" : "s") << "\n";
        for (std::size_t i = 0; i < rs.size(); ++i) {
          std::cout << "\n(" << i + 1 << ")";
          for (const auto& [cl, lin] : rs[i].lin) {
            std::cout << " " << cl << ":";
            for (const auto& l : lin) std::cout << " " << l;
          }
          std::cout << "\n";
          try {
            for (const auto& d : udrs::apply_reading(db, rs[i])) std::cout << "  " << udrs::print_drs(d) << "\n";
          } catch (const udrs::Error& e) {
            if (e.code() != udrs::ErrorCode::UnresolvedPronoun) throw;
            std::cout << "  (a pronoun is still unresolved)\n";
          }
        }
      }
      return kOk;
    }
    if (*entail_cmd) {
      auto db = udrs::parse_udrs(slurp(db_file));
      auto gdb = udrs::parse_udrs(slurp(goal_file));
      udrs::Udrs goal;
      if (gdb.goal) goal = *gdb.goal;
      else if (!gdb.sentences.empty()) goal = gdb.sentences.back();
      else throw udrs::Error(udrs::ErrorCode::InvalidArgument, goal_file + " holds no UDRS");
      db.lexicon.insert(db.lexicon.end(), gdb.lexicon.begin(), gdb.lexicon.end());
      udrs::UdrsDatabase whole = db;
      whole.goal = goal;
      if (!report_violations(whole)) return kInvalid;
      auto rep = udrs::entails(db, goal, cfg.bound, opt);
      std::cout << udrs::format_report(rep);
      return rep.holds ? kOk : kNegative;
    }
    if (*check_cmd) {
      auto d = udrs::parse_drs(slurp(drs_file));
      auto m = udrs::parse_model(slurp(model_file));
      bool v = udrs::verify_drs(m, d, {}, opt);
      std::cout << (v ? "true" : "false") << "\n";
      return v ? kOk : kNegative;
    }
    if (*cons_cmd) {
      auto d = udrs::parse_drs(slurp(drs_file));
      auto c = udrs::check_consistency(d, cfg.bound);
      std::cout << udrs::format_consistency(c);
      return std::holds_alternative<udrs::ConsistentWitness>(c) ? kOk : kNegative;
    }
    if (*tr_cmd) {
      auto db = udrs::parse_udrs(slurp(file));
      if (!report_violations(db)) return kInvalid;
      auto out = transform(db, op, op_args);
      std::cout << udrs::print_udrs(out);
      return kOk;
    }
  } catch (const udrs::SyntaxError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const udrs::Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case udrs::ErrorCode::ParseError:
      case udrs::ErrorCode::DuplicateLabel:
      case udrs::ErrorCode::UnresolvedLabel:
      case udrs::ErrorCode::InvalidArgument:
      case udrs::ErrorCode::UnknownLabel:
        return kUsage;
      default:
        return kInvalid;
    }
  }
  return kUsage;
}
