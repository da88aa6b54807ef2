// Batch front-end for the end-charge library.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "endcharge/errors.hpp"
#include "endcharge/json_io.hpp"
#include "endcharge/pl1d_oracle.hpp"
#include "endcharge/proper_morphism.hpp"
#include "endcharge/section.hpp"
#include "endcharge/transport.hpp"
#include "endcharge/verify.hpp"

namespace {

using endcharge::json_io::Json;
namespace io = endcharge::json_io;

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kInternal = 3;
constexpr int kIo = 4;

struct Flags {
  std::string tree;
  std::string measure;
  std::string word;
  std::string charge;
  std::string morphism;
  std::string star;
  std::string out;
  std::string trace;
  std::string tau;
  std::uint64_t seed = 7;
  std::size_t cases = 100;
  std::size_t depth = 6;
};

// Signals a failed check rather than a malformed input.
struct CheckFailed {
  std::string message;
};

endcharge::TreePtr load_tree(const Flags& f) {
  if (f.tree.empty()) {
    throw endcharge::Error(endcharge::ErrorCode::kParse, "--tree is required");
  }
  return io::read_tree(io::load_file(f.tree));
}

endcharge::MeasureState load_measure(const Flags& f, const endcharge::TreePtr& tree) {
  if (f.measure.empty()) {
    return endcharge::MeasureState::declared(tree);
  }
  return io::read_measure(tree, io::load_file(f.measure));
}

endcharge::MoveWord load_word(const Flags& f, const endcharge::MeasureState& base) {
  if (f.word.empty()) {
    throw endcharge::Error(endcharge::ErrorCode::kParse, "--word is required");
  }
  return io::read_word(base, io::load_file(f.word));
}

endcharge::EndCharge load_charge(const Flags& f, const endcharge::TreePtr& tree) {
  if (f.charge.empty()) {
    throw endcharge::Error(endcharge::ErrorCode::kParse, "--charge is required");
  }
  return io::read_charge(tree, io::load_file(f.charge));
}

void emit(const Flags& f, const Json& j) {
  if (f.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    io::save_file(f.out, j);
  }
}

int cmd_validate(const Flags& f) {
  Json report = Json::object();
  if (!f.star.empty()) {
    const endcharge::RayStar star = io::read_star(io::load_file(f.star));
    report["star"] = Json{{"rays", star.ray_count()}, {"depth", star.max_depth()}};
  }
  if (!f.morphism.empty()) {
    const endcharge::TreeMorphism pi = io::read_morphism(io::load_file(f.morphism));
    report["morphism"] = Json{{"collapsed", pi.collapsed_nodes().size()}};
  }
  if (!f.tree.empty()) {
    const endcharge::TreePtr tree = load_tree(f);
    const endcharge::MeasureState mu = load_measure(f, tree);
    report["tree"] = Json{{"nodes", tree->size()}, {"ends", tree->end_leaves().size()}};
    if (!f.charge.empty()) {
      const endcharge::EndCharge a = load_charge(f, tree);
      if (!endcharge::validate_charge(mu, a)) {
        throw endcharge::Error(endcharge::ErrorCode::kInvalidCharge,
                               "charge must have zero total and vanish on finite tails");
      }
      report["charge"] = "valid";
    }
    if (!f.word.empty()) {
      const endcharge::MoveWord w = load_word(f, mu);
      (void)endcharge::apply_word(w);
      report["word"] = Json{{"moves", w.moves.size()}, {"measure_preserving", endcharge::is_measure_preserving(w)}};
    }
  }
  if (report.empty()) {
    throw endcharge::Error(endcharge::ErrorCode::kParse, "nothing to validate");
  }
  report["valid"] = true;
  std::cout << report.dump(2) << "\n";
  return kOk;
}

int cmd_charge(const Flags& f) {
  const endcharge::TreePtr tree = load_tree(f);
  const endcharge::EndCharge c = endcharge::charge_of_word(load_word(f, load_measure(f, tree)));
  std::cout << io::write_charge_values(c).dump() << "\n";
  if (!f.out.empty()) {
    io::save_file(f.out, io::write_charge(c));
  }
  return kOk;
}

int cmd_section(const Flags& f) {
  const endcharge::TreePtr tree = load_tree(f);
  const endcharge::MeasureState mu = load_measure(f, tree);
  std::vector<endcharge::TransferRecord> trace;
  endcharge::SectionOptions options;
  if (!f.trace.empty()) {
    options.trace = &trace;
  }
  const endcharge::MoveWord w = endcharge::build_section(mu, load_charge(f, tree), std::nullopt, options);
  emit(f, io::write_word(w));
  if (!f.trace.empty()) {
    std::ofstream csv(f.trace);
    if (!csv) {
      throw std::ios_base::failure("cannot write " + f.trace);
    }
    csv << "level,parent,child,amount,parameter\n";
    for (const auto& r : trace) {
      csv << r.level << "," << tree->name(r.parent) << "," << tree->name(r.child) << ","
          << endcharge::format_rational(r.amount) << "," << endcharge::format_rational(r.parameter) << "\n";
    }
  }
  return kOk;
}

int cmd_factorize(const Flags& f) {
  const endcharge::TreePtr tree = load_tree(f);
  const endcharge::Factorization fz = endcharge::factorize(load_word(f, load_measure(f, tree)));
  emit(f, Json{{"charge", io::write_charge_values(fz.charge)}, {"kernel", io::write_word(fz.kernel)}});
  return kOk;
}

int cmd_retract(const Flags& f) {
  const endcharge::TreePtr tree = load_tree(f);
  const endcharge::MoveWord w = load_word(f, load_measure(f, tree));
  emit(f, io::write_word(endcharge::retract(w, endcharge::parse_rational(f.tau))));
  return kOk;
}

int cmd_push(const Flags& f) {
  if (f.morphism.empty()) {
    throw endcharge::Error(endcharge::ErrorCode::kParse, "--morphism is required");
  }
  const endcharge::TreeMorphism pi = io::read_morphism(io::load_file(f.morphism));
  const endcharge::MeasureState mu = load_measure(f, pi.source());
  Json out = Json::object();
  out["measure"] = io::write_measure(endcharge::push_measure(pi, mu));
  if (!f.charge.empty()) {
    out["charge"] = io::write_charge(endcharge::push_charge(pi, load_charge(f, pi.source())));
  }
  if (!f.word.empty()) {
    const endcharge::MoveWord w = load_word(f, mu);
    out["word"] = io::write_word(endcharge::push_word(pi, w));
    if (endcharge::is_measure_preserving(w)) {
      out["diagram_commutes"] = endcharge::check_diagram(pi, w);
    }
  }
  emit(f, out);
  if (out.contains("diagram_commutes") && !out["diagram_commutes"].get<bool>()) {
    throw CheckFailed{"pushforward diagram does not commute"};
  }
  return kOk;
}

int cmd_oracle(const Flags& f) {
  if (f.star.empty()) {
    throw endcharge::Error(endcharge::ErrorCode::kParse, "--star is required");
  }
  const endcharge::RayStar star = io::read_star(io::load_file(f.star));
  const endcharge::MoveWord w = !f.word.empty() ? load_word(f, star.measure())
                                                : endcharge::build_section(star.measure(),
                                                                           load_charge(f, star.tree()));
  const endcharge::PLMap h = endcharge::realize_word(star, w);
  const endcharge::Rational cut = static_cast<long>(star.max_depth());
  const endcharge::EndCharge by_definition = endcharge::charge_from_definition(star, h, cut);
  const endcharge::EndCharge by_flux = endcharge::charge_of_word(w);
  const bool agree = endcharge::compare_oracle(star, w);
  emit(f, Json{{"agree", agree},
               {"charge_by_definition", io::write_charge_values(by_definition)},
               {"charge_by_flux", io::write_charge_values(by_flux)},
               {"map", io::write_plmap(star, h)}});
  if (!agree) {
    throw CheckFailed{"definition-based charge disagrees with the flux charge"};
  }
  return kOk;
}

int cmd_verify(const Flags& f) {
  endcharge::VerifyConfig config;
  config.seed = f.seed;
  config.cases = f.cases;
  config.max_depth = f.depth;
  const endcharge::VerifyReport report = endcharge::run_verify(config);
  std::cout << report.summary();
  std::size_t failures = 0;
  for (const auto& c : report.criteria) {
    failures += c.failures;
  }
  std::cout << "failures: " << failures << "\n";
  return report.all_passed() ? kOk : kInternal;
}

int exit_code_for(endcharge::ErrorCode code) {
  switch (code) {
    case endcharge::ErrorCode::kInfeasibleTransfer:
    case endcharge::ErrorCode::kPreconditionFailed:
    case endcharge::ErrorCode::kBadDecomposition:
      return kInternal;
    default:
      return kValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact end-charge computations on balloon trees"};
  app.require_subcommand(1);
  Flags f;

  auto add_tree = [&](CLI::App* c) { c->add_option("--tree", f.tree, "tree JSON"); };
  auto add_measure = [&](CLI::App* c) { c->add_option("--measure", f.measure, "measure JSON (default: declared)"); };
  auto add_word = [&](CLI::App* c) { c->add_option("--word", f.word, "word JSON"); };
  auto add_charge = [&](CLI::App* c) { c->add_option("--charge", f.charge, "charge JSON"); };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", f.out, "output file (default: stdout)"); };

  CLI::App* validate = app.add_subcommand("validate", "validate scenario files");
  add_tree(validate);
  add_measure(validate);
  add_word(validate);
  add_charge(validate);
  validate->add_option("--morphism", f.morphism, "morphism JSON");
  validate->add_option("--star", f.star, "star JSON");

  CLI::App* charge = app.add_subcommand("charge", "end charge of a measure-preserving word");
  add_tree(charge);
  add_measure(charge);
  add_word(charge);
  add_out(charge);

  CLI::App* section = app.add_subcommand("section", "word realizing a charge");
  add_tree(section);
  add_measure(section);
  add_charge(section);
  add_out(section);
  section->add_option("--trace", f.trace, "CSV of balloon transfers");

  CLI::App* factorize = app.add_subcommand("factorize", "split a word into kernel word and charge");
  add_tree(factorize);
  add_measure(factorize);
  add_word(factorize);
  add_out(factorize);

  CLI::App* retract = app.add_subcommand("retract", "deform a word toward the kernel");
  add_tree(retract);
  add_measure(retract);
  add_word(retract);
  add_out(retract);
  retract->add_option("--tau", f.tau, "parameter in [0, 1]")->required();

  CLI::App* push = app.add_subcommand("push", "push measure, charge and word along a morphism");
  push->add_option("--morphism", f.morphism, "morphism JSON");
  add_measure(push);
  add_word(push);
  add_charge(push);
  add_out(push);

  CLI::App* oracle = app.add_subcommand("oracle", "compare with the piecewise-linear realization on a star");
  oracle->add_option("--star", f.star, "star JSON");
  add_word(oracle);
  add_charge(oracle);
  add_out(oracle);

  CLI::App* verify = app.add_subcommand("verify", "run the randomized invariant suite");
  verify->add_option("--seed", f.seed, "random seed");
  verify->add_option("--cases", f.cases, "cases per criterion");
  verify->add_option("--depth", f.depth, "maximum tree depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*validate) return cmd_validate(f);
    if (*charge) return cmd_charge(f);
    if (*section) return cmd_section(f);
    if (*factorize) return cmd_factorize(f);
    if (*retract) return cmd_retract(f);
    if (*push) return cmd_push(f);
    if (*oracle) return cmd_oracle(f);
    if (*verify) return cmd_verify(f);
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.message << "\n";
    return kInternal;
  } catch (const endcharge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: Parse: " << e.what() << "\n";
    return kValidation;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: IO: " << e.what() << "\n";
    return kIo;
  }
  return kValidation;
}
