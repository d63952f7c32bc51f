#pragma once

// Command-line front end.  Every subcommand prints one RunReport (JSON) on
// stdout and exits 0 on a definite positive outcome, 1 on a definite
// negative one, 2 when a budget ran out before either, 64 on command-line
// misuse and 65 on malformed or invalid input files.  Certificate payloads
// are re-verified from raw data immediately before printing, so a report
// that reaches stdout has already survived its own verifier.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ucs/abstract.hpp"
#include "ucs/breadth.hpp"
#include "ucs/canonical.hpp"
#include "ucs/classify.hpp"
#include "ucs/json_io.hpp"
#include "ucs/oracle.hpp"
#include "ucs/ramsey.hpp"
#include "ucs/spread.hpp"
#include "ucs/system.hpp"

namespace ucs {
namespace cli {

inline constexpr int exit_found = 0;
inline constexpr int exit_absent = 1;
inline constexpr int exit_inconclusive = 2;
inline constexpr int exit_usage = 64;
inline constexpr int exit_format = 65;

// Raised for content problems in otherwise well-formed input files.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Json read_json(const std::string& path) {
  if (path == "-") return Json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  return Json::parse(in);
}

// Run reports wrap their result in "payload"; commands that read systems or
// certificates accept either the bare object or a whole report, so command
// outputs pipe straight into each other.
inline Json unwrap_payload(Json j) {
  if (j.is_object() && j.contains("payload") && j.at("payload").is_object()) return j.at("payload");
  return j;
}

inline SetSystem read_system(const std::string& path) {
  return system_from_json(unwrap_payload(read_json(path)));
}

// Spread grammar: "linear:K", "square:K", an inline JSON block list
// ("[[0,1],[2,3]]"), or a path to a JSON file holding one.
inline Spread parse_spread(const std::string& spec) {
  if (!spec.empty() && spec.front() == '[')
    return make_spread(Json::parse(spec).get<std::vector<std::vector<Pos>>>());
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string name = spec.substr(0, colon);
    const std::size_t levels = std::stoul(spec.substr(colon + 1));
    if (name == "linear") return spread_standard(levels, profile_linear());
    if (name == "square") return spread_standard(levels, profile_square());
    throw CLI::ValidationError("spread", "profile must be linear or square");
  }
  Json j = read_json(spec);
  if (j.is_object() && j.contains("blocks")) return spread_from_json(j);
  return make_spread(j.get<std::vector<std::vector<Pos>>>());
}

// Shared --family/--window/... knobs that assemble a BuiltinSpec.
struct FamilyArgs {
  std::string family;
  Pos window = 64;
  std::size_t levels = 8;
  std::string profile = "linear";
  std::string blocks; // inline JSON block list
  Pos nat_horizon = 12;

  void attach(CLI::App* cmd, bool required = true) {
    auto* f = cmd->add_option("--family", family, "built-in family tag");
    if (required) f->required();
    cmd->add_option("--window", window, "window for fin/cofin/fincofin/pow");
    cmd->add_option("--levels", levels, "level cap for canonical families");
    cmd->add_option("--profile", profile, "block-size profile: linear or square");
    cmd->add_option("--blocks", blocks, "inline JSON block list for the blocks family");
    cmd->add_option("--nat-horizon", nat_horizon, "tail horizon for the worked examples");
  }

  BuiltinSpec spec() const {
    BuiltinSpec s;
    s.family = family;
    s.window = window;
    s.levels = levels;
    s.profile = profile;
    if (!blocks.empty()) s.blocks = Json::parse(blocks).get<std::vector<std::vector<Pos>>>();
    s.nat_horizon = nat_horizon;
    return s;
  }
};

// Bad family tags or parameters are command-line misuse, not file-format
// problems, so construction failures surface as validation errors (exit 64).
inline OracleRef make_family_oracle(const BuiltinSpec& spec) {
  try {
    return make_builtin(spec);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("family", e.what());
  }
}

// Certificate payloads must survive their own verifier before printing.
inline void assert_payload_valid(const Json& payload) {
  VerifyReport vr = verify_payload(payload);
  if (!vr.ok)
    throw std::logic_error("internal error: emitted payload fails verification: " + vr.reason);
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"union-closed set systems: breadth, pattern detection, splitting dichotomies"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed,
                 "echoed into reports; all searches use a fixed canonical order");

  // gen ----------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "emit a generated system as JSON");
  gen->require_subcommand(1);
  auto* gen_free = gen->add_subcommand("free", "power set of n generators, minus nothing");
  std::size_t free_n = 3;
  gen_free->add_option("n", free_n, "generator count")->required();
  auto* gen_canonical = gen->add_subcommand("canonical", "canonical pattern prefix");
  std::string canon_type;
  std::size_t canon_levels = 3;
  std::string canon_profile = "linear";
  gen_canonical->add_option("type", canon_type, "max, min or ort")->required();
  gen_canonical->add_option("--levels", canon_levels, "level cap");
  gen_canonical->add_option("--profile", canon_profile, "linear or square");
  auto* gen_cayley = gen->add_subcommand("cayley", "embed a multiplication table");
  std::string cayley_table;
  gen_cayley->add_option("--table", cayley_table, "JSON n x n product table")->required();

  // breadth ------------------------------------------------------------------
  auto* breadth = app.add_subcommand("breadth", "largest incompressible family size");
  std::string breadth_file = "-";
  std::uint64_t breadth_budget = 1'000'000;
  breadth->add_option("file", breadth_file, "system JSON ('-' for stdin)");
  breadth->add_option("--budget", breadth_budget, "search-node budget");

  // witness ------------------------------------------------------------------
  auto* witness = app.add_subcommand("witness", "private points for the whole member list");
  std::string witness_file = "-";
  witness->add_option("file", witness_file, "system JSON ('-' for stdin)");

  // classify -----------------------------------------------------------------
  auto* classify = app.add_subcommand("classify", "detect a canonical pattern");
  FamilyArgs classify_fam;
  classify_fam.attach(classify);
  std::string classify_type = "any";
  std::size_t classify_depth = 3;
  std::uint64_t classify_budget = 1'000'000;
  classify->add_option("--type", classify_type, "max, min, ort or any");
  classify->add_option("--depth", classify_depth, "levels to certify");
  classify->add_option("--budget", classify_budget, "search-node budget");

  // transfer -----------------------------------------------------------------
  auto* transfer = app.add_subcommand("transfer", "transport a max certificate along a correspondence");
  FamilyArgs transfer_fam;
  transfer_fam.attach(transfer);
  std::string transfer_target_family;
  std::string transfer_target_system;
  std::string transfer_corr;
  std::size_t transfer_depth = 3;
  std::uint64_t transfer_budget = 1'000'000;
  transfer->add_option("--target-family", transfer_target_family, "built-in tag of the image system");
  transfer->add_option("--target-system", transfer_target_system, "explicit system JSON of the image");
  transfer->add_option("--correspondence", transfer_corr, "JSON {ground, pairs:[{from,to}]}")->required();
  transfer->add_option("--depth", transfer_depth, "certificate depth to detect first");
  transfer->add_option("--budget", transfer_budget, "search-node budget");

  // snapshot -----------------------------------------------------------------
  auto* snap = app.add_subcommand("snapshot", "windowed finite shadow of an enumeration prefix");
  FamilyArgs snap_fam;
  snap_fam.attach(snap);
  Pos snap_window = 16;
  std::size_t snap_count = 64;
  snap->add_option("--snap-window", snap_window, "trace window [0, N)");
  snap->add_option("--count", snap_count, "members to pull");

  // dichotomy ----------------------------------------------------------------
  auto* dich = app.add_subcommand("dichotomy", "shattering family or decisive colouring");
  FamilyArgs dich_fam;
  dich_fam.attach(dich);
  std::string dich_spread;
  std::size_t dich_depth = 2;
  std::size_t dich_threshold = 1;
  std::uint64_t dich_budget = 1'000'000;
  std::size_t dich_max_members = 128;
  dich->add_option("--spread", dich_spread, "linear:K, square:K, inline JSON or file")->required();
  dich->add_option("--depth", dich_depth, "rounds / family size");
  dich->add_option("--threshold", dich_threshold, "final per-pattern margin");
  dich->add_option("--budget", dich_budget, "enumeration budget");
  dich->add_option("--max-members", dich_max_members, "prefix scanned per class round");

  // shatter ------------------------------------------------------------------
  auto* shatter = app.add_subcommand("shatter", "check a member family's pattern table");
  std::string shatter_members;
  std::string shatter_spread;
  std::size_t shatter_threshold = 1;
  std::size_t shatter_onset = 1;
  shatter->add_option("--members", shatter_members, "system JSON or member array")->required();
  shatter->add_option("--spread", shatter_spread, "linear:K, square:K, inline JSON or file")->required();
  shatter->add_option("--threshold", shatter_threshold, "per-pattern margin");
  shatter->add_option("--onset", shatter_onset, "first certified level");

  // realize ------------------------------------------------------------------
  auto* realize = app.add_subcommand("realize", "embed a finite target into certified atoms");
  std::string realize_cert;
  std::string realize_target;
  realize->add_option("--certificate", realize_cert, "shatter certificate JSON")->required();
  realize->add_option("--target", realize_target, "target system JSON")->required();

  // verify -------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "re-run the verifier for a stored payload");
  std::string verify_file = "-";
  verify->add_option("file", verify_file, "payload or run-report JSON ('-' for stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  RunReport report;
  int code = exit_found;
  const auto t0 = std::chrono::steady_clock::now();
  if (seed) report.parameters["seed"] = *seed;

  try {
    if (gen_free->parsed() || gen_canonical->parsed() || gen_cayley->parsed()) {
      report.command = "gen";
      SetSystem s;
      if (gen_free->parsed()) {
        report.parameters["shape"] = "free";
        report.parameters["n"] = free_n;
        s = free_semilattice(free_n);
      } else if (gen_canonical->parsed()) {
        report.parameters["shape"] = "canonical";
        report.parameters["type"] = canon_type;
        report.parameters["levels"] = canon_levels;
        report.parameters["profile"] = canon_profile;
        if (!type_from_string(canon_type))
          throw CLI::ValidationError("type", "must be max, min or ort");
        BuiltinSpec spec;
        spec.family = "t" + canon_type;
        spec.levels = canon_levels;
        spec.profile = canon_profile;
        OracleRef o = make_family_oracle(spec);
        std::vector<Member> ms;
        for (std::size_t i = 0;; ++i) {
          std::optional<Member> m = o->enumerate(i);
          if (!m) break;
          ms.push_back(std::move(*m));
        }
        s = make_system(o->ground(), std::move(ms));
      } else {
        report.parameters["shape"] = "cayley";
        Json tj = read_json(cayley_table);
        auto rows = tj.get<std::vector<std::vector<std::size_t>>>();
        std::vector<std::size_t> flat;
        for (const auto& row : rows) {
          if (row.size() != rows.size()) throw FormatError("product table must be square");
          flat.insert(flat.end(), row.begin(), row.end());
        }
        s = cayley_embed(make_semilattice(rows.size(), std::move(flat))).system;
      }
      report.outcome = "generated";
      report.payload = system_to_json(s);
      assert_payload_valid(report.payload);
    } else if (breadth->parsed()) {
      report.command = "breadth";
      report.parameters["budget"] = breadth_budget;
      SetSystem s = read_system(breadth_file);
      Budget budget{breadth_budget, 0};
      BreadthResult r = breadth_exact(s, budget);
      report.stats = r.stats;
      report.outcome = r.stats.exhaustive ? "found" : "inconclusive";
      report.payload = Json{{"breadth", r.breadth},
                            {"family", r.family},
                            {"exact", r.stats.exhaustive}};
      code = r.stats.exhaustive ? exit_found : exit_inconclusive;
    } else if (witness->parsed()) {
      report.command = "witness";
      SetSystem s = read_system(witness_file);
      WitnessResult w = find_witness(s.members, s.ground);
      if (w.outcome == WitnessOutcome::found) {
        report.outcome = "found";
        report.payload = witness_certificate_to_json(s.ground, s.members, w.witness);
        assert_payload_valid(report.payload);
        code = exit_found;
      } else if (w.outcome == WitnessOutcome::compressible) {
        report.outcome = "compressible";
        report.payload = Json{{"dominated_index", w.dominated_index},
                              {"dominated_member", member_to_json(s.members[w.dominated_index])}};
        code = exit_absent;
      } else {
        report.outcome = "inconclusive";
        report.payload = Json{{"reason", "window too small to exhibit private points"}};
        code = exit_inconclusive;
      }
    } else if (classify->parsed()) {
      report.command = "classify";
      report.parameters["family"] = classify_fam.family;
      report.parameters["type"] = classify_type;
      report.parameters["depth"] = classify_depth;
      report.parameters["budget"] = classify_budget;
      BuiltinSpec spec = classify_fam.spec();
      OracleRef o = make_family_oracle(spec);
      DetectOptions opt;
      opt.depth = classify_depth;
      Budget budget{classify_budget, 0};
      std::vector<CanonicalType> types;
      if (classify_type == "any")
        types = {CanonicalType::max, CanonicalType::min, CanonicalType::ort};
      else if (auto t = type_from_string(classify_type))
        types = {*t};
      else
        throw CLI::ValidationError("type", "must be max, min, ort or any");
      Json results = Json::array();
      bool any_found = false, all_absent = true;
      for (CanonicalType t : types) {
        DetectResult r = detect_type(o, t, budget, opt);
        report.stats.nodes += r.stats.nodes;
        report.stats.budget_hit = report.stats.budget_hit || r.stats.budget_hit;
        Json one{{"type", to_string(t)},
                 {"outcome", outcome_to_string(r.outcome)},
                 {"stages_completed", r.stages_completed},
                 {"exhaustive", r.stats.exhaustive},
                 {"stats", stats_to_json(r.stats)}};
        if (r.certificate) {
          Json cert = type_certificate_to_json(*r.certificate, spec);
          assert_payload_valid(cert);
          one["certificate"] = std::move(cert);
        }
        any_found = any_found || r.outcome == SearchOutcome::found;
        all_absent = all_absent && r.outcome == SearchOutcome::absent;
        results.push_back(std::move(one));
      }
      report.payload = types.size() == 1 ? results[0] : Json{{"kind", "classification"}, {"results", results}};
      report.outcome = any_found ? "found" : all_absent ? "absent" : "inconclusive";
      code = any_found ? exit_found : all_absent ? exit_absent : exit_inconclusive;
    } else if (transfer->parsed()) {
      report.command = "transfer";
      report.parameters["family"] = transfer_fam.family;
      report.parameters["depth"] = transfer_depth;
      if (transfer_target_family.empty() == transfer_target_system.empty())
        throw CLI::ValidationError("transfer", "need exactly one of --target-family, --target-system");
      BuiltinSpec spec = transfer_fam.spec();
      OracleRef source = make_family_oracle(spec);
      Budget budget{transfer_budget, 0};
      DetectOptions opt;
      opt.depth = transfer_depth;
      DetectResult d = detect_type(source, CanonicalType::max, budget, opt);
      report.stats = d.stats;
      if (d.outcome != SearchOutcome::found) {
        report.outcome = outcome_to_string(d.outcome);
        report.payload = Json{{"reason", "no max certificate found in the source presentation"}};
        code = d.outcome == SearchOutcome::absent ? exit_absent : exit_inconclusive;
      } else {
        Json cj = read_json(transfer_corr);
        GroundWindow tg = ground_from_json(cj.at("ground"));
        std::map<Member, Member, MemberLess> phi;
        for (const Json& pair : cj.at("pairs"))
          phi[member_from_json(pair.at("from"))] = member_from_json(pair.at("to"));
        TransferResult tr = transfer_spread(*d.certificate, phi, tg);
        if (!tr.ok) {
          report.outcome = "failed";
          report.payload = Json{{"reason", tr.error}};
          code = exit_absent;
        } else {
          OracleRef target;
          if (!transfer_target_family.empty()) {
            BuiltinSpec tspec = spec;
            tspec.family = transfer_target_family;
            target = make_family_oracle(tspec);
          } else {
            target = std::make_shared<ExplicitOracle>(read_system(transfer_target_system));
          }
          CertificateCheck chk = verify_certificate(*target, tr.certificate);
          report.outcome = chk.valid ? "found" : "failed";
          report.payload = Json{{"certificate", type_certificate_to_json(tr.certificate)},
                                {"verified", chk.valid},
                                {"patterns_checked", chk.patterns_checked},
                                {"membership_unknown", chk.membership_unknown}};
          if (!chk.valid) report.payload["reason"] = chk.failure;
          code = chk.valid ? exit_found : exit_absent;
        }
      }
    } else if (snap->parsed()) {
      report.command = "snapshot";
      report.parameters["family"] = snap_fam.family;
      report.parameters["window"] = snap_window;
      report.parameters["count"] = snap_count;
      OracleRef o = make_family_oracle(snap_fam.spec());
      SnapshotResult r = snapshot(*o, snap_window, snap_count);
      report.stats.enumerated = r.enumerated;
      report.stats.exhaustive = r.enumeration_exhausted;
      report.outcome = "generated";
      report.payload = system_to_json(r.system);
      assert_payload_valid(report.payload);
    } else if (dich->parsed()) {
      report.command = "dichotomy";
      report.parameters["family"] = dich_fam.family;
      report.parameters["spread"] = dich_spread;
      report.parameters["depth"] = dich_depth;
      report.parameters["threshold"] = dich_threshold;
      report.parameters["budget"] = dich_budget;
      OracleRef o = make_family_oracle(dich_fam.spec());
      Spread e = parse_spread(dich_spread);
      Budget budget{dich_budget, 0};
      DichotomyResult d = dichotomy_search(o, e, dich_depth, dich_threshold, budget,
                                           {dich_max_members, 2});
      report.stats = d.stats;
      report.payload = dichotomy_to_json(d, e);
      if (d.kind == DichotomyKind::shattered) {
        assert_payload_valid(report.payload);
        report.outcome = "shattered";
        code = exit_found;
      } else if (d.kind == DichotomyKind::decisive) {
        assert_payload_valid(report.payload);
        report.outcome = "decisive";
        code = exit_absent;
      } else {
        report.outcome = "inconclusive";
        code = exit_inconclusive;
      }
    } else if (shatter->parsed()) {
      report.command = "shatter";
      report.parameters["threshold"] = shatter_threshold;
      report.parameters["onset"] = shatter_onset;
      Json mj = unwrap_payload(read_json(shatter_members));
      std::vector<Member> ms =
          members_from_json(mj.is_object() && mj.contains("members") ? mj.at("members") : mj);
      Spread g = parse_spread(shatter_spread);
      ShatterResult r = shatter_check(ms, g, shatter_threshold, shatter_onset);
      if (r.ok) {
        report.outcome = "found";
        report.payload = shatter_certificate_to_json(r.certificate);
        assert_payload_valid(report.payload);
        code = exit_found;
      } else {
        report.outcome = "failed";
        report.payload = Json{{"failing_pattern", r.failing_pattern},
                              {"failing_level", r.failing_level},
                              {"table", r.certificate.table}};
        code = exit_absent;
      }
    } else if (realize->parsed()) {
      report.command = "realize";
      ShatterCertificate cert = shatter_certificate_from_json(unwrap_payload(read_json(realize_cert)));
      SetSystem target = read_system(realize_target);
      RealizeResult r = realize_finite_semilattice(cert, target);
      report.payload = realization_to_json(r, cert);
      if (r.ok) {
        assert_payload_valid(report.payload);
        report.outcome = "found";
        code = exit_found;
      } else {
        report.outcome = "failed";
        code = exit_absent;
      }
    } else if (verify->parsed()) {
      report.command = "verify";
      VerifyReport vr = verify_payload(read_json(verify_file));
      report.outcome = vr.ok ? "valid" : "invalid";
      report.payload = Json{{"ok", vr.ok}, {"payload_kind", vr.kind}, {"reason", vr.reason}};
      if (!vr.ok && vr.reason == "unrecognized payload kind") code = exit_format;
      else code = vr.ok ? exit_found : exit_absent;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return exit_usage;
  } catch (const Json::parse_error& e) {
    report.outcome = "format_error";
    report.payload = Json{{"reason", e.what()}};
    const auto t1 = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::cout << run_report_to_json(report).dump(2) << "\n";
    return exit_format;
  } catch (const FormatError& e) {
    report.outcome = "format_error";
    report.payload = Json{{"reason", e.what()}};
    const auto t1 = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::cout << run_report_to_json(report).dump(2) << "\n";
    return exit_format;
  } catch (const std::invalid_argument& e) {
    report.outcome = "format_error";
    report.payload = Json{{"reason", e.what()}};
    const auto t1 = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::cout << run_report_to_json(report).dump(2) << "\n";
    return exit_format;
  }

  const auto t1 = std::chrono::steady_clock::now();
  report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  std::cout << run_report_to_json(report).dump(2) << "\n";
  return code;
}

} // namespace cli
} // namespace ucs
