#pragma once

// JSON encodings for systems, certificates and reports.
//
// Set systems use the fixed interchange shape
//   {"ground": {"size": N, "unbounded": bool},
//    "members": [{"kind": "finite"|"cofinite", "support": [ints]}, ...],
//    "closed": bool}
// and parsing recomputes the closure flag, rejecting files whose flag lies.
//
// Every other payload is an envelope with a "kind" discriminator and carries
// enough context (spread, colouring, thresholds, or an embedded built-in
// system description) that verify_payload can re-run the matching verifier
// from the raw data alone, trusting none of the cached tables.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ucs/breadth.hpp"
#include "ucs/classify.hpp"
#include "ucs/core.hpp"
#include "ucs/oracle.hpp"
#include "ucs/ramsey.hpp"
#include "ucs/spread.hpp"
#include "ucs/system.hpp"

namespace ucs {

using Json = nlohmann::json;

// --- elementary shapes ------------------------------------------------------

inline Json ground_to_json(const GroundWindow& g) {
  return Json{{"size", g.size}, {"unbounded", g.unbounded}};
}

inline GroundWindow ground_from_json(const Json& j) {
  GroundWindow g{j.at("size").get<Pos>(), j.at("unbounded").get<bool>()};
  if (g.size < 0) throw std::invalid_argument("ground size must be nonnegative");
  return g;
}

inline Json member_to_json(const Member& m) {
  return Json{{"kind", is_finite(m) ? "finite" : "cofinite"}, {"support", m.support}};
}

inline Member member_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  std::vector<Pos> support = j.at("support").get<std::vector<Pos>>();
  if (kind == "finite") return finite_member(std::move(support));
  if (kind == "cofinite") return cofinite_member(std::move(support));
  throw std::invalid_argument("member kind must be finite or cofinite");
}

inline Json members_to_json(const std::vector<Member>& ms) {
  Json arr = Json::array();
  for (const Member& m : ms) arr.push_back(member_to_json(m));
  return arr;
}

inline std::vector<Member> members_from_json(const Json& j) {
  std::vector<Member> out;
  for (const Json& item : j) out.push_back(member_from_json(item));
  return out;
}

inline Json system_to_json(const SetSystem& s) {
  return Json{{"ground", ground_to_json(s.ground)},
              {"members", members_to_json(s.members)},
              {"closed", s.closed}};
}

// Members are re-validated against the ground and re-sorted canonically; the
// closure flag is recomputed and must match when present.
inline SetSystem system_from_json(const Json& j) {
  SetSystem s = make_system(ground_from_json(j.at("ground")), members_from_json(j.at("members")));
  if (j.contains("closed") && j.at("closed").get<bool>() != s.closed)
    throw std::invalid_argument("closed flag contradicts the member list");
  return s;
}

inline Json spread_to_json(const Spread& e) { return Json{{"blocks", e.blocks}}; }

inline Spread spread_from_json(const Json& j) {
  return make_spread(j.at("blocks").get<std::vector<std::vector<Pos>>>());
}

inline Json colouring_to_json(const Colouring& c) { return Json{{"classes", c.classes}}; }

inline Colouring colouring_from_json(const Json& j) {
  return Colouring{j.at("classes").get<std::vector<std::vector<Pos>>>()};
}

inline Json stats_to_json(const SearchStats& st) {
  return Json{{"nodes", st.nodes},
              {"enumerated", st.enumerated},
              {"budget_hit", st.budget_hit},
              {"exhaustive", st.exhaustive}};
}

inline const char* outcome_to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::found: return "found";
    case SearchOutcome::absent: return "absent";
    case SearchOutcome::inconclusive: return "inconclusive";
  }
  return "?";
}

inline std::optional<CanonicalType> type_from_string(const std::string& s) {
  if (s == "max") return CanonicalType::max;
  if (s == "min") return CanonicalType::min;
  if (s == "ort") return CanonicalType::ort;
  return std::nullopt;
}

// --- built-in system descriptions -------------------------------------------

inline Json builtin_to_json(const BuiltinSpec& spec) {
  return Json{{"family", spec.family},     {"window", spec.window},
              {"levels", spec.levels},     {"profile", spec.profile},
              {"blocks", spec.blocks},     {"nat_horizon", spec.nat_horizon}};
}

inline BuiltinSpec builtin_from_json(const Json& j) {
  BuiltinSpec spec;
  spec.family = j.at("family").get<std::string>();
  if (j.contains("window")) spec.window = j.at("window").get<Pos>();
  if (j.contains("levels")) spec.levels = j.at("levels").get<std::size_t>();
  if (j.contains("profile")) spec.profile = j.at("profile").get<std::string>();
  if (j.contains("blocks")) spec.blocks = j.at("blocks").get<std::vector<std::vector<Pos>>>();
  if (j.contains("nat_horizon")) spec.nat_horizon = j.at("nat_horizon").get<Pos>();
  return spec;
}

// --- certificate envelopes --------------------------------------------------

inline Json witness_certificate_to_json(const GroundWindow& g, const std::vector<Member>& family,
                                        const Witness& w) {
  return Json{{"kind", "witness_certificate"},
              {"ground", ground_to_json(g)},
              {"family", members_to_json(family)},
              {"witness", w.points}};
}

inline Json type_certificate_to_json(const TypeCertificate& cert,
                                     const std::optional<BuiltinSpec>& context = {}) {
  Json reals = Json::array();
  for (const Realization& r : cert.realizations)
    reals.push_back(Json{{"level", r.level}, {"inner", r.inner}, {"member", member_to_json(r.member)}});
  Json j{{"kind", "type_certificate"},
         {"type", to_string(cert.type)},
         {"spread", spread_to_json(cert.spread)},
         {"realizations", std::move(reals)}};
  if (context) j["context"] = builtin_to_json(*context);
  return j;
}

inline TypeCertificate type_certificate_from_json(const Json& j) {
  TypeCertificate cert;
  std::optional<CanonicalType> t = type_from_string(j.at("type").get<std::string>());
  if (!t) throw std::invalid_argument("certificate type must be max, min or ort");
  cert.type = *t;
  cert.spread = spread_from_json(j.at("spread"));
  for (const Json& r : j.at("realizations"))
    cert.realizations.push_back(Realization{r.at("level").get<std::size_t>(),
                                            r.at("inner").get<std::vector<Pos>>(),
                                            member_from_json(r.at("member"))});
  return cert;
}

inline Json shatter_certificate_to_json(const ShatterCertificate& cert) {
  return Json{{"kind", "shatter_certificate"},
              {"members", members_to_json(cert.members)},
              {"spread", spread_to_json(cert.spread)},
              {"threshold", cert.threshold},
              {"onset", cert.onset},
              {"table", cert.table}};
}

inline ShatterCertificate shatter_certificate_from_json(const Json& j) {
  ShatterCertificate cert;
  cert.members = members_from_json(j.at("members"));
  cert.spread = spread_from_json(j.at("spread"));
  cert.threshold = j.at("threshold").get<std::size_t>();
  cert.onset = j.at("onset").get<std::size_t>();
  cert.table = j.at("table").get<std::vector<std::vector<std::size_t>>>();
  return cert;
}

// A decisive report travels with the spread its table was computed on.
inline Json decisive_report_to_json(const DecisiveReport& rep, const Spread& e) {
  Json table = Json::array();
  for (const DecisiveBound& row : rep.table)
    table.push_back(Json{{"member", member_to_json(row.member)},
                         {"bound", row.bound},
                         {"level", row.level}});
  Json j{{"kind", "decisive_report"},
         {"colouring", colouring_to_json(rep.colouring)},
         {"decisive_class", rep.decisive_class},
         {"spread", spread_to_json(e)},
         {"table", std::move(table)},
         {"horizon", rep.horizon},
         {"sample", rep.sample},
         {"max_bound", rep.max_bound}};
  if (rep.counterexample) j["counterexample"] = member_to_json(*rep.counterexample);
  return j;
}

inline std::pair<DecisiveReport, Spread> decisive_report_from_json(const Json& j) {
  DecisiveReport rep;
  rep.colouring = colouring_from_json(j.at("colouring"));
  rep.decisive_class = j.at("decisive_class").get<std::size_t>();
  Spread e = spread_from_json(j.at("spread"));
  for (const Json& row : j.at("table"))
    rep.table.push_back(DecisiveBound{member_from_json(row.at("member")),
                                      row.at("bound").get<std::size_t>(),
                                      row.at("level").get<std::size_t>()});
  rep.horizon = j.at("horizon").get<std::size_t>();
  rep.sample = j.at("sample").get<std::string>();
  rep.max_bound = j.at("max_bound").get<std::size_t>();
  if (j.contains("counterexample")) rep.counterexample = member_from_json(j.at("counterexample"));
  return {std::move(rep), std::move(e)};
}

inline Json halving_trace_to_json(const HalvingTrace& tr, const Colouring& c, const Spread& e,
                                  std::size_t threshold) {
  return Json{{"kind", "halving_trace"},
              {"y", member_to_json(tr.y)},
              {"levels", tr.levels},
              {"inside", tr.inside},
              {"outside", tr.outside},
              {"colouring", colouring_to_json(c)},
              {"spread", spread_to_json(e)},
              {"threshold", threshold}};
}

inline Json dichotomy_to_json(const DichotomyResult& d, const Spread& base) {
  Json j{{"kind", "dichotomy"},
         {"outcome", d.kind == DichotomyKind::shattered  ? "shattered"
                     : d.kind == DichotomyKind::decisive ? "decisive"
                                                         : "inconclusive"},
         {"members", members_to_json(d.members)},
         {"index_sets", d.index_sets},
         {"diagonal", d.diagonal},
         {"base_spread", spread_to_json(base)},
         {"stats", stats_to_json(d.stats)}};
  if (d.kind == DichotomyKind::shattered) j["certificate"] = shatter_certificate_to_json(d.shatter.certificate);
  if (d.kind == DichotomyKind::decisive) j["report"] = decisive_report_to_json(d.report, d.refined);
  return j;
}

inline Json realization_to_json(const RealizeResult& r, const ShatterCertificate& cert) {
  Json j{{"kind", "realization"},
         {"ok", r.ok},
         {"certificate", shatter_certificate_to_json(cert)},
         {"listing", members_to_json(r.listing)},
         {"adjoined", r.adjoined},
         {"points", r.points},
         {"block_level", r.block_level},
         {"table", r.table}};
  if (!r.ok) j["error"] = r.error;
  return j;
}

// --- verification from raw data ---------------------------------------------

struct VerifyReport {
  bool ok = false;
  std::string kind;
  std::string reason;
};

inline VerifyReport verify_payload(const Json& payload) {
  VerifyReport out;
  // A whole run report may be passed; the payload inside is what certifies.
  const Json& j = payload.contains("payload") && payload.at("payload").is_object()
                      ? payload.at("payload")
                      : payload;
  out.kind = j.contains("kind") ? j.at("kind").get<std::string>() : std::string("system");
  try {
    if (out.kind == "system") {
      system_from_json(j); // throws on any malformation
      out.ok = true;
      out.reason = "members validate against the ground; closure flag recomputed";
    } else if (out.kind == "witness_certificate") {
      GroundWindow g = ground_from_json(j.at("ground"));
      std::vector<Member> family = members_from_json(j.at("family"));
      Witness w{j.at("witness").get<std::vector<Pos>>()};
      for (Pos p : w.points)
        if (p < 0 || (!g.unbounded && p >= g.size)) {
          out.reason = "witness point outside the ground window";
          return out;
        }
      for (const Member& m : family) validate_member(m, g);
      out.ok = verify_witness(family, w);
      if (!out.ok) out.reason = "some witness point is not private to its member";
    } else if (out.kind == "type_certificate") {
      if (!j.contains("context")) {
        out.reason = "certificate lacks an embedded system context";
        return out;
      }
      OracleRef o = make_builtin(builtin_from_json(j.at("context")));
      CertificateCheck chk = verify_certificate(*o, type_certificate_from_json(j));
      out.ok = chk.valid;
      if (!out.ok) out.reason = chk.failure;
    } else if (out.kind == "shatter_certificate") {
      out.ok = verify_shatter(shatter_certificate_from_json(j));
      if (!out.ok) out.reason = "pattern table does not match a recomputation";
    } else if (out.kind == "decisive_report") {
      auto [rep, e] = decisive_report_from_json(j);
      std::vector<Member> sample;
      for (const DecisiveBound& row : rep.table) sample.push_back(row.member);
      DecisiveReport redo = decisive_check(rep.colouring, rep.decisive_class, sample, e, rep.horizon);
      out.ok = redo.table.size() == rep.table.size() && redo.max_bound == rep.max_bound;
      for (std::size_t i = 0; out.ok && i < rep.table.size(); ++i)
        out.ok = redo.table[i].bound == rep.table[i].bound &&
                 redo.table[i].level == rep.table[i].level;
      if (!out.ok) out.reason = "bound table does not match a recomputation";
    } else if (out.kind == "halving_trace") {
      HalvingTrace tr;
      tr.y = member_from_json(j.at("y"));
      tr.levels = j.at("levels").get<std::vector<std::size_t>>();
      tr.inside = j.at("inside").get<std::vector<std::vector<std::size_t>>>();
      tr.outside = j.at("outside").get<std::vector<std::vector<std::size_t>>>();
      out.ok = verify_halving(tr, colouring_from_json(j.at("colouring")),
                              spread_from_json(j.at("spread")),
                              j.at("threshold").get<std::size_t>());
      if (!out.ok) out.reason = "growth tables do not match a recomputation at the threshold";
    } else if (out.kind == "dichotomy") {
      const std::string oc = j.at("outcome").get<std::string>();
      if (oc == "shattered") return verify_payload(j.at("certificate"));
      if (oc == "decisive") return verify_payload(j.at("report"));
      out.reason = "inconclusive searches carry nothing to verify";
    } else if (out.kind == "realization") {
      ShatterCertificate cert = shatter_certificate_from_json(j.at("certificate"));
      if (!verify_shatter(cert)) {
        out.reason = "embedded shattering certificate fails recomputation";
        return out;
      }
      std::vector<Member> listing = members_from_json(j.at("listing"));
      std::vector<Pos> points = j.at("points").get<std::vector<Pos>>();
      std::size_t level = j.at("block_level").get<std::size_t>();
      if (level < cert.onset || level > cert.spread.levels()) {
        out.reason = "points claim a level outside the certified range";
        return out;
      }
      if (listing.size() > cert.members.size()) {
        out.reason = "listing longer than the certificate depth";
        return out;
      }
      for (std::size_t a = 0; a < points.size(); ++a) {
        if (!detail::vec_contains(cert.spread.blocks[level - 1], points[a])) {
          out.reason = "point falls outside the claimed block";
          return out;
        }
        for (std::size_t b = a + 1; b < points.size(); ++b)
          if (points[a] == points[b]) {
            out.reason = "points collide";
            return out;
          }
      }
      for (Pos e = 0; e < static_cast<Pos>(points.size()); ++e)
        for (std::size_t i = 0; i < listing.size(); ++i)
          if (member_contains(cert.members[i], points[static_cast<std::size_t>(e)]) !=
              member_contains(listing[i], e)) {
            out.reason = "membership table does not match the listing";
            return out;
          }
      out.ok = true;
    } else {
      out.reason = "unrecognized payload kind";
    }
  } catch (const std::exception& ex) {
    out.ok = false;
    out.reason = ex.what();
  }
  return out;
}

// --- run reports ------------------------------------------------------------

struct RunReport {
  std::string command;
  Json parameters = Json::object();
  std::string outcome;
  Json payload = Json::object();
  SearchStats stats;
  double wall_ms = 0.0;
};

inline Json run_report_to_json(const RunReport& r) {
  return Json{{"command", r.command},   {"parameters", r.parameters},
              {"outcome", r.outcome},   {"payload", r.payload},
              {"stats", stats_to_json(r.stats)}, {"wall_ms", r.wall_ms}};
}

} // namespace ucs
