#include "ross/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <stdexcept>

#include "ross/hash.hpp"

namespace ross {

std::string to_string(Status status) {
  switch (status) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "fail";
}

std::string to_string(Relation relation) {
  switch (relation) {
    case Relation::leq: return "<=";
    case Relation::geq: return ">=";
    case Relation::equal: return "==";
  }
  return "==";
}

namespace {

Status status_from_string(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "inconclusive") return Status::inconclusive;
  return Status::fail;
}

Relation relation_from_string(const std::string& s) {
  if (s == "<=") return Relation::leq;
  if (s == ">=") return Relation::geq;
  return Relation::equal;
}

// JSON has no NaN/inf; keep them distinguishable as strings.
Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

Check make_check_with_margin(std::string id, std::string claim, Relation relation, double lhs, double rhs,
                             double margin, double tol) {
  Check c;
  c.id = std::move(id);
  c.claim = std::move(claim);
  c.relation = relation;
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = margin;
  c.tol = tol;
  const bool ok = relation == Relation::equal ? std::abs(margin) <= tol : margin >= -tol;
  c.status = ok && std::isfinite(margin) ? Status::pass : Status::fail;
  return c;
}

Check make_check(std::string id, std::string claim, Relation relation, double lhs, double rhs, double tol,
                 bool relative) {
  double margin = relation == Relation::leq ? rhs - lhs : lhs - rhs;
  if (relative) margin /= std::max(std::abs(rhs), std::numeric_limits<double>::min());
  Check c = make_check_with_margin(std::move(id), std::move(claim), relation, lhs, rhs, margin, tol);
  c.relative = relative;
  return c;
}

Summary Report::summary() const {
  Summary s;
  for (const auto& c : checks) {
    if (c.status == Status::pass) ++s.passed;
    if (c.status == Status::fail) ++s.failed;
    if (c.status == Status::inconclusive) ++s.inconclusive;
  }
  return s;
}

std::string Report::config_hash() const { return sha256_hex(config.dump()); }

void Report::append(const Report& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

const Check* Report::find(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

Json check_to_json(const Check& c) {
  Json j;
  j["id"] = c.id;
  j["claim"] = c.claim;
  j["relation"] = to_string(c.relation);
  j["lhs"] = number(c.lhs);
  j["rhs"] = number(c.rhs);
  j["margin"] = number(c.margin);
  j["tol"] = number(c.tol);
  j["relative"] = c.relative;
  j["pass"] = c.pass();
  j["status"] = to_string(c.status);
  j["provenance"] = c.provenance;
  if (!c.note.empty()) j["note"] = c.note;
  j["inputs"] = {{"space", c.inputs.space},
                 {"domain_hash", c.inputs.domain_hash},
                 {"h", number(c.inputs.h)},
                 {"solver_tags", c.inputs.solver_tags}};
  return j;
}

Check check_from_json(const Json& j) {
  Check c;
  c.id = j.at("id").get<std::string>();
  c.claim = j.value("claim", "");
  c.relation = relation_from_string(j.value("relation", "=="));
  c.lhs = number_from(j.at("lhs"));
  c.rhs = number_from(j.at("rhs"));
  c.margin = number_from(j.at("margin"));
  c.tol = number_from(j.at("tol"));
  c.relative = j.value("relative", false);
  c.status = status_from_string(j.value("status", j.at("pass").get<bool>() ? "pass" : "fail"));
  c.provenance = j.value("provenance", "");
  c.note = j.value("note", "");
  const auto& in = j.at("inputs");
  c.inputs.space = in.value("space", "");
  c.inputs.domain_hash = in.value("domain_hash", "");
  c.inputs.h = number_from(in.at("h"));
  c.inputs.solver_tags = in.value("solver_tags", std::vector<std::string>{});
  return c;
}

namespace {

Json body(const Report& r) {
  Json j;
  j["checks"] = Json::array();
  for (const auto& c : r.checks) j["checks"].push_back(check_to_json(c));
  const Summary s = r.summary();
  j["summary"] = {{"passed", s.passed}, {"failed", s.failed}, {"inconclusive", s.inconclusive}};
  j["warnings"] = r.warnings;
  j["details"] = r.details;
  j["config"] = r.config;
  j["config_hash"] = r.config_hash();
  return j;
}

}  // namespace

Json Report::to_json() const {
  Json j = body(*this);
  j["generated_at"] = generated_at;
  return j;
}

std::string Report::canonical_dump() const { return body(*this).dump(2); }

Report Report::from_json(const Json& j) {
  Report r;
  for (const auto& c : j.at("checks")) r.checks.push_back(check_from_json(c));
  r.warnings = j.value("warnings", std::vector<std::string>{});
  r.config = j.value("config", Json::object());
  r.details = j.value("details", Json::object());
  r.generated_at = j.value("generated_at", "");
  if (j.contains("config_hash") && j["config_hash"].get<std::string>() != r.config_hash()) {
    throw std::invalid_argument("report config_hash does not match its embedded config");
  }
  return r;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace ross
