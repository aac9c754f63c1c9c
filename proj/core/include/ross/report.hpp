#pragma once

// Verification reports: named checks with both sides, a signed margin and the
// tolerance it was judged against, serialized as self-contained JSON.

#include <string>
#include <vector>

#include <json.hpp>

namespace ross {

using Json = nlohmann::ordered_json;

enum class Relation {
  leq,    // lhs <= rhs, margin = rhs - lhs
  geq,    // lhs >= rhs, margin = lhs - rhs
  equal,  // lhs == rhs, margin = lhs - rhs, judged by |margin|
};

enum class Status { pass, fail, inconclusive };

std::string to_string(Status status);
std::string to_string(Relation relation);

struct CheckInputs {
  std::string space;
  std::string domain_hash;
  double h = 0.0;
  std::vector<std::string> solver_tags;
};

struct Check {
  std::string id;
  std::string claim;  // human-readable statement
  Relation relation = Relation::leq;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  bool relative = false;  // margin divided by |rhs|
  Status status = Status::pass;
  std::string provenance;  // where the eigenvalues came from
  std::string note;
  CheckInputs inputs;

  bool pass() const { return status == Status::pass; }
};

/// Builds a check and judges it: pass iff margin >= -tol (|margin| <= tol for
/// equalities). With `relative`, margin is scaled by 1/|rhs|.
Check make_check(std::string id, std::string claim, Relation relation, double lhs, double rhs, double tol,
                 bool relative);

/// Same judgement with a caller-computed margin.
Check make_check_with_margin(std::string id, std::string claim, Relation relation, double lhs, double rhs,
                             double margin, double tol);

struct Summary {
  int passed = 0;
  int failed = 0;
  int inconclusive = 0;
};

struct Report {
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  Json config = Json::object();
  Json details = Json::object();  // centers, spectra and other run facts
  std::string generated_at;

  Summary summary() const;
  std::string config_hash() const;
  void append(const Report& other);
  const Check* find(const std::string& id) const;

  Json to_json() const;
  /// JSON without the timestamp, for byte comparisons.
  std::string canonical_dump() const;
  static Report from_json(const Json& json);
};

/// ISO-8601 UTC timestamp of now.
std::string utc_timestamp();

Json check_to_json(const Check& check);
Check check_from_json(const Json& json);

}  // namespace ross
