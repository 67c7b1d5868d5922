#include "mmf/verify.hpp"

#include <json.hpp>

namespace mmf {

// Field order is part of the output contract: identical inputs must serialize
// to identical bytes, so consumers can diff reports across runs.
std::string reports_to_json(std::span<const TheoremReport> reports) {
  using nlohmann::ordered_json;
  ordered_json arr = ordered_json::array();
  for (const TheoremReport& rep : reports) {
    ordered_json jr;
    jr["theorem"] = rep.theorem;
    jr["region"] = rep.region;
    jr["tolerance"] = rep.tolerance;
    jr["seed"] = rep.seed;
    ordered_json recs = ordered_json::array();
    for (const CheckRecord& r : rep.records) {
      ordered_json o;
      o["item"] = r.item;
      o["v"] = r.v;
      o["q"] = r.q;
      o["t"] = r.t;
      o["lhs"] = r.lhs;
      o["rhs"] = r.rhs;
      o["margin"] = r.margin;
      o["pass"] = r.pass;
      recs.push_back(std::move(o));
    }
    jr["records"] = std::move(recs);
    jr["pass_rate"] = rep.pass_rate;
    arr.push_back(std::move(jr));
  }
  return arr.dump(2) + "\n";
}

}  // namespace mmf
