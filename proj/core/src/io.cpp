#include "fivept/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "fivept/errors.hpp"

#include "json.hpp"

namespace fivept {

std::array<Correspondence, 5> parse_correspondence_file(std::istream& in) {
  std::array<Correspondence, 5> out;
  int count = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (count >= 5) {
      throw SolverError(ErrorCode::kMalformedInput,
                        "expected 5 correspondences, found more (line " +
                            std::to_string(line_no) + ")");
    }
    std::istringstream fields(line);
    double v[6];
    for (int k = 0; k < 6; ++k) {
      if (!(fields >> v[k])) {
        throw SolverError(ErrorCode::kMalformedInput,
                          "line " + std::to_string(line_no) +
                              ": expected 6 numeric fields");
      }
      if (!std::isfinite(v[k])) {
        throw SolverError(ErrorCode::kMalformedInput,
                          "line " + std::to_string(line_no) +
                              ": non-finite value");
      }
    }
    std::string rest;
    if (fields >> rest) {
      throw SolverError(ErrorCode::kMalformedInput,
                        "line " + std::to_string(line_no) +
                            ": trailing garbage after 6 fields");
    }
    const Vec3 q1{v[0], v[1], v[2]};
    const Vec3 q2{v[3], v[4], v[5]};
    if (q1.norm() <= 1e-12 || q2.norm() <= 1e-12) {
      throw SolverError(ErrorCode::kMalformedInput,
                        "line " + std::to_string(line_no) +
                            ": (near-)zero bearing vector");
    }
    out[count++] = Correspondence{q1, q2};
  }
  if (count != 5) {
    throw SolverError(ErrorCode::kMalformedInput,
                      "expected 5 correspondences, found " + std::to_string(count));
  }
  return out;
}

std::string format_csv(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

void write_trials_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
  out << "trial,epsilon,rot_err_deg,trans_err_deg,n_candidates,degenerate\n";
  for (const TrialRecord& r : records) {
    out << r.trial << ',' << format_csv(r.epsilon) << ',' << format_csv(r.rot_err_deg)
        << ',' << format_csv(r.trans_err_deg) << ',' << r.n_candidates << ','
        << (r.degenerate ? 1 : 0) << '\n';
  }
}

std::string summary_to_json(const ExperimentSummary& s) {
  nlohmann::json j;
  j["scenario"] = s.scenario;
  j["trials"] = s.trials;
  j["sigma_px"] = s.sigma_px;
  j["median_epsilon"] = s.median_epsilon;
  j["q25_epsilon"] = s.q25_epsilon;
  j["q75_epsilon"] = s.q75_epsilon;
  j["median_rot_err_deg"] = s.median_rot_err_deg;
  j["median_trans_err_deg"] = s.median_trans_err_deg;
  j["degenerate_count"] = s.degenerate_count;
  nlohmann::json bins = nlohmann::json::array();
  for (const HistogramBin& b : s.histogram) {
    bins.push_back({{"bin_lo", b.lo}, {"bin_hi", b.hi}, {"count", b.count}});
  }
  j["histogram"] = std::move(bins);
  return j.dump(2) + "\n";
}

}  // namespace fivept
