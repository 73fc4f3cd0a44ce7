#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "fivept/geometry.hpp"
#include "fivept/synthetic.hpp"

namespace fivept {

/**
 * Parses the five-correspondence text format: five data lines of six
 * whitespace-separated reals x1 y1 z1 x2 y2 z2 (bearings need not be unit
 * length; they are normalized downstream).  Blank lines and lines starting
 * with '#' are skipped.  Throws SolverError kMalformedInput on wrong line
 * count, non-numeric fields, trailing garbage, non-finite values, or
 * (near-)zero vectors.
 */
std::array<Correspondence, 5> parse_correspondence_file(std::istream& in);

/// Formats one double for CSV: scientific, 17 significant digits ("%.16e").
std::string format_csv(double x);

/// Writes the per-trial table with header
/// trial,epsilon,rot_err_deg,trans_err_deg,n_candidates,degenerate.
void write_trials_csv(const std::vector<TrialRecord>& records, std::ostream& out);

/// Serializes the summary as JSON (keys: scenario, trials, sigma_px,
/// median_epsilon, q25_epsilon, q75_epsilon, median_rot_err_deg,
/// median_trans_err_deg, degenerate_count, histogram[{bin_lo, bin_hi,
/// count}]).  Doubles use the shortest round-trip decimal form; non-finite
/// values (all-degenerate runs) serialize as null.
std::string summary_to_json(const ExperimentSummary& summary);

}  // namespace fivept
