#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qtt/sweep.hpp"

namespace qtt {

/// Shortest text form of `value` carrying 17 significant digits, enough
/// to reproduce the double bit-exactly on parse. Locale independent;
/// infinities serialize as "inf"/"-inf", NaN as "nan".
std::string format_double(double value);

/// CSV table of sweep records: fixed header
///   axis_value,E,V0,V1,a,k,xi,mu,T,R,absorption,phi_unwrapped,
///   tau_analytic,tau_numeric,tau_asy,v_limit,flags
/// one row per record, LF line endings, '.' decimal separator.
void write_csv(std::ostream& out, std::span<const SweepRecord> records);

/// Parses a table produced by write_csv. Throws domain_error on a
/// malformed header or row.
std::vector<SweepRecord> read_csv(std::istream& in);

/// JSON array equivalent of the CSV table (same keys). An unbounded
/// limiting speed becomes "v_limit": null plus "v_limit_unbounded": true,
/// since JSON has no infinity literal.
std::string to_json(std::span<const SweepRecord> records, int indent = 2);

/// JSON object for a single record.
std::string to_json(const SweepRecord& record, int indent = 2);

/// JSON report of a width-saturation analysis.
std::string to_json(const HartmanReport& report, int indent = 2);

} // namespace qtt
