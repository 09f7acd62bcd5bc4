// Flat key=value configs and CSV plumbing.
//
// Every run embeds its resolved configuration in the output header, so any
// output file doubles as a config file: the reader strips a leading '#' per
// line, ignores anything without '=', and drops the timestamp key.  Doubles
// are printed with 17 significant digits ('.' decimal, no separators) for a
// lossless round trip.

#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "opuc/tails.hpp"

namespace opuc {

using Config = std::map<std::string, std::string>;

std::string format_double(double value);

// One `key=value` line per entry, sorted by key, each prefixed by line_prefix.
void write_config(std::ostream& out, const Config& config, const std::string& line_prefix = "");

// Flat key=value text (leading '#' per line allowed); also accepts a JSON
// document with a top-level "config" object (any output of this tool).
Config read_config_text(std::istream& in);
Config read_config_file(const std::string& path);

std::string iso8601_now();

// CSV with header center,width,mass; '#' lines skipped.
DiscreteMeasure load_measure_csv(std::istream& in);

}  // namespace opuc
