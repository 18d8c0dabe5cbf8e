// File formats: channel JSON, site CSV, assignment CSV, capacity report JSON.
#pragma once

#include "qbloch/capacity.hpp"
#include "qbloch/channels.hpp"
#include "qbloch/voronoi.hpp"

#include <istream>
#include <stdexcept>
#include <string>

namespace qbloch {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Doubles are written with 12 significant digits.
std::string format_number(double x);

/// {"matrix": [[...],[...],[...]], "offset": [b0,b1,b2], "label": "..."}.
/// Throws FormatError on malformed JSON, InvalidChannel on a bad image.
AffineChannel parse_channel_json(const std::string& text);
std::string channel_to_json(const AffineChannel& channel);

/// Lines "x,y,z"; an optional non-numeric header line and blank lines are
/// skipped. Throws FormatError, DomainError (outside the ball) or SiteError.
SiteSet parse_sites_csv(std::istream& in);

/// "qx,qy,qz,site,margin" rows after a header; the margin column is omitted
/// when `with_margin` is false.
std::string assignment_to_csv(const DiagramAssignment& a, bool with_margin = true);

/// {label, n_samples, capacity_nats, capacity_bits, center, support, solver_gap}.
std::string report_to_json(const CapacityReport& report);

}  // namespace qbloch
