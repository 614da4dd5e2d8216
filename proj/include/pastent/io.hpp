#pragma once

#include <iosfwd>
#include <string>

#include "pastent/characterization.hpp"
#include "pastent/estimation.hpp"
#include "pastent/measures.hpp"

namespace pastent {

/// Shortest text that round-trips the double, up to 17 significant digits.
std::string format_full(double v);

// Curve CSV: header "t,value", one row per grid point.
void write_curve_csv(std::ostream& out, const MeasureCurve& curve);
MeasureCurve read_curve_csv(std::istream& in, MeasureKind kind);

// Reconstruction CSV: header "t,phi,cdf".
void write_reconstruction_csv(std::ostream& out,
                              const ReconstructionResult& result);

// Sample CSV: header "x", one value per row.
void write_sample_csv(std::ostream& out, const Sample& sample);
Sample read_sample_csv(std::istream& in);

}  // namespace pastent
