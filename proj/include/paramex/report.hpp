#pragma once

// Certificate reports.  Every rigor-relevant number is serialized as a
// [lo, hi] pair, never a single float, so a report keeps its guarantees in
// transit.  Reports carry no timestamps; identical inputs give identical
// bytes.

#include <json.hpp>

#include "paramex/continuation.hpp"
#include "paramex/problem.hpp"

namespace paramex {

using OrderedJson = nlohmann::ordered_json;

OrderedJson interval_json(const Interval& a);
Interval interval_from_json(const OrderedJson& j);
OrderedJson box_json(const Box& b);
Box box_from_json(const OrderedJson& j);
OrderedJson real_vector_json(const RealVector& v);
OrderedJson real_matrix_json(const RealMatrix& m);
OrderedJson real_tensor_json(const RealTensor3& t);

OrderedJson fixed_certificate_json(const FixedCertificate& fc);
OrderedJson param_certificate_json(const ParamCertificate& cert, const FixedCertificate& fc);
OrderedJson enclosure_at_s_json(const EnclosureAtS& e);
OrderedJson sweep_json(const SweepResult& r);

// Re-derives the scaled-margin / radius chain from the stored bounds and
// checks ordering and containment invariants; returns problems found.
std::vector<std::string> validate_fixed_report(const OrderedJson& j);
std::vector<std::string> validate_param_report(const OrderedJson& j);

void write_text_file(const std::string& path, const std::string& text);

// 201 evenly spaced nu in [0, ub]: nu, scalar radii, then per-component radii.
std::string lambda_curve_csv(const ParamBounds& bounds, const FixedCertificate& fc, double ub);
// One row per segment per component with the approximation, inclusion and
// exclusion boxes over that segment's certified parameter interval.
std::string sweep_csv(const SweepResult& r);

}  // namespace paramex
