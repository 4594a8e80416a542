#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <Eigen/Core>
#include "json.hpp"

#include "gvar/core/grouping.hpp"
#include "gvar/core/measure.hpp"
#include "gvar/core/normed_space.hpp"
#include "gvar/expectation.hpp"
#include "gvar/gamma_norms.hpp"
#include "gvar/stochastic.hpp"

namespace gvar::io {

using json = nlohmann::json;

/// Partition, target space and per-atom vectors as stored in a measure document:
/// {"weights":[..], "boundaries":[..]?, "dim":d, "norm":"l1"|"l2"|"linf"|{"lp":p},
///  "values":[[..], ..]}
struct MeasureDocument {
    AtomPartition space;
    NormedSpace target;
    Eigen::MatrixXd values; ///< d x N

    VectorMeasure measure() const { return {space, values}; }
    StepFunction density() const { return {space, values}; }
};

MeasureDocument parse_measure_document(const json& doc);
json measure_document(const AtomPartition& space, const NormedSpace& target,
                      const Eigen::MatrixXd& values);

NormedSpace parse_norm(const json& norm, Index dim);
json norm_json(const NormedSpace& X);

json to_json(const SumEstimate& e);
json to_json(const Grouping& g);
json to_json(const NormReport& r);
json to_json(const Comparison& c);

// Flat binary ensemble dump: 16-byte header (magic "GVLB", u32 version, u32 M, u32 N)
// followed by M x N little-endian doubles, row-major.
inline constexpr std::uint32_t kEnsembleVersion = 1;

void write_ensemble(std::ostream& out, const BrownianEnsemble& W);
/// Returns the M x N increments stored in a dump.
Eigen::MatrixXd read_ensemble_increments(std::istream& in);

} // namespace gvar::io
