#pragma once

#include <string>

#include "mcvar/config.hpp"
#include "mcvar/elliptic.hpp"
#include "mcvar/iterate.hpp"

namespace mcvar {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV with a mandatory header: x,y,value (n = 2) or x,value (n = 1), one row
// per non-exterior node in compact order, full double precision.
void write_csv(const std::string& path, const ScalarField& f);
ScalarField read_csv(const std::string& path, const GridPtr& grid);

// Graph mesh of u with per-vertex upward unit normals; cut cells along a disk
// boundary are clipped against the boundary sites, so the mesh is watertight.
// Needs the trace of u for the boundary ring. 1-d graphs export as polylines.
void write_obj(const std::string& path, const ScalarField& u);

// MatrixMarket coordinate format (general real).
void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& A);

// The JSON run report (schema_version 1). Timing lives under "timing" so
// reports are bit-comparable without it.
std::string report_json(const SolveReport& rep, const RunConfig& cfg);
void write_report(const std::string& path, const SolveReport& rep, const RunConfig& cfg);

std::string admissibility_json(const AdmissibilityReport& rep);

} // namespace mcvar
