#ifndef QMC_JSON_IO_HPP
#define QMC_JSON_IO_HPP

#include <json.hpp>

#include "qmc/boundary.hpp"
#include "qmc/finite_volume.hpp"
#include "qmc/linalg.hpp"
#include "qmc/model.hpp"
#include "qmc/observables.hpp"
#include "qmc/phase.hpp"
#include "qmc/tree.hpp"

namespace qmc {

using Json = nlohmann::ordered_json;

// The root serializes as [].
void to_json(Json& j, const TreeCoord& x);
void from_json(const Json& j, TreeCoord& x);

/// {"support": [...], "repr": "dense"|"diag", "entries": [[re, im], ...]}, row-major for dense.
void to_json(Json& j, const LocalOperator& a);
void from_json(const Json& j, LocalOperator& a);

Json site_operator_json(const SiteOperator& a);

void to_json(Json& j, const ModelParams& p);
void from_json(const Json& j, ModelParams& p);

void to_json(Json& j, const BoundarySolution& s);
void to_json(Json& j, const ProjectivityReport& r);
void to_json(Json& j, const BoundaryEquationReport& r);
void to_json(Json& j, const PhasePoint& p);
void to_json(Json& j, const TransferData& t);
void to_json(Json& j, const WitnessReport& r);
void to_json(Json& j, const OverlapRow& r);
void to_json(Json& j, const Resolution& r);

}  // namespace qmc

#endif  // QMC_JSON_IO_HPP
