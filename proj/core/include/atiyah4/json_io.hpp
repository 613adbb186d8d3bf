#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "atiyah4/explorer.hpp"

// JSON bindings. Conventions: complex numbers as [re, im]; point indices
// 1-based (matching the t_ij notation); sample indices 0-based (they key the
// deterministic sampler).

namespace atiyah4 {

using Json = nlohmann::json;

Json complex_json(Complex z);

void to_json(Json& j, const BallPoint& p);
void to_json(Json& j, const IdealPoint& p);
void to_json(Json& j, const ProjPoint& p);
void to_json(Json& j, const MobiusMap& m);
void to_json(Json& j, const Configuration& c);
void to_json(Json& j, const Tolerances& t);
void to_json(Json& j, const CoplanarityResult& r);
void to_json(Json& j, const AtiyahMatrix& m);
void to_json(Json& j, const RelationVector& c);
void to_json(Json& j, const RelationCubic& g);
void to_json(Json& j, const Scenario& s);
void to_json(Json& j, const Line& l);
void to_json(Json& j, const Disk& d);
void to_json(Json& j, const CircularDomain& d);
void to_json(Json& j, const DomainWitness& w);
void to_json(Json& j, const FaceCircle& f);
void to_json(Json& j, const FaceAudit& f);
void to_json(Json& j, const IncidenceReport& r);
void to_json(Json& j, const TypeSignature& s);
void to_json(Json& j, const ScenarioATriplet& t);
void to_json(Json& j, const ScenarioAReport& r);
void to_json(Json& j, const ScenarioBTriplet& t);
void to_json(Json& j, const ScenarioBReport& r);
void to_json(Json& j, const ScenarioCReport& r);
void to_json(Json& j, const CertificateReport& r);
void to_json(Json& j, const SampleRecord& r);
void to_json(Json& j, const BatchSummary& s);
void to_json(Json& j, const SearchResult& r);

// {"points": [[x,y,z], ...]} with exactly four finite points; rejects norms
// >= 1 before applying the configured r_max / min_sep.
Configuration read_configuration(const Json& j, const Tolerances& tol = {});

// Inline JSON (leading '{'), "-" for stdin, otherwise a file path.
Configuration read_configuration_source(const std::string& source, const Tolerances& tol = {});

// Relation vector from [[re,im], [re,im], [re,im], [re,im]].
RelationVector read_relation(const Json& j);

// True when every number reachable from j is finite.
bool json_all_finite(const Json& j);

}  // namespace atiyah4
