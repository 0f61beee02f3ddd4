// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "json.hpp"

#include "fcm/cmtypes.hpp"
#include "fcm/relhunt.hpp"
#include "fcm/shtuka.hpp"
#include "fcm/tate.hpp"
#include "fcm/tmodule.hpp"

namespace fcm {

using json = nlohmann::json;

json rat_json(const Rat& r);
Rat rat_from_json(const json& j);

json field_json(const FieldPtr& F);
FieldPtr field_from_json(const json& j);
// base-p digit vector, or a plain integer over a prime field
json elem_json(const Field& F, Elt x);
Elt elem_from_json(const Field& F, const json& j);

json to_json(const InfElem& x);
InfElem inf_from_json(const json& j);

json to_json(const FPoly& f);
FPoly fpoly_from_json(const json& j);

json to_json(const TateSeries& f);
TateSeries tate_from_json(const json& j);

json to_json(const CMFieldModel& K);
CMFieldModel model_from_json(const json& j);

json to_json(const CMDivisor& D);
CMDivisor divisor_from_json(const json& j);

json ring_json(const KRingPtr& A);
json to_json(const KElem& x);
json to_json(const KMat& M);
json to_json(const TModule& rho);
json to_json(const DualMotive& M);

json to_json(const RelationCertificate& c);
json to_json(const DiffEqReport& r);

json read_json_file(const std::string& path);

}  // namespace fcm
