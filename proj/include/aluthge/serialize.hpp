#pragma once

// JSON forms used by the command-line harness.
//
//   CMatrix     {"rows": n, "cols": m, "re": [...], "im": [...]}   row-major
//   AlgElem     {"block_dims": [...], "blocks": [CMatrix, ...]}
//   PreserverMap{"kind": "unitary_conj", "v": AlgElem} and friends
//
// Parsing failures raise Error with Errc::Parse.

#include <json.hpp>

#include "aluthge/algebra.hpp"
#include "aluthge/preservers.hpp"

namespace aluthge {

using Json = nlohmann::ordered_json;

Json to_json(const CMatrix& m);
CMatrix cmatrix_from_json(const Json& j);

Json to_json(const AlgElem& a);
AlgElem algelem_from_json(const Json& j);

Json to_json(Complex z);  // [re, im]
Complex complex_from_json(const Json& j);

Json to_json(const PreserverMap& phi);
PreserverMap preserver_from_json(const Json& j);

Json to_json(const TrialReport& r);

}  // namespace aluthge
