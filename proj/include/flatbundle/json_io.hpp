#pragma once

#include <string>

#include <json.hpp>

#include "flatbundle/bundle.hpp"
#include "flatbundle/quasirep.hpp"
#include "flatbundle/simplicial.hpp"

namespace flatbundle {

using Json = nlohmann::json;

// Simplices render as comma-joined vertex lists, transition pairs as
// "rho<sigma", e.g. "0,1<0,1,2".
std::string simplex_key(const Simplex& s);
Simplex simplex_from_key(const std::string& key);

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

Json sampled_to_json(const SampledUnitaryMap& f);
SampledUnitaryMap sampled_from_json(const Json& j);

// {"schema":"1","type":"complex","simplices":[...],"orientation":{...}}
Json complex_to_json(const Complex& x);
Complex complex_from_json(const Json& j);

// {"schema":"1","type":"bundle","rank":..,"depth":..,"complex":{...},
//  "transitions":{"0,1<0,1,2":{...}}}
Json bundle_to_json(const CocycleBundle& e);
CocycleBundle bundle_from_json(const Json& j);

// {"schema":"1","type":"rep","generators":[...],"relations":[...],
//  "basepoint":..,"generator_loops":[...],"generator_edges":[...],
//  "images":[...]}
Json rep_to_json(const AlmostRep& r);
AlmostRep rep_from_json(const Json& j);

Json trivialization_to_json(const GlobalTrivialization& t);
GlobalTrivialization trivialization_from_json(const Json& j);

// File helpers; parse problems surface as InputError.
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace flatbundle
