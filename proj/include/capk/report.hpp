#pragma once

#include <json.hpp>

#include "capk/capitulation.hpp"

namespace capk {

using Json = nlohmann::json;

// Integers become JSON numbers when they fit in 64 bits, strings otherwise.
Json to_json(const Int& a);
Json to_json(const Rat& q);
Json to_json(const Vec& v);
Json to_json(const IntMatrix& m);
Json to_json(const FgAbelianGroup& g);
Json to_json(const QuadraticFieldData& f, const QuadElement& x);
Json to_json(const QuadIdeal& I);
Json to_json(const BiquadFieldData& k, const BiquadElement& x);
Json to_json(const KIdeal& I);

Json field_json(const QuadraticFieldData& f);
Json field_json(const BiquadFieldData& k);
Json class_group_json(const QuadraticFieldData& f, const ClassGroup& cl);
Json sigma_class_group_json(const QuadraticFieldData& f, const SigmaClassGroup& cl);
Json units_json(const SUnitLattice& u);
Json units_json(const KUnitGroup& u);
Json module_json(const CyclicModule& m);
Json lac_json(const LacTerms& l);
Json report_json(const CapitulationReport& r);
Json mordell_weil_json(const MordellWeilInput& in, const MordellWeilReport& r);

// Parsers for the file inputs of the command line.
CyclicModule module_from_json(const Json& j);
MordellWeilInput mordell_weil_from_json(const Json& j);

}  // namespace capk
