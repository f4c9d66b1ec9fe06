#pragma once

// JSON and CSV forms of the library types. Tet indices are 1-based in files.

#include <ostream>
#include <string>

#include <json.hpp>

#include "geotrans/projective.hpp"
#include "geotrans/real_variety.hpp"
#include "geotrans/transition.hpp"
#include "geotrans/triangulation.hpp"

namespace geotrans
{

using json = nlohmann::ordered_json;

json to_json(const BNum& z);
BNum bnum_from_json(const json& j);

json to_json(const PB1Point& p);
PB1Point pb1point_from_json(const json& j);

/** @brief {"sign": +-1, "exponents": {"tet.slot": int}} */
json to_json(const ShapeMonomial& m);
ShapeMonomial monomial_from_json(const json& j);

json to_json(const IdealTriangulation& t);
IdealTriangulation triangulation_from_json(const json& j);

json to_json(const RealSolution& s);
RealSolution real_solution_from_json(const json& j);

json to_json(const BSolution& s);
BSolution bsolution_from_json(const json& j);

json to_json(const CompletionReport& r);
json to_json(const TachyonStructure& t);

/** @brief Header of the transition CSV. */
inline constexpr const char* kTransitionCsvHeader = "t,j,re,im,c1,ci,ct,cit";

/** @brief One row per shape and sample plus a row with j = H for the boundary monomial. */
void emit_transition_csv(const TransitionPath& path, std::ostream& out);

/** @brief Shortest decimal form that reads back to the same double. */
std::string format_double(double x);

}  // namespace geotrans
