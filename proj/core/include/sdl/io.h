#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sdl/freiman.h"
#include "sdl/group.h"
#include "sdl/group_set.h"
#include "sdl/progressions.h"
#include "sdl/rational.h"
#include "sdl/regularity.h"
#include "sdl/setarith.h"
#include "sdl/vc.h"

namespace sdl {

using Json = nlohmann::json;

// Symmetric group on n points (n <= 6); permutations in lexicographic order,
// (ab)(i) = a(b(i)).
GroupPtr symmetric_group(unsigned n);
// Dihedral group of order 2n; r^i s^j is encoded as i + n j.
GroupPtr dihedral_group(unsigned n);

// Group JSON: {"abelian": [m...]}, {"cyclic": n}, {"symmetric": n},
// {"dihedral": n} or {"cayley": {"order", "identity", "table", "trusted"}}.
// Also the tagged form {"type": "abelian", "moduli": [...]} or
// {"type": "cayley", "order", "identity", "table"}.
GroupPtr group_from_json(const Json& j);
Json group_to_json(const FiniteGroup& g);

// Shorthand: "Z12", "Z2^4", "Z4xZ2", "S3", "D5", inline JSON, or a JSON file.
GroupPtr parse_group_arg(const std::string& text);

// Elements are indices or coordinate arrays; also {"elements": [...]} or
// {"bitset_hex": "..."}.
GroupSet set_from_json(const GroupPtr& group, const Json& j);
Json set_to_json(const GroupSet& s);
Json elements_to_json(const std::vector<Element>& xs);
// "0,1,2", inline JSON or a JSON file.
GroupSet parse_set_arg(const GroupPtr& group, const std::string& text);

Rational rational_from_json(const Json& j);
Json rational_to_json(const Rational& q);

// {"kind": "arithmetic"|"generalized", "generators": [...], "lengths": [...],
//  "subgroup": [...]} (subgroup defaults to {identity}), or the short form
// {"gap": {"gens": [...], "lengths": [...]}, "subgroup": [...]} ("nil" for
// the generalized kind). Rationals may also be {"num": p, "den": q}.
CosetProgressionSpec progression_from_json(const GroupPtr& group, const Json& j);
Json progression_to_json(const CosetProgressionSpec& p);

// {"characters": [[c_1..c_n], ...], "delta": "3/10"}.
BohrSpec bohr_from_json(const GroupPtr& group, const Json& j);
Json bohr_to_json(const BohrSpec& b);

// {"left": n, "right": m, "edges": [[v, w], ...]}, {"half_graph": d} or
// {"power_set": d}.
BipartiteGraphSpec graph_from_json(const Json& j);

// {"source": group, "target": group, "pairs": [[a, a'], ...]}.
FreimanMap map_from_json(const Json& j);
Json map_to_json(const FreimanMap& m);

Json report_to_json(const ConditionReport& r);
Json certificate_to_json(const RegularityCertificate& c);
// Restores the certificate as stored; the recorded report is not trusted.
RegularityCertificate certificate_from_json(const Json& j);

// Result records shared by the CLI and the plan runner.
Json growth_to_json(const GrowthReport& r);
Json cover_to_json(const CoverResult& r);
Json plunnecke_to_json(const PlunneckeReport& r);
Json vc_to_json(const TranslateVc& r);
Json nip_to_json(const NipResult& r);
Json stability_to_json(const StabilityResult& r);
Json sandwich_to_json(const Sandwich& s);
Json normal_form_to_json(const NormalFormReport& r);
Json bohr_search_to_json(const BohrSearch& s);
Json bohr_cover_to_json(const BohrCover& c);
Json model_to_json(const Model& m);
Json freiman_check_to_json(const FreimanCheck& c);
Json cut_witness_to_json(const std::optional<CutWitness>& w);

// Parse errors become InputError naming the file, line and column.
Json read_json_file(const std::string& path);
Json parse_json_text(std::string_view text, const std::string& origin);

}  // namespace sdl
