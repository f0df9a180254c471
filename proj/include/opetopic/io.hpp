#pragma once

#include <string>

#include "json.hpp"
#include "opetopic/algebra.hpp"
#include "opetopic/code.hpp"
#include "opetopic/opetope.hpp"
#include "opetopic/rewrite.hpp"
#include "opetopic/term_gen.hpp"

namespace opetopic::io {

using json = nlohmann::ordered_json;

// Both throw Error on I/O failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// A family table file is a JSON object from index encodings (value text)
// to lists of element encodings.
FamilyRef table_from_json(const std::string& name, const json& j);
// Resolves (table-fam FILE) relative to dir.
TableLoader file_loader(const std::string& dir);

// {"carrier": [...], "unit": e, "mul": {a: {b: c, ...}, ...}}; numbers are
// accepted as element names.  Throws ParseError on a malformed spec.
MonoidSpec monoid_from_json(const json& j, const std::string& name = "M");
json to_json(const MonoidSpec& spec);

// {"m0": CODE, "families": [FAM, ...]}
FamilyStack stack_from_json(const json& j, const TableLoader& loader);

json to_json(const CheckReport& r);
json to_json(const FibrancyReport& r);
json to_json(const NormalizationResult& r);
json to_json(const JoinReport& r);
json to_json(const FuzzReport& r);
json to_json(const LiftResult& r);
json to_json(const OpetopeListing& l);

}  // namespace opetopic::io
