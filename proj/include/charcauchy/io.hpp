#pragma once

#include <string>

#include <json.hpp>

#include "charcauchy/operators.hpp"

namespace charcauchy {

using Json = nlohmann::ordered_json;

// Shortest decimal representation that round-trips the 64-bit value.
std::string format_double(double x);

// CSV with columns u,v,value,region (region = Jplus | Jminus | N | exterior;
// nodes on the null line carry N since they belong to both causal sides).
void write_field_csv(const std::string& path, const GridField& field);

// Re-reads a field written by write_field_csv onto the given grid.
GridField read_field_csv(const std::string& path, const SlabGrid& grid);

void write_json(const std::string& path, const Json& j);

}  // namespace charcauchy
