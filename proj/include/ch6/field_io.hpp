// field_io.hpp - binary field files ("CH6F") with bit-exact roundtrips
#pragma once

#include <string>

#include "ch6/field.hpp"

namespace ch6 {

// Layout (little-endian): magic "CH6F", u32 version = 1, u32 kind
// (0 nodal, 1 spectral), u32 dim, u32 modes[dim], f64 lengths[dim],
// f64 payload[prod(modes)]. Writes go to a temp file renamed into place.
void write_field(const std::string& path, const SpectralField& field);
void write_field(const std::string& path, const GridField& field);

enum class FieldFileKind { nodal = 0, spectral = 1 };

FieldFileKind peek_field_kind(const std::string& path);
SpectralField read_spectral_field(const std::string& path);
GridField read_nodal_field(const std::string& path);

} // namespace ch6
