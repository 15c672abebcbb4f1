#pragma once

// Native instance format (JSON):
//
//   {"cone": [{"kind": "psd", "size": 3}, ...], "m": 2, "theta": 10.0,
//    "c": [...], "b": [...], "A": [[...], [...]]}
//
// Coordinates use the scaled vectorization of jordan.hpp. Doubles are written
// in shortest round-trip form, so write-then-read reproduces every float.

#include <filesystem>
#include <iosfwd>

#include "json.hpp"
#include "rpcone/program.hpp"

namespace rpcone {

nlohmann::json cone_to_json(const ConeSpec& spec);
ConeSpec cone_from_json(const nlohmann::json& j);

/// Parses "psd:15", "orthant:4,lorentz:3", ...
ConeSpec parse_cone(const std::string& text);

nlohmann::json program_to_json(const ConicProgram& p);
ConicProgram program_from_json(const nlohmann::json& j);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

void write_program(const std::filesystem::path& path, const ConicProgram& p);
ConicProgram read_program(const std::filesystem::path& path);

/// Reads an SDPA sparse (.dat-s) file. SDPA's dual
///   max <F0, Y>  s.t.  <F_i, Y> = c_i,  Y psd
/// becomes (P) with A_i = F_i, b = c, cost = -F0, so objective values carry the
/// opposite sign. Positive block sizes map to Psd blocks, negative (diagonal)
/// blocks to Orthant blocks. SDPA has no trace bound; `theta` supplies it.
ConicProgram read_sdpa(std::istream& in, double theta);
ConicProgram read_sdpa(const std::filesystem::path& path, double theta);

}  // namespace rpcone
