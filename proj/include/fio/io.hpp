// Binary containers for grid data (FIOG v1) and symbols (FIOS v1), JSON
// sidecars, and atomic (temp file + rename) output.
//
// FIOG v1, little-endian:
//   "FIOG" | u32 version = 1 | u32 n | u32 N | u8 domain (0 space, 1 frequency)
//   | N^n x (f64 re, f64 im), row-major, frequencies in unshifted DFT order.
// FIOS v1:
//   "FIOS" | u32 version = 1 | u32 n | u32 N | u8 domain = 0 | u8 representation
//   (0 dense, 1 separable) | u32 K | payload
// with a dense payload of N^{2n} complex values in eta-major order, or K pairs of
// complete FIOG blocks (b_m in space, e_m in frequency).
#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "fio/grid.hpp"
#include "fio/symbols.hpp"

namespace fio {

enum class Domain : std::uint8_t { space = 0, frequency = 1 };

struct GridArray {
  Grid grid;
  Domain domain = Domain::space;
  std::vector<cplx> values;
};

/// Writes `text` to `path` through a sibling temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);

std::string encode_fiog(const GridArray& a);
GridArray decode_fiog(const std::string& bytes);
std::string encode_fios(const RoughSymbol& a);
RoughSymbol decode_fios(const std::string& bytes);

/// Sidecar: same basename with extension ".json".
std::filesystem::path sidecar_path(const std::filesystem::path& data);

void write_fiog(const std::filesystem::path& path, const GridArray& a, const nlohmann::json& provenance = {});
void write_fiog(const std::filesystem::path& path, const GridFunction& f, const nlohmann::json& provenance = {});
GridArray read_fiog(const std::filesystem::path& path);
/// Reads a FIOG file as space samples, transforming frequency files back.
GridFunction read_grid_function(const std::filesystem::path& path);

void write_fios(const std::filesystem::path& path, const RoughSymbol& a, const nlohmann::json& provenance = {});
RoughSymbol read_fios(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace fio
