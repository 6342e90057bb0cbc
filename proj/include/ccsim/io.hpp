#pragma once

// File formats. Everything textual uses %.17g so doubles round-trip exactly,
// which is what makes reruns byte-comparable and checkpoint restarts
// bit-exact.
//
//   field CSV      line 1: geometry,resolution,time
//                  line 2: e.g. annulus,64x128,2.5e-01
//                  then n1 lines of n0 comma-separated values (row-major).
//   field binary   32-byte header: magic "CCF1", geometry u8, dim u8,
//                  pad u16, n0 u32, n1 u32, time f64, reserved u64;
//                  then n0*n1 little-endian f64 cell values, row-major.
//   diag CSV       header = diag_columns(), one row per record.
//   scalar CSV     two lines: names, values (used for checkpoint metadata).

#include <string>
#include <utility>
#include <vector>

#include "ccsim/grid.hpp"
#include "ccsim/record.hpp"

namespace ccsim {

std::string fmt_g17(double x);

void write_field_csv(const std::string& path, const ScalarField& f, double time);
ScalarField read_field_csv(const std::string& path, const Grid& g, double* time = nullptr);

void write_field_binary(const std::string& path, const ScalarField& f, double time);
ScalarField read_field_binary(const std::string& path, const Grid& g,
                              double* time = nullptr);

void write_diag_csv(const std::string& path, const std::vector<DiagRecord>& records);

void write_scalar_csv(const std::string& path,
                      const std::vector<std::pair<std::string, double>>& row);
std::vector<std::pair<std::string, double>> read_scalar_csv(const std::string& path);

// Generic table writer for report files; every cell is written verbatim.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace ccsim
