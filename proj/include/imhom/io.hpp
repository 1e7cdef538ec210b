#pragma once

#include <filesystem>
#include <string>

#include "imhom/grid.hpp"

namespace imhom {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV: one row per node, coordinates then value, full double precision.
void write_field_csv(const std::filesystem::path& path, const TorusGrid& g,
                     const Eigen::VectorXd& v);
void write_field_csv(const std::filesystem::path& path, const SlabGrid& g,
                     const Eigen::VectorXd& v);

// Compact binary layout: uint32 d, uint32 per-axis node counts, then 8-byte
// reals node-major.
void write_field_bin(const std::filesystem::path& path, const TorusGrid& g,
                     const Eigen::VectorXd& v);
void write_field_bin(const std::filesystem::path& path, const SlabGrid& g,
                     const Eigen::VectorXd& v);

// Reads back a binary dump (dimensions + payload); used by round-trip tests
// and external consumers.
std::pair<std::vector<uint32_t>, Eigen::VectorXd> read_field_bin(const std::filesystem::path& path);

}  // namespace imhom
