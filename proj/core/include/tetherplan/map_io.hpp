#pragma once

#include <filesystem>
#include <string>

#include "tetherplan/voxel_map.hpp"

namespace tetherplan {

// Loads a map from either supported format:
//  - JSON document with fields resolution (m), dims [nx,ny,nz],
//    origin [x,y,z], occupied (list of [i,j,k]);
//  - ASCII layers for hand-authored scenes: optional "resolution r" and
//    "origin x y z" header lines, then ny layers bottom-first separated by
//    blank lines; each layer is nz lines of nx characters, '#' occupied,
//    '.' free, line k=0 first.
// The format is sniffed from the first non-space character.
VoxelMap load_map(const std::filesystem::path& path);

VoxelMap parse_map_json(const std::string& text, const std::string& name);
VoxelMap parse_map_ascii(const std::string& text, const std::string& name);

void save_map_json(const VoxelMap& map, const std::filesystem::path& path);
std::string map_to_json(const VoxelMap& map);

} // namespace tetherplan
