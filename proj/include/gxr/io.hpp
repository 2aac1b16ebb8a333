#pragma once

#include "gxr/basis.hpp"

#include <map>
#include <string>

namespace gxr {

class IoError : public Error {
public:
    using Error::Error;
};

/// Free-form key=value annotations (seed, phantom, method...). Stored as "# key=value"
/// comment lines in CSV files and in a "<path>.meta" sidecar next to binary files.
using Metadata = std::map<std::string, std::string>;

enum class FileFormat { binary, csv };

/// Binary when the path does not end in ".csv".
FileFormat format_for_path(const std::string& path);

// Sinograms. Binary layout (little-endian): "GXR1", float64 kappa, float64 radius,
// uint32 n_beta, uint32 n_alpha, then n_beta * n_alpha (re, im) float64 pairs, rows beta.
void write_sinogram(const std::string& path, const GridSinogram& sino, const Metadata& meta = {});
GridSinogram read_sinogram(const std::string& path, Metadata* meta = nullptr);

// Disk fields. Binary layout: "GXF1", kappa, radius, uint32 n_rho, uint32 n_omega, pairs.
void write_field(const std::string& path, const GridField& field, const Metadata& meta = {});
GridField read_field(const std::string& path, Metadata* meta = nullptr);

/// Coefficient table with header n,k,re,im (preceded by # comment lines holding
/// kappa, radius, degree and the metadata).
void write_coefficients_csv(const std::string& path, const SpectralField& spec, const Metadata& meta = {});
SpectralField read_coefficients_csv(const std::string& path, Metadata* meta = nullptr);

/// 8-bit magnitude preview of spec (in the given frame) on a size x size raster of
/// the bounding square; pixels outside the disk are 0. The linear scaling
/// (min and max magnitude) goes to "<path>.txt".
void write_pgm(const std::string& path, const SpectralField& spec, Frame frame, int size = 256,
               const Metadata& meta = {});

/// Writes content to path through a temporary file and a rename.
void write_atomic(const std::string& path, const std::string& content);

} // namespace gxr
