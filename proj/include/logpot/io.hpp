#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "logpot/disc_spectrum.hpp"
#include "logpot/mask.hpp"
#include "logpot/shape.hpp"
#include "logpot/solver.hpp"
#include "logpot/tdiam.hpp"
#include "logpot/verify.hpp"

namespace logpot::io {

using nlohmann::json;

inline constexpr const char* kShapeSchema = "logpot.shape/1";
inline constexpr const char* kSpectralSchema = "logpot.spectral/1";
inline constexpr const char* kReportSchema = "logpot.report/1";
inline constexpr const char* kTdiamSchema = "logpot.tdiam/1";
inline constexpr const char* kRefineSchema = "logpot.refine/1";
inline constexpr const char* kDiscSchema = "logpot.disc/1";
inline constexpr const char* kMaskSchema = "logpot.mask/1";

/// {"kind": ..., parameters}; throws InputError naming the offending field.
Shape shape_from_json(const json& j);
json shape_to_json(const Shape& s);

/// Compact form "kind:p1,p2,...": disc:R[,cx,cy], annulus:R,r[,cx,cy],
/// eccentric:R,r,t, ellipse:a,b[,angle,cx,cy], rect:x0,y0,x1,y1, square:side.
Shape parse_shape_string(const std::string& text);

/// Inline JSON (leading '{'), an existing file, or the compact form.
Shape load_shape(const std::string& arg);

std::vector<double> parse_list(const std::string& text);

json to_json(const DiscEig& e);
json to_json(const SpectralResult& r, const PixelMask& mask, const KernelSpec& kernel, bool with_vectors);
json to_json(const SignReport& s);
json to_json(const ExperimentReport& r);
json to_json(const RefineTable& t);
json to_json(const TdiamEstimate& t, const PositivityResult& p);
json to_json(const GapResult& g);

/// Header row of column names, then one row per sample.
std::string to_csv(const ExperimentReport& r);

/// Text bitmap: "P1", comment lines "# logpot-mask v1", "# origin ox oy",
/// "# h h", then "nx ny" and ny rows of 0/1 from the top row down.
std::string mask_to_pbm(const PixelMask& m);
PixelMask mask_from_pbm(const std::string& text);
json mask_metadata(const PixelMask& m);

/// "LOGPOTMX", uint32 version, uint64 rows, uint64 cols, double h, row-major doubles.
std::string matrix_blob(const Eigen::MatrixXd& a, double h);

std::string read_file(const std::string& path);

/// Writes every (path, content) pair through a temporary file and rename.
/// All temporaries are written before the first rename; on failure every
/// temporary is removed.
void write_atomic(const std::vector<std::pair<std::string, std::string>>& files);

} // namespace logpot::io
