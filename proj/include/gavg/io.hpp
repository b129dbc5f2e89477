#pragma once

#include <string>
#include <vector>

#include "gavg/field.hpp"

namespace gavg {

enum class FieldFormat { text, pgm };

// text: header "nx ny hx hy", then ny rows of nx values ("nan" at mask-false
// nodes), %.17g so reimport is bit-exact. pgm: 16-bit grayscale heatmap,
// lossy, for visualization only. Throws io_error when the path is unwritable.
void export_field(const GridFunction& u, const std::string& path, FieldFormat format);

// Reads the text format back; the grid is recentered on the origin and the
// mask reconstructed from "nan" tokens. Malformed input throws parse_error
// naming the offending line and the expected value count.
GridFunction import_field(const std::string& path);

// "iteration,energy,residual" header plus one row per iterate.
void write_history_csv(const std::string& path, const std::vector<double>& energy,
                       const std::vector<double>& residual);

}  // namespace gavg
