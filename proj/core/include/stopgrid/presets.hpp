#pragma once

#include "stopgrid/model.hpp"

#include <string>
#include <vector>

namespace stopgrid {

struct PresetRun {
    std::string label;
    ModelParams params;
};

/// What a figure's data series contain.
enum class FigureKind {
    value_curves,    ///< V_1, F_1 with their bounds (figure 1)
    level_curves,    ///< V_n, F_n, g_n for n = 1..3 (figure 2)
    boundary_series, ///< b_N, ..., b_1 per run (figures 3-8)
};

struct FigurePreset {
    int figure = 0;
    FigureKind kind = FigureKind::boundary_series;
    std::vector<PresetRun> runs;
};

/// The shared base parameter set: mu0=-1, mu1=1, sigma=4, r=0.1, N=10, N*eps=1.
ModelParams base_params();

/// Named parameter sets behind each of the eight published figures.
const std::vector<FigurePreset>& figure_presets();

const FigurePreset& figure_preset(int figure);

} // namespace stopgrid
