#include "stopgrid/presets.hpp"

#include "stopgrid/errors.hpp"

#include <cstdio>

namespace stopgrid {

ModelParams base_params() {
    return ModelParams::with_total_learning(-1.0, 1.0, 4.0, 0.1, 10, 1.0);
}

namespace {

std::vector<FigurePreset> make_presets() {
    const ModelParams base = base_params();
    std::vector<FigurePreset> figs;

    figs.push_back({1, FigureKind::value_curves, {{"base", base}}});
    figs.push_back({2, FigureKind::level_curves, {{"base", base}}});
    figs.push_back({3, FigureKind::boundary_series, {{"base", base}}});

    FigurePreset fig4{4, FigureKind::boundary_series, {}};
    fig4.runs.push_back({"total_learning=1", base});
    fig4.runs.push_back(
        {"total_learning=10", ModelParams::with_total_learning(-1, 1, 4, 0.1, 10, 10)});
    figs.push_back(fig4);

    auto num_label = [](const char* name, double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s=%g", name, v);
        return std::string(buf);
    };

    FigurePreset fig5{5, FigureKind::boundary_series, {}};
    for (double sigma : {1.0, 4.0, 10.0}) {
        ModelParams p = base;
        p.sigma = sigma;
        fig5.runs.push_back({num_label("sigma", sigma), p});
    }
    figs.push_back(fig5);

    FigurePreset fig6{6, FigureKind::boundary_series, {}};
    for (double r : {0.01, 0.1, 0.5}) {
        ModelParams p = base;
        p.r = r;
        fig6.runs.push_back({num_label("r", r), p});
    }
    figs.push_back(fig6);

    FigurePreset fig7{7, FigureKind::boundary_series, {}};
    for (auto [mu0, mu1] : {std::pair{-5.0, 1.0}, {-2.0, 1.0}, {-1.0, 1.0},
                            {-1.0, 2.0}, {-1.0, 5.0}}) {
        char label[32];
        std::snprintf(label, sizeof label, "mu=%g:%g", mu0, mu1);
        fig7.runs.push_back(
            {label, ModelParams::with_total_learning(mu0, mu1, 4, 0.1, 10, 1)});
    }
    figs.push_back(fig7);

    FigurePreset fig8{8, FigureKind::boundary_series, {}};
    for (int n : {10, 20, 100}) {
        fig8.runs.push_back(
            {"N=" + std::to_string(n), ModelParams::with_total_learning(-1, 1, 4, 0.1, n, 1)});
    }
    figs.push_back(fig8);

    return figs;
}

} // namespace

const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> presets = make_presets();
    return presets;
}

const FigurePreset& figure_preset(int figure) {
    for (const auto& f : figure_presets()) {
        if (f.figure == figure) return f;
    }
    throw InvalidParameter("figure_preset: figure must lie in 1..8");
}

} // namespace stopgrid
