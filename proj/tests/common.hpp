#pragma once

#include <cmath>
#include <filesystem>
#include <string>

#include "fl/config.hpp"

namespace fl::test {

// Small grids: a forward solve takes about a second.
inline RealGrid small_x() { return RealGrid{-16.0, 16.0, 512}; }

inline SpectralGridParams small_z()
{
    SpectralGridParams p;
    p.z_cut = 8.0;
    p.n_z_outer = 256;
    return p;
}

inline Field gaussian(const RealGrid& g, double amp, double width = 1.0, double k = 0.0)
{
    VecR x = g.nodes();
    VecC v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = amp * std::exp(-x[i] * x[i] / (width * width)) * std::exp(cplx(0, k * x[i]));
    return Field::from_values(g, v);
}

inline const ForwardResult& small_forward()
{
    static const ForwardResult fr = forward_scatter(gaussian(small_x(), 0.25), make_spectral_grid(small_z()));
    return fr;
}

inline std::string tmp_path(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / "fl_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

inline double max_abs(const VecC& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

} // namespace fl::test
